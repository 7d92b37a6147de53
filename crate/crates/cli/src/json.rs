//! Certificate encoding. Every algebraic number is written as integer
//! coordinates in decimal strings, next to the basis they refer to.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use resym_core::biquad::{BiquadField, BiquadInt};
use resym_core::conic::{CaseTag, RationalConicSolution, RelativeConicSolution};
use resym_core::quadfield::QuadInt;
use resym_core::redei::RedeiCertificate;
use resym_core::symbol4::{KCertificate, SymbolResult};

/// `(a2 + b2·√d)/2`.
pub const QUAD_BASIS: [&str; 2] = ["1/2", "√d/2"];
/// `(c0 + c1·√m + c2·√n + c3·√m√n)/4`.
pub const BIQUAD_BASIS: [&str; 4] = ["1/4", "√m/4", "√n/4", "√m√n/4"];

pub fn dec(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| anyhow!("missing field `{key}`"))
}

pub fn int(v: &Value) -> Result<BigInt> {
    let s = v
        .as_str()
        .ok_or_else(|| anyhow!("expected a decimal string, got {v}"))?;
    if s.is_empty()
        || !s
            .trim_start_matches('-')
            .bytes()
            .all(|b| b.is_ascii_digit())
    {
        bail!("malformed integer {s:?}");
    }
    Ok(s.parse()?)
}

pub fn int_field(v: &Value, key: &str) -> Result<BigInt> {
    int(field(v, key)?).with_context(|| format!("field `{key}`"))
}

fn u64_field(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| anyhow!("field `{key}` is not a small integer"))
}

fn ints(v: &Value, len: usize) -> Result<Vec<BigInt>> {
    let a = v
        .as_array()
        .ok_or_else(|| anyhow!("expected an array, got {v}"))?;
    if a.len() != len {
        bail!("expected {len} entries, got {}", a.len());
    }
    a.iter().map(int).collect()
}

fn check_basis(v: &Value, expect: &[&str]) -> Result<()> {
    if *field(v, "basis")? != json!(expect) {
        bail!("unexpected basis {}", v["basis"]);
    }
    Ok(())
}

pub fn primes(ps: &[&BigInt]) -> Value {
    Value::Array(ps.iter().map(|p| dec(p)).collect())
}

pub fn primes_from(v: &Value, len: usize) -> Result<Vec<BigInt>> {
    ints(field(v, "primes")?, len)
}

pub fn quad(q: &QuadInt) -> Value {
    json!({ "d": dec(&q.d), "basis": QUAD_BASIS, "coords": [dec(&q.a2), dec(&q.b2)] })
}

pub fn quad_from(v: &Value) -> Result<QuadInt> {
    check_basis(v, &QUAD_BASIS)?;
    let c = ints(field(v, "coords")?, 2)?;
    let [a2, b2]: [BigInt; 2] = c.try_into().expect("length checked");
    Ok(QuadInt::from_doubled(a2, b2, int_field(v, "d")?)?)
}

pub fn biquad(b: &BiquadInt) -> Value {
    json!({
        "m": dec(&b.field.m),
        "n": quad(&b.field.n),
        "basis": BIQUAD_BASIS,
        "coords": b.c.iter().map(dec).collect::<Vec<_>>(),
    })
}

pub fn biquad_from(v: &Value) -> Result<BiquadInt> {
    check_basis(v, &BIQUAD_BASIS)?;
    let f = BiquadField::new(&int_field(v, "m")?, quad_from(field(v, "n")?)?)?;
    let c: [BigInt; 4] = ints(field(v, "coords")?, 4)?
        .try_into()
        .expect("length checked");
    Ok(BiquadInt::from_coords4(&f, c)?)
}

fn biquads(xs: &[BiquadInt]) -> Value {
    Value::Array(xs.iter().map(biquad).collect())
}

fn biquads_from(v: &Value) -> Result<Vec<BiquadInt>> {
    v.as_array()
        .ok_or_else(|| anyhow!("expected an array"))?
        .iter()
        .map(biquad_from)
        .collect()
}

pub fn rational(s: &RationalConicSolution) -> Value {
    json!({ "x": dec(&s.x), "y": dec(&s.y), "z": dec(&s.z), "m": s.m, "alpha": quad(&s.alpha) })
}

pub fn rational_from(v: &Value) -> Result<RationalConicSolution> {
    let m = u64_field(v, "m")?;
    Ok(RationalConicSolution {
        x: int_field(v, "x")?,
        y: int_field(v, "y")?,
        z: int_field(v, "z")?,
        alpha: quad_from(field(v, "alpha")?)?,
        m: u32::try_from(m).context("field `m`")?,
    })
}

fn case_from(v: &Value) -> Result<CaseTag> {
    match v.as_str() {
        Some("Z_odd") => Ok(CaseTag::ZOdd),
        Some("Y_odd") => Ok(CaseTag::YOdd),
        _ => bail!("unknown case tag {v}"),
    }
}

pub fn relative(s: &RelativeConicSolution) -> Value {
    json!({
        "X": quad(&s.x),
        "Y": quad(&s.y),
        "Z": quad(&s.z),
        "case": s.case_tag.to_string(),
        "lambda": biquad(&s.lambda_witness),
        "unit_index": s.unit_index,
        "theta_order": s.theta_order,
        "height": s.height,
    })
}

pub fn relative_from(v: &Value) -> Result<RelativeConicSolution> {
    Ok(RelativeConicSolution {
        x: quad_from(field(v, "X")?)?,
        y: quad_from(field(v, "Y")?)?,
        z: quad_from(field(v, "Z")?)?,
        case_tag: case_from(field(v, "case")?)?,
        lambda_witness: biquad_from(field(v, "lambda")?)?,
        unit_index: u8::try_from(u64_field(v, "unit_index")?)?,
        theta_order: u64_field(v, "theta_order")?,
        height: u64_field(v, "height")?,
    })
}

/// Budgets recorded in a certificate; a replay must use the same ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub z: BigInt,
    pub height: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            z: resym_core::conic::default_z_budget(),
            height: resym_core::conic::DEFAULT_HEIGHT_BUDGET,
        }
    }
}

impl Budgets {
    pub fn to_json(&self) -> Value {
        json!({ "z": dec(&self.z), "height": self.height })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(Budgets {
            z: int_field(v, "z")?,
            height: u64_field(v, "height")?,
        })
    }
}

/// Only the `z` budget bears on a triple symbol, so only it is recorded.
pub fn redei_certificate(
    p3: &BigInt,
    c: &RedeiCertificate,
    s1: &BigInt,
    z_budget: &BigInt,
) -> Value {
    json!({
        "kind": "redei",
        "primes": primes(&[&c.p1, &c.p2, p3]),
        "budget": { "z": dec(z_budget) },
        "solution": rational(&c.solution),
        "sqrt_p1_mod_p3": dec(s1),
    })
}

pub fn k_certificate(c: &KCertificate) -> Value {
    json!({
        "primes": primes(&[&c.p1, &c.p2, &c.p3]),
        "legendre_solution": rational(&c.redei.solution),
        "relative_solution": relative(&c.relsol),
        "case": c.case_tag.to_string(),
        "thetas": biquads(&c.thetas),
        "etas": c.etas.as_deref().map_or(Value::Null, biquads),
        "h": dec(&c.h),
    })
}

/// The recorded parts of a `K` certificate; identities are re-checked by
/// the caller through `assemble_k`.
pub struct KParts {
    pub primes: Vec<BigInt>,
    pub legendre: RationalConicSolution,
    pub relative: RelativeConicSolution,
    pub thetas: Vec<BiquadInt>,
    pub etas: Option<Vec<BiquadInt>>,
    pub h: BigInt,
}

pub fn k_parts_from(v: &Value) -> Result<KParts> {
    let etas = match field(v, "etas")? {
        Value::Null => None,
        e => Some(biquads_from(e)?),
    };
    Ok(KParts {
        primes: primes_from(v, 3)?,
        legendre: rational_from(field(v, "legendre_solution")?)?,
        relative: relative_from(field(v, "relative_solution")?)?,
        thetas: biquads_from(field(v, "thetas")?)?,
        etas,
        h: int_field(v, "h")?,
    })
}

pub fn symbol4_certificate(r: &SymbolResult, p4: &BigInt, budgets: &Budgets) -> Value {
    let c = &r.certificate;
    json!({
        "kind": "symbol4",
        "primes": primes(&[&c.p1, &c.p2, &c.p3, p4]),
        "budget": budgets.to_json(),
        "k": k_certificate(c),
        "roots": {
            "sqrt_p1": dec(&r.s1),
            "sqrt_p3": dec(&r.s3),
            "sqrt_alpha": r.s_alpha.as_ref().map_or(Value::Null, dec),
        },
        "characters": r.characters,
    })
}

/// `{"symbol": v, "certificate": {...}}`.
pub fn answer(symbol: i32, certificate: Value) -> Value {
    json!({ "symbol": symbol, "certificate": certificate })
}
