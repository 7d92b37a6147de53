//! The degree-64 field `K` and the fourth multiple residue symbol.
//!
//! `K = Q(√θ1, √θ2, √θ3, √θ4)` with `θ1 = X + Y√p3` (case Z odd), or the
//! conjugates of `θ' = X + Z√α` (case Y odd, where the integral
//! `η = 2X ± 2Y√p3` generate the same field). `p4` splits completely in `K`
//! iff all four generators are squares mod a prime above `p4`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, modp};
use crate::biquad::{BiquadField, BiquadInt};
use crate::conic::{self, CaseTag, RationalConicSolution, RelativeConicSolution, RelativeOptions};
use crate::quadfield::{self, QuadInt};
use crate::redei::{self, RedeiCertificate};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Congruences, pairwise symbols, triple symbols and `h(Q(√p1)) = 1` for
/// the first `ps.len()` entries (3 or 4).
fn validate(ps: &[&BigInt], z_budget: &BigInt) -> ValidationReport {
    let mut failures = Vec::new();
    let p1 = ps[0];
    if !arith::is_prime(p1) || modp(p1, &BigInt::from(8)) != BigInt::from(5) {
        failures.push("p1 ≡ 5 (mod 8)".to_string());
    }
    failures.extend(
        redei::triple_precondition(ps)
            .into_iter()
            .filter(|f| f != "p1 ≡ 1 (mod 4)"),
    );
    if failures.is_empty() {
        let n = ps.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    match redei::redei_symbol_with_budget(ps[i], ps[j], ps[k], z_budget) {
                        Ok((1, _)) => {}
                        Ok(_) => failures.push(format!("[p{},p{},p{}] = 1", i + 1, j + 1, k + 1)),
                        Err(e) => failures.push(format!(
                            "[p{},p{},p{}] evaluable: {e}",
                            i + 1,
                            j + 1,
                            k + 1
                        )),
                    }
                }
            }
        }
    }
    if arith::is_prime(p1) && !quadfield::class_number_is_one(p1).unwrap_or(false) {
        failures.push("h(Q(√p1)) = 1".to_string());
    }
    ValidationReport { failures }
}

pub fn validate_quadruple(p1: &BigInt, p2: &BigInt, p3: &BigInt, p4: &BigInt) -> ValidationReport {
    validate(&[p1, p2, p3, p4], &conic::default_z_budget())
}

pub fn validate_triple(p1: &BigInt, p2: &BigInt, p3: &BigInt) -> ValidationReport {
    validate(&[p1, p2, p3], &conic::default_z_budget())
}

/// As [`validate_quadruple`], evaluating triple symbols within `z_budget`.
pub fn validate_quadruple_with_budget(ps: [&BigInt; 4], z_budget: &BigInt) -> ValidationReport {
    validate(&ps, z_budget)
}

pub fn validate_triple_with_budget(ps: [&BigInt; 3], z_budget: &BigInt) -> ValidationReport {
    validate(&ps, z_budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCertificate {
    pub p1: BigInt,
    pub p2: BigInt,
    pub p3: BigInt,
    pub redei: RedeiCertificate,
    pub relsol: RelativeConicSolution,
    pub case_tag: CaseTag,
    /// `θ1..θ4` (case Z odd) or `θ'1..θ'4` (case Y odd).
    pub thetas: Vec<BiquadInt>,
    /// `η1..η4`, case Y odd only.
    pub etas: Option<Vec<BiquadInt>>,
    pub h: BigInt,
}

impl KCertificate {
    /// The generators whose characters decide splitting: `θ` or `η`.
    pub fn splitting_generators(&self) -> &[BiquadInt] {
        match &self.etas {
            Some(e) => e,
            None => &self.thetas,
        }
    }
}

/// Which solver outputs to use; the defaults give the canonical certificate.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Index into the Legendre solutions in search order.
    pub legendre_index: usize,
    pub z_budget: BigInt,
    pub relative: RelativeOptions,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            legendre_index: 0,
            z_budget: conic::default_z_budget(),
            relative: RelativeOptions::default(),
        }
    }
}

pub fn build_k(p1: &BigInt, p2: &BigInt, p3: &BigInt, avoid: &[BigInt]) -> Result<KCertificate> {
    build_k_with(p1, p2, p3, avoid, &BuildOptions::default())
}

pub fn build_k_with(
    p1: &BigInt,
    p2: &BigInt,
    p3: &BigInt,
    avoid: &[BigInt],
    opts: &BuildOptions,
) -> Result<KCertificate> {
    let rep = validate(&[p1, p2, p3], &opts.z_budget);
    if !rep.passed() {
        return Err(Error::Precondition(rep.failures));
    }
    let mut avoid_l = avoid.to_vec();
    avoid_l.push(p3.clone());
    let sols =
        conic::legendre_solutions(p1, p2, &avoid_l, &opts.z_budget, opts.legendre_index + 1)?;
    let sol = sols.get(opts.legendre_index).cloned().ok_or_else(|| {
        Error::BudgetExhausted(format!("fewer than {} solutions", opts.legendre_index + 1))
    })?;
    conic::check_rational_solution(p1, p2, &sol)?;
    let rel = conic::solve_relative_conic_with(p1, p3, &sol.alpha, avoid, &opts.relative)?;
    assemble_k(p1, p2, p3, sol, rel)
}

/// Builds and checks `K` from given solutions of both conics.
pub fn assemble_k(
    p1: &BigInt,
    p2: &BigInt,
    p3: &BigInt,
    sol: RationalConicSolution,
    rel: RelativeConicSolution,
) -> Result<KCertificate> {
    conic::check_rational_solution(p1, p2, &sol)?;
    let alpha = sol.alpha.clone();
    conic::check_relative_solution(p1, p3, &alpha, &rel)?;
    let (x, y, z) = (&rel.x, &rel.y, &rel.z);
    let f13 = BiquadField::rational(p1, p3)?;
    let gens = |f: &BiquadField, u: &QuadInt, v: &QuadInt| {
        [
            BiquadInt::from_parts(f, u, v),
            BiquadInt::from_parts(f, u, &v.neg()),
        ]
    };
    let h = &sol.z * z.norm();
    let (thetas, etas) = match rel.case_tag {
        CaseTag::ZOdd => {
            let [t1, t2] = gens(&f13, x, y);
            let [t3, t4] = gens(&f13, &x.conj(), &y.conj());
            (vec![t1, t2, t3, t4], None)
        }
        CaseTag::YOdd => {
            let fa = BiquadField::new(p1, alpha.clone())?;
            let fb = BiquadField::new(p1, alpha.conj())?;
            let [t1, t2] = gens(&fa, x, z);
            let [t3, t4] = gens(&fb, &x.conj(), &z.conj());
            let two = BigInt::from(2);
            let [e1, e2] = gens(&f13, &x.scale(&two), &y.scale(&two));
            let [e3, e4] = gens(&f13, &x.conj().scale(&two), &y.conj().scale(&two));
            (vec![t1, t2, t3, t4], Some(vec![e1, e2, e3, e4]))
        }
    };
    let cert = KCertificate {
        p1: p1.clone(),
        p2: p2.clone(),
        p3: p3.clone(),
        redei: RedeiCertificate {
            p1: p1.clone(),
            p2: p2.clone(),
            alpha,
            solution: sol,
        },
        relsol: rel.clone(),
        case_tag: rel.case_tag,
        thetas,
        etas,
        h: h.abs(),
    };
    check_k_certificate(&cert)?;
    Ok(cert)
}

fn product(xs: &[BiquadInt]) -> BiquadInt {
    let mut acc = xs[0].field.one();
    for x in xs {
        acc = acc.mul(x);
    }
    acc
}

fn rational_element(f: &BiquadField, n: &BigInt) -> BiquadInt {
    BiquadInt::from_parts(f, &QuadInt::int(n.clone(), &f.m), &QuadInt::zero(&f.m))
}

/// The exact identities of a certificate.
pub fn check_k_certificate(c: &KCertificate) -> Result<()> {
    let mut bad = Vec::new();
    let rel = &c.relsol;
    let alpha = &c.redei.alpha;
    let h2 = &c.h * &c.h;
    let f13 = BiquadField::rational(&c.p1, &c.p3)?;
    let sum_check = |t: &[BiquadInt], bad: &mut Vec<&str>| {
        // θ1 + θ2 = 2X lies in k
        let s12 = t[0].add(&t[1]);
        if s12.c[2] != BigInt::zero() || s12.c[3] != BigInt::zero() {
            bad.push("θ1 + θ2 ∈ k");
        }
    };
    match c.case_tag {
        CaseTag::ZOdd => {
            if c.thetas.len() != 4 || c.etas.is_some() {
                bad.push("four θ generators");
            } else {
                let p = product(&c.thetas);
                if p != rational_element(&f13, &(&c.p2 * &h2)) {
                    bad.push("θ1θ2θ3θ4 = p2 h²");
                }
                if c.thetas[0].mul(&c.thetas[1])
                    != BiquadInt::from_parts(
                        &f13,
                        &alpha.mul(&rel.z.square()),
                        &QuadInt::zero(&c.p1),
                    )
                {
                    bad.push("θ1θ2 = αZ²");
                }
                sum_check(&c.thetas, &mut bad);
                let s13 = c.thetas[0].add(&c.thetas[2]);
                if s13.c[1] != BigInt::zero() || s13.c[3] != BigInt::zero() {
                    bad.push("θ1 + θ3 ∈ Q(√p3)");
                }
            }
        }
        CaseTag::YOdd => {
            let etas = c.etas.as_deref().unwrap_or(&[]);
            if c.thetas.len() != 4 || etas.len() != 4 {
                bad.push("four θ' and four η generators");
            } else {
                let p3q = QuadInt::int(c.p3.clone(), &c.p1);
                let n12 = c.thetas[0].relative_norm();
                let n34 = c.thetas[2].relative_norm();
                if n12 != p3q.mul(&rel.y.square()) {
                    bad.push("θ'1θ'2 = p3 Y²");
                }
                let p3sq = &c.p3 * &c.p3;
                let yn = rel.y.norm();
                if n12.mul(&n34) != QuadInt::int(&p3sq * &yn * &yn, &c.p1) {
                    bad.push("θ'1θ'2θ'3θ'4 = p3²(YȲ)²");
                }
                let p = product(etas);
                if p != rational_element(&f13, &(BigInt::from(16) * &c.p2 * &h2)) {
                    bad.push("η1η2η3η4 = 16 p2 h²");
                }
                sum_check(&c.thetas, &mut bad);
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "K certificate {c:?} violates: {}",
            bad.join(", ")
        )))
    }
}

/// Image of `(c0 + c1√m + c2√n + c3√m√n)/4` in `F_p` with `√m ↦ sm`,
/// `√n ↦ sn`.
pub fn embed(x: &BiquadInt, sm: &BigInt, sn: &BigInt, p: &BigInt) -> BigInt {
    let v = &x.c[0] + &x.c[1] * sm + &x.c[2] * sn + &x.c[3] * sm * sn;
    let inv4 = arith::inv_mod(&BigInt::from(4), p).expect("p odd");
    modp(&(v * inv4), p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolResult {
    pub value: i32,
    pub certificate: KCertificate,
    pub s1: BigInt,
    pub s3: BigInt,
    pub s_alpha: Option<BigInt>,
    pub characters: [i32; 4],
}

fn sqrt_or(a: &BigInt, p: &BigInt, what: &str) -> Result<BigInt> {
    arith::sqrt_mod(a, p).ok_or_else(|| Error::Internal(format!("{what} is not a square mod {p}")))
}

/// Characters of the four splitting generators for the roots `(s1, s3)`.
fn characters(cert: &KCertificate, s1: &BigInt, s3: &BigInt, p4: &BigInt) -> [i32; 4] {
    let g = cert.splitting_generators();
    [0, 1, 2, 3].map(|i| arith::legendre(&embed(&g[i], s1, s3, p4), p4))
}

/// `[p1,p2,p3,p4]`.
pub fn symbol4(p1: &BigInt, p2: &BigInt, p3: &BigInt, p4: &BigInt) -> Result<SymbolResult> {
    symbol4_with(p1, p2, p3, p4, &BuildOptions::default())
}

pub fn symbol4_with(
    p1: &BigInt,
    p2: &BigInt,
    p3: &BigInt,
    p4: &BigInt,
    opts: &BuildOptions,
) -> Result<SymbolResult> {
    let rep = validate(&[p1, p2, p3, p4], &opts.z_budget);
    if !rep.passed() {
        return Err(Error::Precondition(rep.failures));
    }
    let cert = build_k_with(p1, p2, p3, std::slice::from_ref(p4), opts)?;
    evaluate(cert, p4)
}

/// `[p1,p2,p3,p4]` from a certificate for `(p1,p2,p3)` built with `p4`
/// avoided.
pub fn symbol4_from_certificate(
    cert: KCertificate,
    p4: &BigInt,
    z_budget: &BigInt,
) -> Result<SymbolResult> {
    let rep = validate(&[&cert.p1, &cert.p2, &cert.p3, p4], z_budget);
    if !rep.passed() {
        return Err(Error::Precondition(rep.failures));
    }
    check_k_certificate(&cert)?;
    evaluate(cert, p4)
}

fn evaluate(cert: KCertificate, p4: &BigInt) -> Result<SymbolResult> {
    let (p1, p2, p3) = (cert.p1.clone(), cert.p2.clone(), cert.p3.clone());
    let (p1, p2, p3) = (&p1, &p2, &p3);
    let s1 = sqrt_or(p1, p4, "p1")?;
    let s3 = sqrt_or(p3, p4, "p3")?;
    let chars = characters(&cert, &s1, &s3, p4);
    if chars.contains(&0) {
        return Err(Error::Internal(format!(
            "a generator of K vanishes mod {p4}: {cert:?}"
        )));
    }
    let value = if chars.iter().all(|&c| c == 1) { 1 } else { -1 };
    // every root choice must give the same value
    for (a, b) in [
        (&s1, &(p4 - &s3)),
        (&(p4 - &s1), &s3),
        (&(p4 - &s1), &(p4 - &s3)),
    ] {
        let ch = characters(&cert, a, b, p4);
        let v = if ch.iter().all(|&c| c == 1) { 1 } else { -1 };
        if v != value {
            return Err(Error::Internal(format!(
                "root choice ({a},{b}) mod {p4} changed the symbol: {chars:?} vs {ch:?}"
            )));
        }
    }
    let s_alpha = match cert.case_tag {
        CaseTag::ZOdd => None,
        CaseTag::YOdd => Some(check_theta_prime(&cert, &s1, p4, value)?),
    };
    check_f_splits(&cert, p2, &s1, &s3, p4)?;
    Ok(SymbolResult {
        value,
        certificate: cert,
        s1,
        s3,
        s_alpha,
        characters: chars,
    })
}

/// Case Y odd: the `θ'` characters give the same verdict as the `η` ones.
fn check_theta_prime(cert: &KCertificate, s1: &BigInt, p4: &BigInt, value: i32) -> Result<BigInt> {
    let sol = &cert.redei.solution;
    let a = modp(&(&sol.x + &sol.y * s1), p4);
    let b = modp(&(&sol.x - &sol.y * s1), p4);
    let sa = sqrt_or(&a, p4, "α")?;
    let sb = sqrt_or(&b, p4, "ᾱ")?;
    let t = &cert.thetas;
    let ch = [
        embed(&t[0], s1, &sa, p4),
        embed(&t[1], s1, &sa, p4),
        embed(&t[2], s1, &sb, p4),
        embed(&t[3], s1, &sb, p4),
    ]
    .map(|v| arith::legendre(&v, p4));
    let v = if ch.iter().all(|&c| c == 1) { 1 } else { -1 };
    if v != value {
        return Err(Error::Internal(format!(
            "θ' characters {ch:?} disagree with η verdict {value} mod {p4}"
        )));
    }
    Ok(sa)
}

/// `p4` splits completely in the degree-32 subfield
/// `Q(√p1, √p2, √p3, √θ1θ2, √θ1θ3)`.
fn check_f_splits(
    cert: &KCertificate,
    p2: &BigInt,
    s1: &BigInt,
    s3: &BigInt,
    p4: &BigInt,
) -> Result<()> {
    let g = cert.splitting_generators();
    let e = |x: &BiquadInt| embed(x, s1, s3, p4);
    let t12 = e(&g[0]) * e(&g[1]);
    let t13 = e(&g[0]) * e(&g[2]);
    let chars = [
        arith::legendre(&cert.p1, p4),
        arith::legendre(p2, p4),
        arith::legendre(&cert.p3, p4),
        arith::legendre(&modp(&t12, p4), p4),
        arith::legendre(&modp(&t13, p4), p4),
    ];
    if chars.iter().all(|&c| c == 1) {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "{p4} does not split in the degree-32 subfield: characters {chars:?}"
        )))
    }
}

/// `θ1θ3` (or `η1η3`) as an element of `Q(√p3)`, in doubled coordinates.
pub fn theta13(cert: &KCertificate) -> QuadInt {
    let g = cert.splitting_generators();
    let p = g[0].mul(&g[2]);
    // no √p1 or √p1√p3 components: (c0 + c2√p3)/4
    debug_assert!(p.c[1].is_zero() && p.c[3].is_zero());
    QuadInt {
        a2: &p.c[0] / 2,
        b2: &p.c[2] / 2,
        d: cert.p3.clone(),
    }
}

/// Compare the character of `θ1θ3` with `[p3,p2,q]` at auxiliary primes.
pub fn compositum_crosscheck(cert: &KCertificate, trial_primes: usize) -> Result<bool> {
    compositum_crosscheck_scaled(cert, trial_primes, &BigInt::from(1))
}

/// As [`compositum_crosscheck`], with `θ1θ3` multiplied by `scale`.
pub fn compositum_crosscheck_scaled(
    cert: &KCertificate,
    trial_primes: usize,
    scale: &BigInt,
) -> Result<bool> {
    let t = theta13(cert);
    let (p1, p2, p3) = (&cert.p1, &cert.p2, &cert.p3);
    let mut used = 0;
    let mut q = BigInt::from(5);
    while used < trial_primes {
        let ok = arith::is_prime(&q)
            && &q != p1
            && &q != p2
            && &q != p3
            && redei::triple_precondition(&[p3, p2, &q]).is_empty();
        if ok {
            let s3 = sqrt_or(p3, &q, "p3")?;
            let inv2 = arith::inv_mod(&BigInt::from(2), &q).expect("q odd");
            let img = modp(&((&t.a2 + &t.b2 * &s3) * inv2 * scale), &q);
            if !img.is_zero() {
                let lhs = arith::legendre(&img, &q);
                let rhs = redei::redei_value(p3, p2, &q)?;
                if lhs != rhs {
                    return Ok(false);
                }
                used += 1;
            }
        }
        q += 4u32;
    }
    Ok(true)
}

/// Proper shuffles of `(a)` and `(b, c)`: `abc`, `bac`, `bca`.
pub fn proper_shuffles_1_2(a: usize, b: usize, c: usize) -> [[usize; 3]; 3] {
    [[a, b, c], [b, a, c], [b, c, a]]
}

/// `∏ [p_i,p_j,p_k,p_l]` over the proper shuffles, or `None` when some
/// permuted quadruple fails validation.
pub fn shuffle_product(
    ps: &[BigInt; 4],
    a: usize,
    b: usize,
    c: usize,
    l: usize,
) -> Result<Option<i32>> {
    let mut prod = 1;
    for [i, j, k] in proper_shuffles_1_2(a, b, c) {
        let rep = validate_quadruple(&ps[i], &ps[j], &ps[k], &ps[l]);
        if !rep.passed() {
            return Ok(None);
        }
        prod *= symbol4(&ps[i], &ps[j], &ps[k], &ps[l])?.value;
    }
    Ok(Some(prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big;

    #[test]
    fn example_quadruple() {
        let r = symbol4(&big(5), &big(8081), &big(101), &big(449)).unwrap();
        assert_eq!(r.value, -1);
        let c = &r.certificate;
        assert_eq!(c.case_tag, CaseTag::ZOdd);
        assert_eq!(c.h, big(1));
        let f = BiquadField::rational(&big(5), &big(101)).unwrap();
        let t1 = BiquadInt::from_parts(
            &f,
            &QuadInt::from_i64(25, 2, 5),
            &QuadInt::from_i64(2, 0, 5),
        );
        assert_eq!(c.thetas[0], t1);
        // θ1θ3 = 1009 + 100√101
        assert_eq!(theta13(c), QuadInt::from_i64(1009, 100, 101));
    }

    #[test]
    fn validation_clauses() {
        assert!(validate_quadruple(&big(5), &big(8081), &big(101), &big(449)).passed());
        let r = validate_quadruple(&big(17), &big(8081), &big(101), &big(449));
        assert!(r.failures.contains(&"p1 ≡ 5 (mod 8)".to_string()));
        let r = validate_quadruple(&big(5), &big(29), &big(101), &big(7));
        assert!(r.failures.contains(&"p4 ≡ 1 (mod 4)".to_string()));
    }

    #[test]
    fn compositum() {
        let c = build_k(&big(5), &big(8081), &big(101), &[big(449)]).unwrap();
        assert!(compositum_crosscheck(&c, 20).unwrap());
        assert!(compositum_crosscheck(&c, 0).unwrap());
        assert!(!compositum_crosscheck_scaled(&c, 20, &big(5)).unwrap());
        // p2 is a square at every admissible auxiliary prime
        assert!(compositum_crosscheck_scaled(&c, 20, &big(8081)).unwrap());
    }

    #[test]
    fn conjugate_closure() {
        let c = build_k(&big(5), &big(8081), &big(101), &[]).unwrap();
        let t = &c.thetas;
        let flip_m = |x: &BiquadInt| BiquadInt {
            c: [x.c[0].clone(), -&x.c[1], x.c[2].clone(), -&x.c[3]],
            field: x.field.clone(),
        };
        let flip_n = |x: &BiquadInt| BiquadInt {
            c: [x.c[0].clone(), x.c[1].clone(), -&x.c[2], -&x.c[3]],
            field: x.field.clone(),
        };
        for x in t {
            assert!(t.contains(&flip_m(x)));
            assert!(t.contains(&flip_n(x)));
        }
    }
}
