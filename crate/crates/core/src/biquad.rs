//! Biquadratic orders `O_k[β]`, `k = Q(√m)`, `β = (1+√n)/2`, with `n` either a
//! rational prime or an element of `O_k`, both `≡ 1 (mod 4)`.
//!
//! The working order has `Z`-basis `{1, ω, β, ωβ}` with `ω = (1+√m)/2`.
//! Reduction mod 4 gives a ring of 256 residues, indexed by the basis
//! coefficients in base 4.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::modp;
use crate::quadfield::QuadInt;
use crate::{Error, Result};

/// The pair `(m, n)` tagging a field `Q(√m, √n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiquadField {
    pub m: BigInt,
    /// Radicand as an element of `Q(√m)`.
    pub n: QuadInt,
}

impl BiquadField {
    /// `Q(√m, √n)` for rational `n`.
    pub fn rational(m: &BigInt, n: &BigInt) -> Result<Self> {
        Self::new(m, QuadInt::int(n.clone(), m))
    }

    /// `Q(√m, √n)` for `n ∈ O_{Q(√m)}`.
    pub fn new(m: &BigInt, n: QuadInt) -> Result<Self> {
        let four = BigInt::from(4);
        if modp(m, &four) != BigInt::one() {
            return Err(Error::InvalidInput(format!("{m} is not 1 mod 4")));
        }
        if n.d != *m {
            return Err(Error::InvalidInput(format!("radicand {n} not in Q(√{m})")));
        }
        let n_minus_1 = n.sub(&QuadInt::one(m));
        if !QuadInt::int(four, m).divides(&n_minus_1) {
            return Err(Error::InvalidInput(format!("radicand {n} is not 1 mod 4")));
        }
        Ok(BiquadField { m: m.clone(), n })
    }

    pub fn one(&self) -> BiquadInt {
        BiquadInt::from_parts(self, &QuadInt::one(&self.m), &QuadInt::zero(&self.m))
    }

    /// `√m`.
    pub fn sqrt_m(&self) -> BiquadInt {
        let s = QuadInt::new(BigInt::zero(), BigInt::one(), self.m.clone());
        BiquadInt::from_parts(self, &s, &QuadInt::zero(&self.m))
    }

    /// `√n`.
    pub fn sqrt_n(&self) -> BiquadInt {
        BiquadInt::from_parts(self, &QuadInt::zero(&self.m), &QuadInt::one(&self.m))
    }

    /// The `Z`-basis `1, ω, β, ωβ` of the working order.
    pub fn basis(&self) -> [BiquadInt; 4] {
        let c = |a: i64, b: i64, e: i64, f: i64| BiquadInt {
            c: [
                BigInt::from(a),
                BigInt::from(b),
                BigInt::from(e),
                BigInt::from(f),
            ],
            field: self.clone(),
        };
        [c(4, 0, 0, 0), c(2, 2, 0, 0), c(2, 0, 2, 0), c(1, 1, 1, 1)]
    }
}

impl fmt::Display for BiquadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{}, √({}))", self.m, self.n)
    }
}

/// `(c0 + c1√m + c2√n + c3√m√n)/4`, an element of the working order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiquadInt {
    pub c: [BigInt; 4],
    pub field: BiquadField,
}

/// `p + q√m` with integer scale handled by the caller.
type Pair = (BigInt, BigInt);

fn pmul(x: &Pair, y: &Pair, m: &BigInt) -> Pair {
    (&x.0 * &y.0 + m * &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn padd(x: &Pair, y: &Pair) -> Pair {
    (&x.0 + &y.0, &x.1 + &y.1)
}

impl BiquadInt {
    /// `u + v√n` with `u, v ∈ O_k`.
    pub fn from_parts(field: &BiquadField, u: &QuadInt, v: &QuadInt) -> Self {
        assert!(
            u.d == field.m && v.d == field.m,
            "parts outside Q(√{})",
            field.m
        );
        BiquadInt {
            c: [&u.a2 * 2, &u.b2 * 2, &v.a2 * 2, &v.b2 * 2],
            field: field.clone(),
        }
    }

    /// Build from 4-scaled coordinates, checking membership in the order.
    pub fn from_coords4(field: &BiquadField, c: [BigInt; 4]) -> Result<Self> {
        let x = BiquadInt {
            c,
            field: field.clone(),
        };
        x.basis_coeffs()?;
        Ok(x)
    }

    /// Coefficients over `{1, ω, β, ωβ}`.
    pub fn basis_coeffs(&self) -> Result<[BigInt; 4]> {
        let [c0, c1, c2, c3] = &self.c;
        let a3 = c3.clone();
        let t1: BigInt = c1 - c3;
        let t2: BigInt = c2 - c3;
        let t0: BigInt = c0 - c1 - c2 + c3;
        if t1.is_odd() || t2.is_odd() || !(&t0 % 4u32).is_zero() {
            return Err(Error::InvalidInput(format!(
                "{self} is not in the working order"
            )));
        }
        Ok([t0 / 4, t1 / 2, t2 / 2, a3])
    }

    fn parts(&self) -> (Pair, Pair) {
        (
            (self.c[0].clone(), self.c[1].clone()),
            (self.c[2].clone(), self.c[3].clone()),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(
            self.field, o.field,
            "operands from different biquadratic fields"
        );
        let m = &self.field.m;
        let (u1, v1) = self.parts();
        let (u2, v2) = o.parts();
        // scale 16 products, then 32 once n's halves enter
        let uu = pmul(&u1, &u2, m);
        let vv = pmul(&v1, &v2, m);
        let n2 = (self.field.n.a2.clone(), self.field.n.b2.clone());
        let vvn = pmul(&vv, &n2, m);
        let u32_ = padd(&(&uu.0 * 2, &uu.1 * 2), &vvn);
        let cross = padd(&pmul(&u1, &v2, m), &pmul(&u2, &v1, m));
        let v32 = (&cross.0 * 2, &cross.1 * 2);
        let eight = BigInt::from(8);
        let c = [&u32_.0, &u32_.1, &v32.0, &v32.1].map(|x| {
            assert!((x % &eight).is_zero(), "product left the 1/4 lattice");
            x / &eight
        });
        BiquadInt {
            c,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(
            self.field, o.field,
            "operands from different biquadratic fields"
        );
        let c = [0, 1, 2, 3].map(|i| &self.c[i] + &o.c[i]);
        BiquadInt {
            c,
            field: self.field.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        let c = [0, 1, 2, 3].map(|i| -&self.c[i]);
        BiquadInt {
            c,
            field: self.field.clone(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut r = self.field.one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Relative norm to `k`: `u² - n v²`, as a 4-scaled element of `Q(√m)`
    /// returned in doubled coordinates.
    pub fn relative_norm(&self) -> QuadInt {
        let m = &self.field.m;
        let (u, v) = self.parts();
        let uu = pmul(&u, &u, m);
        let vv = pmul(&v, &v, m);
        let n2 = (self.field.n.a2.clone(), self.field.n.b2.clone());
        let vvn = pmul(&vv, &n2, m);
        // (2uu - vvn)/32 in true coordinates, doubled → /16
        let a = &uu.0 * 2 - &vvn.0;
        let b = &uu.1 * 2 - &vvn.1;
        QuadInt {
            a2: a / 16,
            b2: b / 16,
            d: m.clone(),
        }
    }
}

impl fmt::Display for BiquadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}√{} + {}·√n + {}·√{}√n)/4 [n = {}]",
            self.c[0], self.c[1], self.field.m, self.c[2], self.c[3], self.field.m, self.field.n
        )
    }
}

/// Basis description with its verified structure constants.
#[derive(Clone, Debug, Serialize)]
pub struct OrderBasis {
    pub field: BiquadField,
    pub labels: [&'static str; 4],
    /// `table[i][j][k]`: coefficient of basis element `k` in `e_i · e_j`.
    pub table: Vec<Vec<Vec<BigInt>>>,
}

pub fn order_basis(field: &BiquadField) -> Result<OrderBasis> {
    let basis = field.basis();
    let mut table = vec![vec![vec![BigInt::zero(); 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let p = basis[i].mul(&basis[j]);
            let coeffs = p.basis_coeffs().map_err(|_| {
                Error::Internal(format!("basis product e{i}·e{j} = {p} leaves the order"))
            })?;
            table[i][j] = coeffs.to_vec();
        }
    }
    // (3 + √m + √n + √m√n)/2 = 1 + 2ωβ must be representable
    BiquadInt {
        c: [6, 2, 2, 2].map(BigInt::from),
        field: field.clone(),
    }
    .basis_coeffs()
    .map_err(|e| Error::Internal(format!("half element: {e}")))?;
    Ok(OrderBasis {
        field: field.clone(),
        labels: ["1", "(1+√m)/2", "(1+√n)/2", "(1+√m)(1+√n)/4"],
        table,
    })
}

/// The residue ring `O/(4)` for the working order.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    pub field: BiquadField,
    mul: Vec<u8>,
    /// Unit residues in increasing index order.
    pub units: Vec<u8>,
}

fn idx(a: [u8; 4]) -> u8 {
    a[0] | (a[1] << 2) | (a[2] << 4) | (a[3] << 6)
}

fn digits(x: u8) -> [u8; 4] {
    [x & 3, (x >> 2) & 3, (x >> 4) & 3, (x >> 6) & 3]
}

impl ResidueRing {
    pub fn new(field: &BiquadField) -> Result<Self> {
        let ob = order_basis(field)?;
        let four = BigInt::from(4);
        let mut st = [[[0u8; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    st[i][j][k] = modp(&ob.table[i][j][k], &four).try_into().unwrap();
                }
            }
        }
        let mut mul = vec![0u8; 256 * 256];
        for x in 0..=255u8 {
            let dx = digits(x);
            for y in 0..=255u8 {
                let dy = digits(y);
                let mut out = [0u32; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        let c = (dx[i] * dy[j]) as u32;
                        if c == 0 {
                            continue;
                        }
                        for k in 0..4 {
                            out[k] += c * st[i][j][k] as u32;
                        }
                    }
                }
                mul[x as usize * 256 + y as usize] = idx(out.map(|v| (v % 4) as u8));
            }
        }
        let one = idx([1, 0, 0, 0]);
        let units = (0..=255u8)
            .filter(|&x| (0..=255u8).any(|y| mul[x as usize * 256 + y as usize] == one))
            .collect();
        Ok(ResidueRing {
            field: field.clone(),
            mul,
            units,
        })
    }

    pub fn one(&self) -> u8 {
        1
    }

    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * 256 + y as usize]
    }

    pub fn pow(&self, x: u8, mut e: u64) -> u8 {
        let (mut base, mut acc) = (x, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn reduce(&self, x: &BiquadInt) -> Result<u8> {
        if x.field != self.field {
            return Err(Error::InvalidInput("element from a different field".into()));
        }
        let four = BigInt::from(4);
        let a = x.basis_coeffs()?;
        Ok(idx(a.map(|v| u8::try_from(modp(&v, &four)).unwrap())))
    }

    /// Lift a residue back to the element with coefficients in `0..4`.
    pub fn lift(&self, r: u8) -> BiquadInt {
        let basis = self.field.basis();
        let d = digits(r);
        let mut acc = BiquadInt {
            c: [0, 0, 0, 0].map(BigInt::from),
            field: self.field.clone(),
        };
        for (k, e) in basis.iter().enumerate() {
            for _ in 0..d[k] {
                acc = acc.add(e);
            }
        }
        acc
    }

    pub fn is_unit(&self, r: u8) -> bool {
        self.units.binary_search(&r).is_ok()
    }

    pub fn order(&self, r: u8) -> Result<u64> {
        if !self.is_unit(r) {
            return Err(Error::InvalidInput(format!(
                "residue {r} is not a unit mod 4"
            )));
        }
        let mut x = r;
        let mut k = 1;
        while x != self.one() {
            x = self.mul(x, r);
            k += 1;
        }
        Ok(k)
    }

    /// Square root via the odd order `t`: `r^((t+1)/2)`.
    pub fn sqrt(&self, r: u8) -> Result<Option<u8>> {
        let t = self.order(r)?;
        if t % 2 == 1 {
            Ok(Some(self.pow(r, t.div_ceil(2))))
        } else {
            Ok(None)
        }
    }

    /// All square roots by scanning the ring.
    pub fn sqrt_exhaustive(&self, r: u8) -> Vec<u8> {
        (0..=255u8).filter(|&l| self.mul(l, l) == r).collect()
    }
}

pub fn unit_order_mod4(ring: &ResidueRing, theta: &BiquadInt) -> Result<u64> {
    ring.order(ring.reduce(theta)?)
}

pub fn sqrt_mod4(ring: &ResidueRing, theta: &BiquadInt) -> Result<Option<BiquadInt>> {
    Ok(ring.sqrt(ring.reduce(theta)?)?.map(|r| ring.lift(r)))
}

#[derive(Clone, Debug, Serialize)]
pub struct U2Report {
    pub field: BiquadField,
    pub generators: [u8; 4],
    pub unit_count: usize,
    pub two_part: usize,
    pub subgroup_order: usize,
}

/// Check that `-1, √m, √n, (3+√m+√n+√m√n)/2` generate an elementary abelian
/// group of order 16 equal to the 2-part of `(O/4)^×`.
pub fn verify_u2_structure(ring: &ResidueRing) -> Result<U2Report> {
    let f = &ring.field;
    let half = BiquadInt {
        c: [6, 2, 2, 2].map(BigInt::from),
        field: f.clone(),
    };
    let gens_el = [f.one().neg(), f.sqrt_m(), f.sqrt_n(), half];
    let mut gens = [0u8; 4];
    for (g, e) in gens.iter_mut().zip(gens_el.iter()) {
        *g = ring.reduce(e)?;
        if ring.order(*g)? != 2 {
            return Err(Error::Internal(format!(
                "generator {e} has order {} mod 4 in {f}",
                ring.order(*g)?
            )));
        }
    }
    let mut group = vec![ring.one()];
    for &g in &gens {
        let ext: Vec<u8> = group.iter().map(|&x| ring.mul(x, g)).collect();
        for x in ext {
            if !group.contains(&x) {
                group.push(x);
            }
        }
    }
    if group.len() != 16 {
        return Err(Error::Internal(format!(
            "generators span a group of order {} in {f}",
            group.len()
        )));
    }
    let unit_count = ring.units.len();
    let two_part = 1usize << unit_count.trailing_zeros();
    if two_part != 16 {
        return Err(Error::Internal(format!(
            "2-part of the unit group is {two_part}, expected 16, in {f}"
        )));
    }
    Ok(U2Report {
        field: f.clone(),
        generators: gens,
        unit_count,
        two_part,
        subgroup_order: 16,
    })
}
