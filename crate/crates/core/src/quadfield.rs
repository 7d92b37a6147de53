//! Arithmetic in the ring of integers of a real quadratic field `Q(√d)`.
//!
//! Elements are stored with doubled coordinates: `QuadInt { a2, b2, d }`
//! stands for `(a2 + b2·√d)/2`. Fundamental units come from continued
//! fractions; the class-number gate enumerates reduced indefinite forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{self, modp};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    /// Twice the rational coordinate.
    pub a2: BigInt,
    /// Twice the coefficient of `√d`.
    pub b2: BigInt,
    pub d: BigInt,
}

pub fn is_squarefree(d: &BigInt) -> bool {
    let d = d.abs();
    let mut k = BigInt::from(2);
    while &k * &k <= d {
        if (&d % (&k * &k)).is_zero() {
            return false;
        }
        k += 1u32;
    }
    true
}

fn d_is_1_mod_4(d: &BigInt) -> bool {
    modp(d, &BigInt::from(4)).is_one()
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl QuadInt {
    /// Build from doubled coordinates, checking membership in `O_k`.
    pub fn from_doubled(a2: BigInt, b2: BigInt, d: BigInt) -> Result<Self> {
        let ok = if d_is_1_mod_4(&d) {
            (&a2 - &b2).is_even()
        } else {
            a2.is_even() && b2.is_even()
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "({a2} + {b2}√{d})/2 is not an algebraic integer"
            )));
        }
        Ok(QuadInt { a2, b2, d })
    }

    /// `a + b√d` with integer `a`, `b`.
    pub fn new(a: BigInt, b: BigInt, d: BigInt) -> Self {
        QuadInt {
            a2: a * 2,
            b2: b * 2,
            d,
        }
    }

    pub fn from_i64(a: i64, b: i64, d: i64) -> Self {
        Self::new(BigInt::from(a), BigInt::from(b), BigInt::from(d))
    }

    pub fn int(a: BigInt, d: &BigInt) -> Self {
        Self::new(a, BigInt::zero(), d.clone())
    }

    pub fn one(d: &BigInt) -> Self {
        Self::int(BigInt::one(), d)
    }

    pub fn zero(d: &BigInt) -> Self {
        Self::int(BigInt::zero(), d)
    }

    /// `(1+√d)/2` or `√d`, the standard generator of `O_k` over `Z`.
    pub fn omega(d: &BigInt) -> Self {
        if d_is_1_mod_4(d) {
            QuadInt {
                a2: BigInt::one(),
                b2: BigInt::one(),
                d: d.clone(),
            }
        } else {
            Self::new(BigInt::zero(), BigInt::one(), d.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a2.is_zero() && self.b2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a2 == BigInt::from(2) && self.b2.is_zero()
    }

    /// Integer coordinates `(a, b)` when both are integral.
    pub fn integer_coords(&self) -> Option<(BigInt, BigInt)> {
        if self.a2.is_even() && self.b2.is_even() {
            Some((&self.a2 / 2, &self.b2 / 2))
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "operands from different quadratic fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadInt {
            a2: &self.a2 + &o.a2,
            b2: &self.b2 + &o.b2,
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadInt {
            a2: &self.a2 - &o.a2,
            b2: &self.b2 - &o.b2,
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt {
            a2: -&self.a2,
            b2: -&self.b2,
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let a2 = (&self.a2 * &o.a2 + &self.d * &self.b2 * &o.b2) / 2;
        let b2 = (&self.a2 * &o.b2 + &self.b2 * &o.a2) / 2;
        QuadInt {
            a2,
            b2,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt {
            a2: &self.a2 * k,
            b2: &self.b2 * k,
            d: self.d.clone(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(&self.d);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            a2: self.a2.clone(),
            b2: -&self.b2,
            d: self.d.clone(),
        }
    }

    pub fn norm(&self) -> BigInt {
        (&self.a2 * &self.a2 - &self.d * &self.b2 * &self.b2) / 4
    }

    pub fn trace(&self) -> BigInt {
        self.a2.clone()
    }

    /// Exact quotient `self / o` if it lies in `O_k`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        self.same_field(o);
        let n = o.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.mul(&o.conj());
        // num / n, with num = (A + B√d)/2
        if !(&num.a2 % &n).is_zero() || !(&num.b2 % &n).is_zero() {
            return None;
        }
        Self::from_doubled(&num.a2 / &n, &num.b2 / &n, self.d.clone()).ok()
    }

    pub fn divides(&self, o: &Self) -> bool {
        o.div_exact(self).is_some()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// The two real embeddings, `√d` taken positive.
    pub fn embeddings(&self) -> (f64, f64) {
        let s = self.d.to_f64().unwrap().sqrt();
        let a = self.a2.to_f64().unwrap() / 2.0;
        let b = self.b2.to_f64().unwrap() / 2.0;
        (a + b * s, a - b * s)
    }

    /// Exact sign of the first embedding `(a2 + b2·√d)/2`.
    pub fn sign(&self) -> i32 {
        let sa = sgn(&self.a2);
        let sb = sgn(&self.b2);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a2^2 with d·b2^2
        let lhs = &self.a2 * &self.a2;
        let rhs = &self.d * &self.b2 * &self.b2;
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    /// Coordinate height `max(|2a|, |2b|)`.
    pub fn height(&self) -> BigInt {
        self.a2.abs().max(self.b2.abs())
    }

    /// Square root in `O_k`, normalized to a positive first coordinate
    /// (or positive second coordinate when the first vanishes).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.norm();
        let m = exact_sqrt(&n)?;
        for n_s in [m.clone(), -m] {
            // a^2 = A + 2 n_s and d b^2 = A - 2 n_s for S = (a + b√d)/2
            let a_sq = &self.a2 + &n_s * 2;
            let db_sq: BigInt = &self.a2 - &n_s * 2;
            let a = match exact_sqrt(&a_sq) {
                Some(a) => a,
                None => continue,
            };
            if !(&db_sq % &self.d).is_zero() {
                continue;
            }
            let b_abs = match exact_sqrt(&(&db_sq / &self.d)) {
                Some(b) => b,
                None => continue,
            };
            let b = if a.is_zero() || (&a * &b_abs) == self.b2 {
                b_abs
            } else {
                -b_abs
            };
            if let Ok(s) = Self::from_doubled(a, b, self.d.clone()) {
                if s.square() == *self {
                    return Some(s);
                }
            }
        }
        None
    }

    /// Coordinates over the `Z`-basis `{1, ω}`.
    pub fn omega_coords(&self) -> (BigInt, BigInt) {
        if d_is_1_mod_4(&self.d) {
            ((&self.a2 - &self.b2) / 2, self.b2.clone())
        } else {
            (&self.a2 / 2, &self.b2 / 2)
        }
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.integer_coords() {
            Some((a, b)) => write!(f, "{a} + {b}√{}", self.d),
            None => write!(f, "({} + {}√{})/2", self.a2, self.b2, self.d),
        }
    }
}

fn check_same_d(u: &QuadInt, v: &QuadInt) -> Result<()> {
    if u.d != v.d {
        return Err(Error::InvalidInput(format!(
            "mixed fields Q(√{}) and Q(√{})",
            u.d, v.d
        )));
    }
    Ok(())
}

pub fn quad_mul(u: &QuadInt, v: &QuadInt) -> Result<QuadInt> {
    check_same_d(u, v)?;
    Ok(u.mul(v))
}

pub fn quad_add(u: &QuadInt, v: &QuadInt) -> Result<QuadInt> {
    check_same_d(u, v)?;
    Ok(u.add(v))
}

pub fn quad_conj(u: &QuadInt) -> QuadInt {
    u.conj()
}

pub fn quad_norm(u: &QuadInt) -> BigInt {
    u.norm()
}

pub fn quad_trace(u: &QuadInt) -> BigInt {
    u.trace()
}

fn check_field_d(d: &BigInt) -> Result<()> {
    if d <= &BigInt::one() || !is_squarefree(d) {
        return Err(Error::InvalidInput(format!(
            "{d} is not a squarefree integer > 1"
        )));
    }
    Ok(())
}

/// Complete quotients `(P + √d)/Q` of the continued fraction of `ω`.
struct CfState {
    p: BigInt,
    q: BigInt,
    isqrt_d: BigInt,
    d: BigInt,
}

impl CfState {
    fn for_omega(d: &BigInt) -> Self {
        let (p, q) = if d_is_1_mod_4(d) {
            (BigInt::one(), BigInt::from(2))
        } else {
            (BigInt::zero(), BigInt::one())
        };
        CfState {
            p,
            q,
            isqrt_d: d.sqrt(),
            d: d.clone(),
        }
    }

    /// Advance one step, returning the partial quotient.
    fn step(&mut self) -> BigInt {
        let a = (&self.p + &self.isqrt_d).div_floor(&self.q);
        let p_next = &a * &self.q - &self.p;
        let q_next = (&self.d - &p_next * &p_next) / &self.q;
        self.p = p_next;
        self.q = q_next;
        a
    }
}

/// Fundamental unit `> 1` of `O_{Q(√d)}`: the first continued-fraction
/// convergent of `ω` whose associated element has norm `±1`.
pub fn fundamental_unit(d: &BigInt) -> Result<QuadInt> {
    check_field_d(d)?;
    let omega_bar = QuadInt::omega(d).conj();
    let mut cf = CfState::for_omega(d);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    loop {
        let a = cf.step();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        // h - k·ω̄ ≈ k(ω - ω̄) > 0
        let cand = QuadInt::int(h.clone(), d).sub(&omega_bar.scale(&k));
        if cand.is_unit() && cand.sign() > 0 && !cand.is_one() {
            return Ok(cand);
        }
    }
}

/// Fundamental unit as the product of the complete quotients over one
/// period of the continued fraction of `ω` (independent derivation).
pub fn fundamental_unit_by_period(d: &BigInt) -> Result<QuadInt> {
    check_field_d(d)?;
    let mut cf = CfState::for_omega(d);
    cf.step();
    let start = (cf.p.clone(), cf.q.clone());
    let mut num = QuadInt::one(d);
    let mut den = BigInt::one();
    loop {
        // complete quotient (P + √d)/Q
        num = num.mul(&QuadInt::new(cf.p.clone(), BigInt::one(), d.clone()));
        den *= &cf.q;
        cf.step();
        if (cf.p.clone(), cf.q.clone()) == start {
            break;
        }
    }
    let den_q = QuadInt::int(den, d);
    num.div_exact(&den_q)
        .ok_or_else(|| Error::Internal(format!("period product not integral for d = {d}")))
}

/// Unit certificate for `p1 ≡ 5 (mod 8)`: `ε = s + t√p1`, `s` even, `t` odd,
/// norm `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCertificate {
    pub epsilon: QuadInt,
    pub s: BigInt,
    pub t: BigInt,
    pub power_used: u32,
}

pub fn adjusted_unit(p1: &BigInt) -> Result<UnitCertificate> {
    if modp(p1, &BigInt::from(8)) != BigInt::from(5) {
        return Err(Error::InvalidInput(format!("{p1} is not 5 mod 8")));
    }
    let e1 = fundamental_unit(p1)?;
    if !e1.norm().is_negative() {
        return Err(Error::Internal(format!(
            "fundamental unit of Q(√{p1}) has norm +1"
        )));
    }
    let (epsilon, power_used) = match e1.integer_coords() {
        Some(_) => (e1, 1),
        None => (e1.pow(3), 3),
    };
    let (s, t) = epsilon
        .integer_coords()
        .ok_or_else(|| Error::Internal("cubed unit not integral".into()))?;
    let cert = UnitCertificate {
        epsilon,
        s,
        t,
        power_used,
    };
    check_unit_certificate(&cert)?;
    Ok(cert)
}

pub fn check_unit_certificate(c: &UnitCertificate) -> Result<()> {
    let ok = c.s.is_even() && c.t.is_odd() && c.epsilon.norm() == BigInt::from(-1);
    if ok {
        Ok(())
    } else {
        Err(Error::Internal(format!("bad unit certificate {:?}", c)))
    }
}

fn discriminant(d: &BigInt) -> BigInt {
    if d_is_1_mod_4(d) {
        d.clone()
    } else {
        d * 4
    }
}

type Form = (BigInt, BigInt, BigInt);

/// Reduced indefinite forms `(a,b,c)` of discriminant `disc`:
/// `0 < b < √D` and `√D - b < 2|a| < √D + b`.
fn reduced_forms(disc: &BigInt) -> Vec<Form> {
    let s = disc.sqrt();
    let mut out = Vec::new();
    let mut b = BigInt::one();
    while b <= s {
        if (&b * &b - disc).is_even() && (&b - disc).is_even() {
            let m = (disc - &b * &b) / 4; // = -ac > 0
            let mut a = BigInt::one();
            while &a * &a <= &m * &m && a <= m {
                if (&m % &a).is_zero() {
                    for sa in [a.clone(), -a.clone()] {
                        let c = -(&m / &sa);
                        let two_a = sa.abs() * 2;
                        // strict inequalities via squares against sqrt(D)
                        if is_reduced(disc, &b, &two_a) {
                            out.push((sa.clone(), b.clone(), c));
                        }
                    }
                }
                a += 1u32;
            }
        }
        b += 1u32;
    }
    out.sort();
    out.dedup();
    out
}

/// `√D - b < 2|a| < √D + b` with `√D` irrational.
fn is_reduced(disc: &BigInt, b: &BigInt, two_a: &BigInt) -> bool {
    // √D > two_a - b  and  √D > b - two_a ... evaluated exactly
    let lower = two_a - b; // need √D < 2|a| + b, i.e. D < (2|a|+b)^2, and √D - b < 2|a|
    let upper = two_a + b;
    let gt_sqrt = |x: &BigInt| x.is_positive() && x * x > *disc;
    let lt_sqrt = |x: &BigInt| !x.is_positive() || x * x < *disc;
    gt_sqrt(&upper) && lt_sqrt(&lower) && b.is_positive() && lt_sqrt(b)
}

/// One step of the reduction cycle: `(a,b,c) -> (c, b', a')` with
/// `b' ≡ -b (mod 2c)` and `√D - 2|c| < b' < √D`.
fn rho(f: &Form, disc: &BigInt) -> Form {
    let (_, b, c) = f;
    let s = disc.sqrt();
    let two_c = c.abs() * 2;
    // largest b' < √D with b' ≡ -b mod 2|c|
    let target = modp(&(-b), &two_c);
    let mut bp = &s - modp(&(&s - &target), &two_c);
    if &bp * &bp > *disc {
        bp -= &two_c;
    }
    let a_next = (&bp * &bp - disc) / (c * 4);
    (c.clone(), bp, a_next)
}

/// Narrow class number `h+` from the cycles of reduced forms.
fn narrow_class_number(disc: &BigInt) -> usize {
    let forms = reduced_forms(disc);
    let mut seen = std::collections::HashSet::new();
    let mut cycles = 0;
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        cycles += 1;
        let mut g = f.clone();
        loop {
            seen.insert(g.clone());
            g = rho(&g, disc);
            if g == *f {
                break;
            }
            if seen.contains(&g) && g != *f {
                break;
            }
        }
    }
    cycles
}

/// Class number of `Q(√d)` from reduced indefinite forms.
pub fn class_number(d: &BigInt) -> Result<usize> {
    check_field_d(d)?;
    let disc = discriminant(d);
    let hp = narrow_class_number(&disc);
    let eps = fundamental_unit(d)?;
    Ok(if eps.norm().is_negative() { hp } else { hp / 2 })
}

pub fn class_number_is_one(d: &BigInt) -> Result<bool> {
    Ok(class_number(d)? == 1)
}

/// Second route: every prime ideal of norm below the Minkowski bound is
/// principal, tested by searching generators in a fundamental domain.
pub fn class_number_is_one_minkowski(d: &BigInt) -> Result<bool> {
    check_field_d(d)?;
    let disc = discriminant(d);
    let bound = disc.sqrt() / 2 + 1;
    let eps = fundamental_unit(d)?;
    let eps_f = eps.embeddings().0;
    let dd = d.to_f64().unwrap();
    let mut p = BigInt::from(2);
    while p <= bound {
        if arith::is_prime(&p) {
            let split_or_ramified = if p == BigInt::from(2) {
                !(d_is_1_mod_4(d) && modp(d, &BigInt::from(8)) == BigInt::from(5))
            } else {
                arith::legendre(d, &p) >= 0
            };
            if split_or_ramified && !has_element_of_norm(d, &p, eps_f, dd) {
                return Ok(false);
            }
        }
        p += 1u32;
    }
    Ok(true)
}

/// Whether some element has norm `±n`, searching `|b2| ≤ 2√(n ε)/√d`.
fn has_element_of_norm(d: &BigInt, n: &BigInt, eps: f64, dd: f64) -> bool {
    let nf = n.to_f64().unwrap();
    let bmax = (2.0 * (nf * eps).sqrt() / dd.sqrt()).ceil() as i64 + 1;
    let four_n = n * 4;
    for b in 0..=bmax {
        let b = BigInt::from(b);
        let db2 = d * &b * &b;
        for rhs in [&db2 + &four_n, &db2 - &four_n] {
            if let Some(a) = exact_sqrt(&rhs) {
                if QuadInt::from_doubled(a, b.clone(), d.clone()).is_ok() {
                    return true;
                }
            }
        }
    }
    false
}

/// Odd `m` with `|N(alpha)| = p^m` and `p ∤ alpha`, if any.
pub fn principal_prime_power_check(alpha: &QuadInt, p: &BigInt) -> Option<u32> {
    if alpha.is_zero() {
        return None;
    }
    let mut n = alpha.norm().abs();
    let mut m = 0u32;
    while (&n % p).is_zero() {
        n /= p;
        m += 1;
    }
    if !n.is_one() || m % 2 == 0 {
        return None;
    }
    let pq = QuadInt::int(p.clone(), &alpha.d);
    if pq.divides(alpha) {
        return None;
    }
    Some(m)
}

/// Roots of the minimal polynomial of `ω` modulo the prime `q`.
fn omega_roots_mod(d: &BigInt, q: &BigInt) -> Vec<BigInt> {
    let two = BigInt::from(2);
    let (c1, c0) = if d_is_1_mod_4(d) {
        // x^2 - x - (d-1)/4
        (BigInt::from(-1), -((d - 1u32) / 4u32))
    } else {
        (BigInt::zero(), -d.clone())
    };
    if q == &two {
        return (0..2)
            .map(BigInt::from)
            .filter(|r| modp(&(r * r + &c1 * r + &c0), q).is_zero())
            .collect();
    }
    // discriminant c1^2 - 4 c0
    let disc = &c1 * &c1 - &c0 * 4;
    let s = match arith::sqrt_mod(&disc, q) {
        Some(s) => s,
        None => return vec![],
    };
    let inv2 = arith::inv_mod(&two, q).unwrap();
    let mut rs: Vec<BigInt> = [&s, &(-&s)]
        .iter()
        .map(|sv| modp(&((-&c1 + *sv) * &inv2), q))
        .collect();
    rs.sort();
    rs.dedup();
    rs
}

/// A prime ideal of `O_k` above `q`, as `(q, ω - r)` or the inert `(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeIdeal {
    Degree1 { q: BigInt, r: BigInt },
    Inert { q: BigInt },
}

impl PrimeIdeal {
    pub fn contains(&self, x: &QuadInt) -> bool {
        let (u, v) = x.omega_coords();
        match self {
            PrimeIdeal::Degree1 { q, r } => modp(&(u + v * r), q).is_zero(),
            PrimeIdeal::Inert { q } => modp(&u, q).is_zero() && modp(&v, q).is_zero(),
        }
    }
}

pub fn primes_above(d: &BigInt, q: &BigInt) -> Vec<PrimeIdeal> {
    let roots = omega_roots_mod(d, q);
    if roots.is_empty() {
        vec![PrimeIdeal::Inert { q: q.clone() }]
    } else {
        roots
            .into_iter()
            .map(|r| PrimeIdeal::Degree1 { q: q.clone(), r })
            .collect()
    }
}

/// A common prime-ideal divisor of the nonzero entries, if one exists.
pub fn common_prime_divisor(xs: &[&QuadInt]) -> Option<PrimeIdeal> {
    let nonzero: Vec<&&QuadInt> = xs.iter().filter(|x| !x.is_zero()).collect();
    let first = nonzero.first()?;
    let d = first.d.clone();
    let mut g = BigInt::zero();
    for x in &nonzero {
        g = g.gcd(&x.norm());
    }
    if g.is_one() {
        return None;
    }
    for q in arith::prime_factors(&g) {
        for ideal in primes_above(&d, &q) {
            if xs.iter().all(|x| ideal.contains(x)) {
                return Some(ideal);
            }
        }
    }
    None
}

/// Representative of `x·O_k^×` minimising `|x| + |x̄|`, with sign chosen so
/// the first embedding is positive.
pub fn canonical_mod_units(x: &QuadInt, eps: &QuadInt) -> QuadInt {
    if x.is_zero() {
        return x.clone();
    }
    let eps_inv = eps.conj().scale(&eps.norm()); // ε^{-1} = N(ε)·ε̄
    let size = |y: &QuadInt| {
        let (e1, e2) = y.embeddings();
        e1.abs() + e2.abs()
    };
    let mut cur = x.clone();
    loop {
        let up = cur.mul(eps);
        let down = cur.mul(&eps_inv);
        let (s0, s1, s2) = (size(&cur), size(&up), size(&down));
        if s1 < s0 * (1.0 - 1e-12) {
            cur = up;
        } else if s2 < s0 * (1.0 - 1e-12) {
            cur = down;
        } else {
            // break exact ties towards the lexicographically smaller pair
            let mut best = cur.clone();
            for cand in [up, down] {
                if (size(&cand) - s0).abs() <= s0 * 1e-12 && key(&cand) < key(&best) {
                    best = cand;
                }
            }
            cur = best;
            break;
        }
    }
    if cur.sign() < 0 {
        cur = cur.neg();
    }
    cur
}

fn key(x: &QuadInt) -> (BigInt, BigInt, BigInt, BigInt) {
    let pos = x.sign() >= 0;
    let y = if pos { x.clone() } else { x.neg() };
    (y.b2.abs(), y.a2.abs(), y.b2.clone(), y.a2.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big;

    fn q(a2: i64, b2: i64, d: i64) -> QuadInt {
        QuadInt::from_doubled(big(a2), big(b2), big(d)).unwrap()
    }

    #[test]
    fn ring_examples() {
        let u = QuadInt::from_i64(2, 1, 5);
        assert_eq!(u.mul(&u.conj()), QuadInt::from_i64(-1, 0, 5));
        assert_eq!(QuadInt::from_i64(241, 100, 5).norm(), big(8081));
        assert_eq!(u.conj().conj(), u);
        assert!(quad_mul(&u, &QuadInt::from_i64(1, 1, 13)).is_err());
        assert!(QuadInt::from_doubled(big(1), big(0), big(5)).is_err());
        assert!(QuadInt::from_doubled(big(1), big(1), big(7)).is_err());
    }

    #[test]
    fn units() {
        assert_eq!(fundamental_unit(&big(5)).unwrap(), q(1, 1, 5));
        assert_eq!(fundamental_unit(&big(13)).unwrap(), q(3, 1, 13));
        assert_eq!(
            fundamental_unit(&big(2)).unwrap(),
            QuadInt::from_i64(1, 1, 2)
        );
        assert_eq!(
            fundamental_unit(&big(3)).unwrap(),
            QuadInt::from_i64(2, 1, 3)
        );
        assert_eq!(
            fundamental_unit(&big(7)).unwrap(),
            QuadInt::from_i64(8, 3, 7)
        );
        assert!(fundamental_unit(&big(12)).is_err());
    }

    #[test]
    fn unit_period_agrees() {
        for d in 2..400i64 {
            let db = big(d);
            if !is_squarefree(&db) {
                continue;
            }
            let e1 = fundamental_unit(&db).unwrap();
            let e2 = fundamental_unit_by_period(&db).unwrap();
            assert!(e1.is_unit());
            assert!(e2 == e1 || e2 == e1.square(), "d={d}: {e1} vs {e2}");
        }
    }

    #[test]
    fn adjusted_units() {
        let c = adjusted_unit(&big(5)).unwrap();
        assert_eq!(
            (c.epsilon.clone(), c.power_used),
            (QuadInt::from_i64(2, 1, 5), 3)
        );
        let c = adjusted_unit(&big(13)).unwrap();
        assert_eq!(
            (c.epsilon.clone(), c.power_used),
            (QuadInt::from_i64(18, 5, 13), 3)
        );
        let c = adjusted_unit(&big(29)).unwrap();
        assert_eq!(
            (c.epsilon.clone(), c.power_used),
            (QuadInt::from_i64(70, 13, 29), 3)
        );
        assert!(adjusted_unit(&big(17)).is_err());
        // 37 has an integral fundamental unit 6 + √37
        let c = adjusted_unit(&big(37)).unwrap();
        assert_eq!(
            (c.epsilon.clone(), c.power_used),
            (QuadInt::from_i64(6, 1, 37), 1)
        );
    }

    #[test]
    fn class_numbers() {
        assert!(class_number_is_one(&big(5)).unwrap());
        assert!(class_number_is_one(&big(13)).unwrap());
        assert!(!class_number_is_one(&big(79)).unwrap());
        assert_eq!(class_number(&big(79)).unwrap(), 3);
        assert_eq!(class_number(&big(10)).unwrap(), 2);
        assert_eq!(class_number(&big(229)).unwrap(), 3);
        assert_eq!(class_number(&big(2)).unwrap(), 1);
    }

    #[test]
    fn class_number_two_routes_agree() {
        for d in 2..300i64 {
            let db = big(d);
            if !is_squarefree(&db) {
                continue;
            }
            assert_eq!(
                class_number_is_one(&db).unwrap(),
                class_number_is_one_minkowski(&db).unwrap(),
                "d = {d}"
            );
        }
    }

    #[test]
    fn prime_power_check() {
        let p2 = big(8081);
        assert_eq!(
            principal_prime_power_check(&QuadInt::from_i64(241, 100, 5), &p2),
            Some(1)
        );
        assert_eq!(
            principal_prime_power_check(&QuadInt::from_i64(7, 2, 5), &big(29)),
            Some(1)
        );
        assert_eq!(
            principal_prime_power_check(&QuadInt::from_i64(3, 1, 5), &big(29)),
            None
        );
        // 29·(7+2√5) has norm 29^3 but is divisible by 29
        let a = QuadInt::from_i64(7 * 29, 2 * 29, 5);
        assert_eq!(principal_prime_power_check(&a, &big(29)), None);
        let cube = QuadInt::from_i64(7, 2, 5).pow(3);
        assert_eq!(principal_prime_power_check(&cube, &big(29)), Some(3));
    }

    #[test]
    fn square_roots() {
        let x = q(50, 4, 5); // 25 + 2√5
        assert_eq!(x.square().sqrt(), Some(x.clone()));
        assert_eq!(q(1, 1, 5).square().sqrt(), Some(q(1, 1, 5)));
        assert_eq!(QuadInt::from_i64(3, 0, 5).sqrt(), None);
        assert_eq!(
            QuadInt::from_i64(5, 0, 5).sqrt(),
            Some(QuadInt::from_i64(0, 1, 5))
        );
    }

    #[test]
    fn common_divisors() {
        let d = big(5);
        let two = QuadInt::int(big(2), &d);
        let x = QuadInt::from_i64(2, 4, 5);
        assert!(common_prime_divisor(&[&two, &x]).is_some());
        let a = QuadInt::from_i64(7, 2, 5);
        let b = QuadInt::from_i64(7, -2, 5);
        // (7+2√5) and its conjugate generate distinct primes above 29
        assert!(common_prime_divisor(&[&a, &b]).is_none());
        assert!(common_prime_divisor(&[&a, &a.mul(&two)]).is_some());
        assert!(common_prime_divisor(&[&QuadInt::one(&d), &a]).is_none());
    }

    #[test]
    fn canonical_units() {
        let d = big(5);
        let eps = fundamental_unit(&d).unwrap();
        assert_eq!(canonical_mod_units(&eps, &eps), QuadInt::one(&d));
        assert_eq!(
            canonical_mod_units(&eps.pow(5).neg(), &eps),
            QuadInt::one(&d)
        );
        let x = QuadInt::from_i64(0, 1, 5);
        assert_eq!(canonical_mod_units(&x.mul(&eps.pow(3)), &eps), x);
    }
}
