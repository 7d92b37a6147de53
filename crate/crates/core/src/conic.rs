//! Ternary norm equations.
//!
//! * `x² - p1·y² - p2·z² = 0` over `Z`, normalized so that `α = x + y√p1`
//!   generates an odd power of a prime above `p2` and `α ≡ 1 (mod 4)`.
//! * `X² - p3·Y² - α·Z² = 0` over `O_k`, `k = Q(√p1)`, normalized so that
//!   the Kummer generator is a square mod 4.
//!
//! Every solution is re-verified by a checker that shares no code with the
//! search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::arith::{self, modp};
use crate::biquad::{BiquadField, BiquadInt, ResidueRing};
use crate::quadfield::{self, QuadInt};
use crate::{Error, Result};

pub const DEFAULT_Z_BUDGET: u64 = 10_000;

pub fn default_z_budget() -> BigInt {
    BigInt::from(DEFAULT_Z_BUDGET)
}
pub const DEFAULT_HEIGHT_BUDGET: u64 = 1_000;

/// Window of even unit powers scanned around each fundamental solution.
const ORBIT_WINDOW: i32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalConicSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
    pub alpha: QuadInt,
    pub m: u32,
}

// ---------------------------------------------------------------------------
// Legendre equation

fn mod_ok(n: &BigInt, m: i64, r: i64) -> bool {
    modp(n, &BigInt::from(m)) == BigInt::from(r)
}

/// Every failed clause of the solvability precondition.
pub fn legendre_precondition(p1: &BigInt, p2: &BigInt) -> Vec<String> {
    let mut bad = Vec::new();
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !arith::is_prime(p) {
            bad.push(format!("{name} = {p} is prime"));
        } else if !mod_ok(p, 4, 1) {
            bad.push(format!("{name} ≡ 1 (mod 4)"));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    if p1 == p2 {
        bad.push("p1 ≠ p2".into());
        return bad;
    }
    if arith::legendre(p1, p2) != 1 {
        bad.push("(p1/p2) = 1".into());
    }
    if arith::legendre(p2, p1) != 1 {
        bad.push("(p2/p1) = 1".into());
    }
    let a = BigRational::from_integer(p1.clone());
    let b = BigRational::from_integer(p2.clone());
    for place in arith::relevant_places(&a, &b) {
        if arith::hilbert_symbol(&a, &b, &place) != Ok(1) {
            bad.push(format!("hilbert symbol (p1,p2) trivial at {place:?}"));
        }
    }
    bad
}

/// A unit of `Z[√d]` of norm `-1`.
fn negative_unit_zsqrt(d: &BigInt) -> Result<QuadInt> {
    let e = quadfield::fundamental_unit(d)?;
    let e = if e.integer_coords().is_some() {
        e
    } else {
        e.pow(3)
    };
    if e.norm() != BigInt::from(-1) {
        return Err(Error::Internal(format!("no unit of norm -1 in Z[√{d}]")));
    }
    Ok(e)
}

/// Square roots of `d` modulo `p^m` (odd `p ∤ d`), via Hensel lifting.
fn sqrt_mod_prime_power(d: &BigInt, p: &BigInt, m: u32) -> Option<BigInt> {
    let mut r = arith::sqrt_mod(d, p)?;
    if r.is_zero() {
        return None;
    }
    let mut pk = p.clone();
    for _ in 1..m {
        let next = &pk * p;
        // r <- r - (r² - d)/(2r) mod p^{k+1}
        let inv = arith::inv_mod(&(&r * 2), &next)?;
        r = modp(&(&r - (&r * &r - d) * inv), &next);
        pk = next;
    }
    Some(r)
}

/// Fundamental solutions of `x² - D y² = ±N` with `gcd(x,y) = 1`, one per
/// root class, by the continued-fraction (PQa) method.
fn pqa_fundamental(d: &BigInt, n: &BigInt, roots: &[BigInt]) -> Vec<(BigInt, BigInt, BigInt)> {
    let s = d.sqrt();
    let mut out = Vec::new();
    for r in roots {
        let (mut p, mut q) = (r.clone(), n.clone());
        let (mut g2, mut g1) = (-r.clone(), n.clone());
        let (mut b2, mut b1) = (BigInt::one(), BigInt::zero());
        let mut seen = HashSet::new();
        loop {
            if !seen.insert((p.clone(), q.clone())) {
                break;
            }
            let a = if q.is_positive() {
                (&p + &s).div_floor(&q)
            } else {
                (&p + &s + 1u32).div_floor(&q)
            };
            let g = &a * &g1 + &g2;
            let b = &a * &b1 + &b2;
            let p_next = &a * &q - &p;
            let q_next = (d - &p_next * &p_next) / &q;
            g2 = std::mem::replace(&mut g1, g);
            b2 = std::mem::replace(&mut b1, b);
            p = p_next;
            q = q_next;
            if q.abs().is_one() {
                let norm = &g1 * &g1 - d * &b1 * &b1;
                out.push((g1.clone(), b1.clone(), norm));
                break;
            }
        }
    }
    out
}

/// All solutions of `x² - p1 y² = N` with `gcd(x,y) = 1` reachable from the
/// fundamental ones within the orbit window, as `(|x|, |y|)` pairs.
fn norm_solutions(p1: &BigInt, p2: &BigInt, m: u32, eta: &QuadInt) -> Vec<(BigInt, BigInt)> {
    let n = &num_traits::pow(p2.clone(), m as usize);
    let r = match sqrt_mod_prime_power(p1, p2, m) {
        Some(r) => r,
        None => return vec![],
    };
    let half = n / 2;
    let centre = |v: BigInt| if v > half { v - n } else { v };
    let roots = [centre(r.clone()), centre(modp(&(-r), n))];
    let eta2 = eta.square();
    let eta2_inv = eta2.conj();
    let mut set = HashSet::new();
    for (g, b, norm) in pqa_fundamental(p1, n, &roots) {
        let mut base = QuadInt::new(g, b, p1.clone());
        if norm == -n.clone() {
            base = base.mul(eta);
        } else if norm != *n {
            continue;
        }
        let mut up = base.clone();
        let mut down = base.clone();
        for _ in 0..=ORBIT_WINDOW {
            for v in [&up, &down] {
                if let Some((x, y)) = v.integer_coords() {
                    set.insert((x.abs(), y.abs()));
                }
            }
            up = up.mul(&eta2);
            down = down.mul(&eta2_inv);
        }
    }
    let mut v: Vec<_> = set.into_iter().collect();
    v.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    v
}

fn mandatory_ok(x: &BigInt, y: &BigInt) -> bool {
    y.is_even() && mod_ok(&(x - y), 4, 1)
}

/// Valid solutions for a fixed odd exponent `m`, in search order.
fn solutions_at(p1: &BigInt, p2: &BigInt, m: u32, eta: &QuadInt) -> Vec<RationalConicSolution> {
    let z = num_traits::pow(p2.clone(), ((m - 1) / 2) as usize);
    let mut out = Vec::new();
    for (ax, ay) in norm_solutions(p1, p2, m, eta) {
        for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let x = &ax * sx;
            let y = &ay * sy;
            if !mandatory_ok(&x, &y) {
                continue;
            }
            let alpha = QuadInt::new(x.clone(), y.clone(), p1.clone());
            if quadfield::principal_prime_power_check(&alpha, p2) != Some(m) {
                continue;
            }
            let sol = RationalConicSolution {
                x,
                y,
                z: z.clone(),
                alpha,
                m,
            };
            if !out.contains(&sol) {
                out.push(sol);
            }
        }
    }
    out
}

/// Move the first solution with `x - y ≡ 5 (mod 8)` to the front.
fn prefer_mod8(mut v: Vec<RationalConicSolution>) -> Vec<RationalConicSolution> {
    if let Some(i) = v.iter().position(|s| mod_ok(&(&s.x - &s.y), 8, 5)) {
        let s = v.remove(i);
        v.insert(0, s);
    }
    v
}

/// Up to `count` distinct solutions in search order; the first is the one
/// returned by [`solve_legendre`].
pub fn legendre_solutions(
    p1: &BigInt,
    p2: &BigInt,
    avoid: &[BigInt],
    z_budget: &BigInt,
    count: usize,
) -> Result<Vec<RationalConicSolution>> {
    let bad = legendre_precondition(p1, p2);
    if !bad.is_empty() {
        return Err(Error::Precondition(bad));
    }
    let eta = negative_unit_zsqrt(p1)?;
    let budget = z_budget;
    let mut out = Vec::new();
    let mut m = 1u32;
    loop {
        let z = num_traits::pow(p2.clone(), ((m - 1) / 2) as usize);
        if &z > budget {
            break;
        }
        let blocked = avoid.iter().any(|q| !q.is_zero() && (&z % q).is_zero());
        if !blocked {
            let found = solutions_at(p1, p2, m, &eta);
            let found = if out.is_empty() {
                prefer_mod8(found)
            } else {
                found
            };
            for s in found {
                if out.len() < count {
                    out.push(s);
                }
            }
            if out.len() >= count {
                break;
            }
        }
        m += 2;
    }
    if out.is_empty() {
        return Err(Error::BudgetExhausted(format!(
            "no solution of x² - {p1}y² = {p2}z² with z ≤ {z_budget}"
        )));
    }
    Ok(out)
}

pub fn solve_legendre(p1: &BigInt, p2: &BigInt, avoid: &[BigInt]) -> Result<RationalConicSolution> {
    solve_legendre_with_budget(p1, p2, avoid, &default_z_budget())
}

pub fn solve_legendre_with_budget(
    p1: &BigInt,
    p2: &BigInt,
    avoid: &[BigInt],
    z_budget: &BigInt,
) -> Result<RationalConicSolution> {
    let sol = legendre_solutions(p1, p2, avoid, z_budget, 1)?.remove(0);
    check_rational_solution(p1, p2, &sol)?;
    Ok(sol)
}

/// Re-check every invariant of a rational solution from scratch.
pub fn check_rational_solution(p1: &BigInt, p2: &BigInt, s: &RationalConicSolution) -> Result<()> {
    let mut bad = Vec::new();
    if &s.x * &s.x - p1 * &s.y * &s.y - p2 * &s.z * &s.z != BigInt::zero() {
        bad.push("x² - p1 y² - p2 z² = 0");
    }
    if !s.x.gcd(&s.y).gcd(&s.z).is_one() {
        bad.push("gcd(x,y,z) = 1");
    }
    if !s.y.is_even() {
        bad.push("y even");
    }
    if modp(&(&s.x - &s.y), &BigInt::from(4)) != BigInt::one() {
        bad.push("x - y ≡ 1 (mod 4)");
    }
    if s.alpha != QuadInt::new(s.x.clone(), s.y.clone(), p1.clone()) {
        bad.push("alpha = x + y√p1");
    }
    if s.m % 2 == 0 || s.alpha.norm() != num_traits::pow(p2.clone(), s.m as usize) {
        bad.push("N(alpha) = p2^m, m odd");
    }
    if QuadInt::int(p2.clone(), p1).divides(&s.alpha) {
        bad.push("p2 ∤ alpha");
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "rational solution {s:?} violates: {}",
            bad.join(", ")
        )))
    }
}

// ---------------------------------------------------------------------------
// Relative conic over O_k

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "Z_odd")]
    ZOdd,
    #[serde(rename = "Y_odd")]
    YOdd,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseTag::ZOdd => "Z_odd",
            CaseTag::YOdd => "Y_odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeConicSolution {
    #[serde(rename = "X")]
    pub x: QuadInt,
    #[serde(rename = "Y")]
    pub y: QuadInt,
    #[serde(rename = "Z")]
    pub z: QuadInt,
    pub case_tag: CaseTag,
    pub lambda_witness: BiquadInt,
    /// Index into `[1, -1, ε, -ε]` of the unit applied during normalization.
    pub unit_index: u8,
    /// Multiplicative order of the generator mod 4 after normalization.
    pub theta_order: u64,
    /// Coordinate height at which the raw solution was found.
    pub height: u64,
}

#[derive(Clone, Debug)]
pub struct RelativeOptions {
    pub height_budget: u64,
    /// Accept only solutions of this parity case.
    pub force_case: Option<CaseTag>,
    /// Skip this many valid raw solutions before accepting one.
    pub skip: usize,
}

impl Default for RelativeOptions {
    fn default() -> Self {
        RelativeOptions {
            height_budget: DEFAULT_HEIGHT_BUDGET,
            force_case: None,
            skip: 0,
        }
    }
}

/// Elements of `O_k` of exact coordinate height `h`, in search order.
fn elements_of_height(h: i64, d: &BigInt) -> Vec<QuadInt> {
    let odd_ok = modp(d, &BigInt::from(4)).is_one();
    let mut v = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            if a.abs().max(b.abs()) != h {
                continue;
            }
            if (a - b) % 2 != 0 || (!odd_ok && a % 2 != 0) {
                continue;
            }
            v.push((a, b));
        }
    }
    v.sort_by_key(|&(a, b)| (b.abs(), a.abs(), a < 0, b < 0));
    v.into_iter()
        .map(|(a, b)| QuadInt {
            a2: BigInt::from(a),
            b2: BigInt::from(b),
            d: d.clone(),
        })
        .collect()
}

fn relative_precondition(p1: &BigInt, p3: &BigInt, alpha: &QuadInt) -> Vec<String> {
    let mut bad = Vec::new();
    if !arith::is_prime(p1) || !mod_ok(p1, 8, 5) {
        bad.push("p1 ≡ 5 (mod 8)".into());
    } else if !quadfield::class_number_is_one(p1).unwrap_or(false) {
        bad.push("h(Q(√p1)) = 1".into());
    }
    if !arith::is_prime(p3) || !mod_ok(p3, 4, 1) {
        bad.push("p3 ≡ 1 (mod 4)".into());
    }
    if alpha.d != *p1 {
        bad.push("alpha ∈ Q(√p1)".into());
    } else if BiquadField::new(p1, alpha.clone()).is_err() {
        bad.push("alpha ≡ 1 (mod 4)".into());
    }
    bad
}

/// The Kummer generator `X + Y√p3` (case Z odd) or `X + Z√α` (case Y odd).
pub fn kummer_generator(
    p1: &BigInt,
    p3: &BigInt,
    alpha: &QuadInt,
    x: &QuadInt,
    y: &QuadInt,
    z: &QuadInt,
    case: CaseTag,
) -> Result<BiquadInt> {
    Ok(match case {
        CaseTag::ZOdd => BiquadInt::from_parts(&BiquadField::rational(p1, p3)?, x, y),
        CaseTag::YOdd => BiquadInt::from_parts(&BiquadField::new(p1, alpha.clone())?, x, z),
    })
}

fn avoided(q: &QuadInt, avoid: &[BigInt]) -> bool {
    let n = q.norm();
    avoid.iter().any(|p| !p.is_zero() && (&n % p).is_zero())
}

pub fn solve_relative_conic(
    p1: &BigInt,
    p3: &BigInt,
    alpha: &QuadInt,
    avoid: &[BigInt],
) -> Result<RelativeConicSolution> {
    solve_relative_conic_with(p1, p3, alpha, avoid, &RelativeOptions::default())
}

pub fn solve_relative_conic_with(
    p1: &BigInt,
    p3: &BigInt,
    alpha: &QuadInt,
    avoid: &[BigInt],
    opts: &RelativeOptions,
) -> Result<RelativeConicSolution> {
    let bad = relative_precondition(p1, p3, alpha);
    if !bad.is_empty() {
        return Err(Error::Precondition(bad));
    }
    let d = p1;
    let eps_fund = quadfield::fundamental_unit(d)?;
    let p3q = QuadInt::int(p3.clone(), d);
    let d_small = i128::try_from(d).ok();
    let with_squares = |v: Vec<QuadInt>| -> Vec<(QuadInt, Option<(i128, i128)>)> {
        v.into_iter()
            .map(|y| {
                let sq = p3q.mul(&y.square());
                let small = i128::try_from(&sq.a2).ok().zip(i128::try_from(&sq.b2).ok());
                (y, small)
            })
            .collect()
    };
    let mut by_height = vec![with_squares(elements_of_height(0, d))];
    let mut zs: Vec<(i64, QuadInt, QuadInt)> = Vec::new();
    let mut skipped = 0usize;
    for h in 1..=opts.height_budget as i64 {
        let fresh = elements_of_height(h, d);
        for z in &fresh {
            if quadfield::canonical_mod_units(z, &eps_fund) == *z {
                zs.push((h, z.clone(), alpha.mul(&z.square())));
            }
        }
        by_height.push(with_squares(fresh));
        for (hz, z, az2) in &zs {
            let az2_small = i128::try_from(&az2.a2)
                .ok()
                .zip(i128::try_from(&az2.b2).ok());
            let ys: Box<dyn Iterator<Item = &(QuadInt, Option<(i128, i128)>)>> = if *hz < h {
                Box::new(by_height[h as usize].iter())
            } else {
                Box::new(by_height.iter().flatten())
            };
            for (y, y_small) in ys {
                if let (Some(ys), Some(zs), Some(dd)) = (y_small, az2_small, d_small) {
                    if let (Some(a), Some(b)) = (ys.0.checked_add(zs.0), ys.1.checked_add(zs.1)) {
                        if surely_not_square(a, b, dd) {
                            continue;
                        }
                    }
                }
                let t = p3q.mul(&y.square()).add(az2);
                let x = match t.sqrt() {
                    Some(x) => x,
                    None => continue,
                };
                let z_odd = z.norm().is_odd();
                let y_odd = y.norm().is_odd();
                let case = match opts.force_case {
                    Some(CaseTag::YOdd) if y_odd && !z_odd => CaseTag::YOdd,
                    Some(CaseTag::YOdd) => continue,
                    Some(CaseTag::ZOdd) if z_odd => CaseTag::ZOdd,
                    Some(CaseTag::ZOdd) => continue,
                    None if z_odd => CaseTag::ZOdd,
                    None if y_odd => CaseTag::YOdd,
                    None => continue,
                };
                if quadfield::common_prime_divisor(&[&x, y, z]).is_some() {
                    continue;
                }
                if avoided(y, avoid) || avoided(z, avoid) {
                    continue;
                }
                if skipped < opts.skip {
                    skipped += 1;
                    continue;
                }
                let sol = normalize(p1, p3, alpha, &x, y, z, case, h as u64)?;
                check_relative_solution(p1, p3, alpha, &sol)?;
                return Ok(sol);
            }
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no solution of X² - {p3}Y² = ({alpha})Z² with height ≤ {}",
        opts.height_budget
    )))
}

const fn square_mask(m: u128) -> u128 {
    let mut mask = 0u128;
    let mut x = 0;
    while x < m {
        mask |= 1 << (x * x % m);
        x += 1;
    }
    mask
}

const SQUARES: [u128; 4] = [
    square_mask(64),
    square_mask(63),
    square_mask(65),
    square_mask(11),
];

/// `(a + b√d)/2` cannot be a square in `O_k`: it is not totally positive
/// or its norm is not a perfect square. `false` when undecided in `i128`.
fn surely_not_square(a: i128, b: i128, d: i128) -> bool {
    if a < 0 {
        return true;
    }
    let n4 = match a
        .checked_mul(a)
        .zip(b.checked_mul(b).and_then(|v| v.checked_mul(d)))
    {
        Some((x, y)) => x - y,
        None => return false,
    };
    if n4 < 0 {
        return true;
    }
    // squares mod 64, 63, 65 and 11 before the exact root
    for (m, mask) in [
        (64, SQUARES[0]),
        (63, SQUARES[1]),
        (65, SQUARES[2]),
        (11, SQUARES[3]),
    ] {
        if mask >> (n4 % m) as u32 & 1 == 0 {
            return true;
        }
    }
    let r = num_integer::Roots::sqrt(&n4);
    r * r != n4
}

/// Make the Kummer generator a square mod 4 by a unit from `[1, -1, ε, -ε]`.
#[allow(clippy::too_many_arguments)]
fn normalize(
    p1: &BigInt,
    p3: &BigInt,
    alpha: &QuadInt,
    x: &QuadInt,
    y: &QuadInt,
    z: &QuadInt,
    case: CaseTag,
    height: u64,
) -> Result<RelativeConicSolution> {
    let eps = quadfield::adjusted_unit(p1)?.epsilon;
    let units = [
        QuadInt::one(p1),
        QuadInt::one(p1).neg(),
        eps.clone(),
        eps.neg(),
    ];
    let theta = kummer_generator(p1, p3, alpha, x, y, z, case)?;
    let ring = ResidueRing::new(&theta.field)?;
    let mut orders = Vec::new();
    for (i, u) in units.iter().enumerate() {
        let (ux, uy, uz) = (u.mul(x), u.mul(y), u.mul(z));
        let th = kummer_generator(p1, p3, alpha, &ux, &uy, &uz, case)?;
        let r = ring.reduce(&th)?;
        let t = ring.order(r)?;
        orders.push(t);
        if t % 2 == 1 {
            let lam = ring.lift(ring.sqrt(r)?.expect("odd order has a root"));
            return Ok(RelativeConicSolution {
                x: ux,
                y: uy,
                z: uz,
                case_tag: case,
                lambda_witness: lam,
                unit_index: i as u8,
                theta_order: t,
                height,
            });
        }
    }
    Err(Error::Internal(format!(
        "no unit in [1, -1, ε, -ε] gives odd order: X = {x}, Y = {y}, Z = {z}, \
         α = {alpha}, p3 = {p3}, case = {case}, orders = {orders:?}, ε = {eps}"
    )))
}

/// `a ≡ b (mod 4)` in the working order, by direct coordinate arithmetic.
fn congruent_mod4(a: &BiquadInt, b: &BiquadInt) -> bool {
    match a.add(&b.neg()).basis_coeffs() {
        Ok(c) => c.iter().all(|v| (v % 4u32).is_zero()),
        Err(_) => false,
    }
}

/// Re-check every invariant of a relative solution from scratch.
pub fn check_relative_solution(
    p1: &BigInt,
    p3: &BigInt,
    alpha: &QuadInt,
    s: &RelativeConicSolution,
) -> Result<()> {
    let mut bad = Vec::new();
    let p3q = QuadInt::int(p3.clone(), p1);
    let lhs =
        s.x.square()
            .sub(&p3q.mul(&s.y.square()))
            .sub(&alpha.mul(&s.z.square()));
    if !lhs.is_zero() {
        bad.push("X² - p3 Y² - α Z² = 0");
    }
    if quadfield::common_prime_divisor(&[&s.x, &s.y, &s.z]).is_some() {
        bad.push("gcd(X,Y,Z) = 1");
    }
    let (odd, theta) = match s.case_tag {
        CaseTag::ZOdd => (
            s.z.norm().is_odd(),
            BiquadField::rational(p1, p3).map(|f| BiquadInt::from_parts(&f, &s.x, &s.y)),
        ),
        CaseTag::YOdd => (
            s.y.norm().is_odd(),
            BiquadField::new(p1, alpha.clone()).map(|f| BiquadInt::from_parts(&f, &s.x, &s.z)),
        ),
    };
    if !odd {
        bad.push("case parity");
    }
    match theta {
        Ok(theta) => {
            if s.lambda_witness.field != theta.field
                || !congruent_mod4(&s.lambda_witness.mul(&s.lambda_witness), &theta)
            {
                bad.push("λ² ≡ θ (mod 4)");
            }
            // θ·θ_2 = αZ² (resp. p3 Y²)
            let expect = match s.case_tag {
                CaseTag::ZOdd => alpha.mul(&s.z.square()),
                CaseTag::YOdd => p3q.mul(&s.y.square()),
            };
            if theta.relative_norm() != expect {
                bad.push("relative norm identity");
            }
        }
        Err(_) => bad.push("working order"),
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "relative solution {s:?} violates: {}",
            bad.join(", ")
        )))
    }
}
