//! Rédei extensions `Q(√p1, √p2, √α)` and the triple symbol `[p1,p2,p3]`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, modp};
use crate::conic::{self, RationalConicSolution};
use crate::quadfield::QuadInt;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedeiCertificate {
    pub p1: BigInt,
    pub p2: BigInt,
    pub solution: RationalConicSolution,
    pub alpha: QuadInt,
}

/// Failed clauses of the triple condition: primes `≡ 1 (mod 4)`, distinct,
/// all six Legendre symbols 1.
pub fn triple_precondition(ps: &[&BigInt]) -> Vec<String> {
    let mut bad = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        if !arith::is_prime(p) {
            bad.push(format!("p{} = {p} is prime", i + 1));
        } else if modp(p, &BigInt::from(4)) != BigInt::from(1) {
            bad.push(format!("p{} ≡ 1 (mod 4)", i + 1));
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    for i in 0..ps.len() {
        for j in 0..ps.len() {
            if i == j {
                continue;
            }
            if ps[i] == ps[j] {
                if i < j {
                    bad.push(format!("p{} ≠ p{}", i + 1, j + 1));
                }
                continue;
            }
            if arith::legendre(ps[i], ps[j]) != 1 {
                bad.push(format!("(p{}/p{}) = 1", i + 1, j + 1));
            }
        }
    }
    bad
}

/// `legendre(x + y·s, q)`, or 0 when the residue vanishes.
pub fn alpha_character(sol: &RationalConicSolution, s: &BigInt, q: &BigInt) -> i32 {
    arith::legendre(&modp(&(&sol.x + &sol.y * s), q), q)
}

/// Character of `α` at `q` for both roots of `p1`, checked to agree.
fn split_indicator(sol: &RationalConicSolution, p1: &BigInt, q: &BigInt) -> Result<i32> {
    let s = arith::sqrt_mod(p1, q)
        .ok_or_else(|| Error::InvalidInput(format!("{p1} is not a square mod {q}")))?;
    let v = alpha_character(sol, &s, q);
    let w = alpha_character(sol, &(q - &s), q);
    if v != w {
        return Err(Error::Internal(format!(
            "root choice changed the character of {} mod {q}: {v} vs {w}",
            sol.alpha
        )));
    }
    Ok(v)
}

/// `[p1,p2,p3]` with the certificate used to evaluate it.
pub fn redei_symbol(p1: &BigInt, p2: &BigInt, p3: &BigInt) -> Result<(i32, RedeiCertificate)> {
    redei_symbol_with_budget(p1, p2, p3, &conic::default_z_budget())
}

pub fn redei_symbol_with_budget(
    p1: &BigInt,
    p2: &BigInt,
    p3: &BigInt,
    z_budget: &BigInt,
) -> Result<(i32, RedeiCertificate)> {
    let bad = triple_precondition(&[p1, p2, p3]);
    if !bad.is_empty() {
        return Err(Error::Precondition(bad));
    }
    let avoid = [p3.clone()];
    let sols = conic::legendre_solutions(p1, p2, &avoid, z_budget, SOLUTION_WINDOW)?;
    redei_symbol_from(p1, p2, p3, sols)
}

/// Solutions computed per pair; a triple uses the first one whose residue
/// at `p3` is nonzero.
pub const SOLUTION_WINDOW: usize = 8;

/// `[p1,p2,p3]` from precomputed solutions for `(p1,p2)` in search order.
pub fn redei_symbol_from(
    p1: &BigInt,
    p2: &BigInt,
    p3: &BigInt,
    sols: Vec<RationalConicSolution>,
) -> Result<(i32, RedeiCertificate)> {
    let bad = triple_precondition(&[p1, p2, p3]);
    if !bad.is_empty() {
        return Err(Error::Precondition(bad));
    }
    // a degenerate residue moves on to the next solution in search order
    for sol in sols {
        if (&sol.z % p3).is_zero() {
            continue;
        }
        conic::check_rational_solution(p1, p2, &sol)?;
        let v = split_indicator(&sol, p1, p3)?;
        if v != 0 {
            let cert = RedeiCertificate {
                p1: p1.clone(),
                p2: p2.clone(),
                alpha: sol.alpha.clone(),
                solution: sol,
            };
            return Ok((v, cert));
        }
    }
    Err(Error::BudgetExhausted(format!(
        "every solution for ({p1},{p2}) vanishes mod {p3}"
    )))
}

pub fn redei_value(p1: &BigInt, p2: &BigInt, p3: &BigInt) -> Result<i32> {
    redei_symbol(p1, p2, p3).map(|r| r.0)
}

/// Certificates from the first `count` distinct solutions for `(p1,p2)`.
pub fn redei_certificates(p1: &BigInt, p2: &BigInt, count: usize) -> Result<Vec<RedeiCertificate>> {
    let sols = conic::legendre_solutions(p1, p2, &[], &conic::default_z_budget(), count)?;
    Ok(sols
        .into_iter()
        .map(|s| RedeiCertificate {
            p1: p1.clone(),
            p2: p2.clone(),
            alpha: s.alpha.clone(),
            solution: s,
        })
        .collect())
}

/// Auxiliary primes `q ≡ 1 (mod 4)` with `(p1/q) = (p2/q) = 1`, ascending.
pub fn auxiliary_primes(p1: &BigInt, p2: &BigInt, count: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut q = BigInt::from(5);
    while out.len() < count {
        if arith::is_prime(&q)
            && &q != p1
            && &q != p2
            && arith::legendre(p1, &q) == 1
            && arith::legendre(p2, &q) == 1
        {
            out.push(q.clone());
        }
        q += 4u32;
    }
    out
}

/// Empirical equality of the two Rédei fields: the splitting indicator of
/// `α` agrees at `trial_primes` auxiliary primes.
pub fn redei_field_equal(
    c1: &RedeiCertificate,
    c2: &RedeiCertificate,
    trial_primes: usize,
) -> Result<bool> {
    if c1.p1 != c2.p1 || c1.p2 != c2.p2 {
        return Err(Error::InvalidInput(format!(
            "certificates for ({},{}) and ({},{})",
            c1.p1, c1.p2, c2.p1, c2.p2
        )));
    }
    let mut used = 0;
    let mut q = BigInt::from(5);
    while used < trial_primes {
        if arith::is_prime(&q)
            && q != c1.p1
            && q != c1.p2
            && arith::legendre(&c1.p1, &q) == 1
            && arith::legendre(&c1.p2, &q) == 1
            && !(&c1.solution.z % &q).is_zero()
            && !(&c2.solution.z % &q).is_zero()
        {
            let a = split_indicator(&c1.solution, &c1.p1, &q)?;
            let b = split_indicator(&c2.solution, &c2.p1, &q)?;
            if a != b {
                return Ok(false);
            }
            used += 1;
        }
        q += 4u32;
    }
    Ok(true)
}
