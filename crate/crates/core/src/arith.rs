//! Modular arithmetic primitives: primality, Legendre/Jacobi symbols,
//! modular square roots and rational Hilbert symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::Deref;

use crate::{Error, Result};

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Extra strong-probable-prime rounds for inputs above 2^64.
const EXTRA_ROUNDS: usize = 16;

/// A positive integer that passed [`is_prime`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(BigInt);

impl Prime {
    pub fn new(n: BigInt) -> Result<Self> {
        if is_prime(&n) {
            Ok(Prime(n))
        } else {
            Err(Error::InvalidInput(format!("{n} is not prime")))
        }
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Self::new(BigInt::from(n))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }
}

impl Deref for Prime {
    type Target = BigInt;
    fn deref(&self) -> &BigInt {
        &self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduce into `[0, m)`.
pub fn modp(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Modular inverse, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modp(a, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modp(&e.x, m))
    } else {
        None
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn strong_probable_prime(n: &BigInt, d: &BigInt, s: u32, base: &BigInt) -> bool {
    let n1 = n - 1u32;
    let mut x = base.modpow(d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Deterministic Miller-Rabin below 2^64; above, the same bases plus a
/// fixed-seed battery of further strong-probable-prime rounds.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n1 >> s;
    for &b in SMALL_PRIMES.iter() {
        if !strong_probable_prime(n, &d, s, &BigInt::from(b)) {
            return false;
        }
    }
    if n.bits() <= 64 {
        return true;
    }
    let mut state = 0x5EED_u64;
    let span: BigInt = n - 3u32;
    for _ in 0..EXTRA_ROUNDS {
        let mut r = BigInt::zero();
        for _ in 0..(n.bits() / 64 + 1) {
            r = (r << 64) + BigInt::from(splitmix64(&mut state));
        }
        let base = (r % &span) + 2u32;
        if !strong_probable_prime(n, &d, s, &base) {
            return false;
        }
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(
        n.is_positive() && n.is_odd(),
        "jacobi: modulus must be odd and positive"
    );
    let mut a = modp(a, n);
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        let r8 = (&n % 8u32).to_u32().unwrap();
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Jacobi reciprocity.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    jacobi(a, p)
}

pub fn legendre_symbol(a: &BigInt, p: &Prime) -> i32 {
    legendre(a, p)
}

/// Euler-criterion evaluation, kept as an independent cross-check.
pub fn legendre_euler(a: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1u32) >> 1;
    let r = modp(a, p).modpow(&e, p);
    if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo the odd prime `p` (Tonelli-Shanks), returned
/// as the representative in `[0, (p-1)/2]`.
pub fn sqrt_mod(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = modp(a, p);
    if a.is_zero() {
        return Some(a);
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let p1: BigInt = p - 1u32;
    let s = p1.trailing_zeros().unwrap_or(0);
    let q = &p1 >> s;
    let mut z = BigInt::from(2);
    while legendre(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(&one << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    let other = p - &r;
    Some(if other < r { other } else { r })
}

/// A place of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(BigInt),
    Infinity,
}

fn valuation(n: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Move a nonzero rational into an integer of the same square class.
fn square_class_integer(a: &BigRational) -> BigInt {
    a.numer() * a.denom()
}

/// Hilbert symbol `(a,b)_v` over `Q`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("hilbert symbol of zero".into()));
    }
    let a = square_class_integer(a);
    let b = square_class_integer(b);
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) if p == &BigInt::from(2) => {
            let (alpha, u) = valuation(&a, p);
            let (beta, v) = valuation(&b, p);
            let eps = |x: &BigInt| -> u64 { (modp(x, &BigInt::from(4)) == BigInt::from(3)) as u64 };
            let omega = |x: &BigInt| -> u64 {
                let r = modp(x, &BigInt::from(8));
                (r == BigInt::from(3) || r == BigInt::from(5)) as u64
            };
            let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = valuation(&a, p);
            let (beta, v) = valuation(&b, p);
            let mut s = 1;
            if alpha * beta % 2 == 1 && modp(p, &BigInt::from(4)) == BigInt::from(3) {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    })
}

/// Prime factors (with multiplicity dropped) by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// The places at which a Hilbert symbol `(a,b)_v` can be nontrivial.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let mut primes = vec![BigInt::from(2)];
    for x in [a.numer(), a.denom(), b.numer(), b.denom()] {
        for p in prime_factors(x) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    places.push(Place::Infinity);
    places
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(8081)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(561)));
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial_prime(n), "n = {n}");
        }
    }

    #[test]
    fn primality_large() {
        let m61 = (BigInt::one() << 61) - 1;
        assert!(is_prime(&m61));
        let m127: BigInt = (BigInt::one() << 127) - 1;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m61)));
        // strong pseudoprime to all bases below 41
        let psp: BigInt = "3317044064679887385961981".parse().unwrap();
        assert!(!is_prime(&psp));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&big(5), &big(11)), 1);
        assert_eq!(legendre(&big(2), &big(5)), -1);
        assert_eq!(legendre(&big(11), &big(11)), 0);
        assert_eq!(legendre(&big(-1), &big(13)), 1);
        assert_eq!(legendre(&big(-1), &big(7)), -1);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(&big(5), &big(11)), Some(big(4)));
        assert_eq!(sqrt_mod(&big(0), &big(13)), Some(big(0)));
        assert_eq!(sqrt_mod(&big(2), &big(5)), None);
    }

    #[test]
    fn sqrt_exhaustive_small() {
        for p in (3..200u64).filter(|&p| trial_prime(p)) {
            let pb = BigInt::from(p);
            let squares: Vec<u64> = (0..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let ab = BigInt::from(a);
                let r = sqrt_mod(&ab, &pb);
                assert_eq!(r.is_some(), squares.contains(&a), "a={a} p={p}");
                assert_eq!(r.is_some(), legendre(&ab, &pb) >= 0);
                if let Some(s) = r {
                    assert_eq!(modp(&(&s * &s), &pb), ab);
                    assert!(s <= (&pb - 1) / 2);
                }
            }
        }
    }

    #[test]
    fn reciprocity_against_euler() {
        let ps: Vec<u64> = (3..500).filter(|&p| trial_prime(p)).collect();
        for &p in &ps {
            for &q in &ps {
                if p == q {
                    continue;
                }
                let (pb, qb) = (BigInt::from(p), BigInt::from(q));
                let lhs = legendre(&pb, &qb) * legendre(&qb, &pb);
                let sign = if (p % 4 == 3) && (q % 4 == 3) { -1 } else { 1 };
                assert_eq!(lhs, sign);
                assert_eq!(legendre(&pb, &qb), legendre_euler(&pb, &qb));
            }
        }
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(big(n))
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&q(3), &q(7), &Place::Infinity).unwrap(), 1);
        assert_eq!(
            hilbert_symbol(&q(-3), &q(-7), &Place::Infinity).unwrap(),
            -1
        );
        assert_eq!(
            hilbert_symbol(&q(2), &q(3), &Place::Finite(big(3))).unwrap(),
            -1
        );
        for place in relevant_places(&q(5), &q(8081)) {
            assert_eq!(hilbert_symbol(&q(5), &q(8081), &place).unwrap(), 1);
        }
        // (-1,-1) is nontrivial exactly at 2 and infinity
        assert_eq!(
            hilbert_symbol(&q(-1), &q(-1), &Place::Finite(big(2))).unwrap(),
            -1
        );
        assert_eq!(
            hilbert_symbol(&q(-1), &q(-1), &Place::Finite(big(3))).unwrap(),
            1
        );
    }

    #[test]
    fn hilbert_matches_brute_force_solvability_at_odd_primes() {
        // For unit-or-uniformizer inputs at odd p, solvability of
        // z^2 = a x^2 + b y^2 is decided mod p^2.
        for p in [3i64, 5, 7] {
            let m = p * p;
            for a in [1i64, 2, 3, p, 2 * p] {
                for b in [1i64, 3, 5, p, 3 * p] {
                    let mut found = false;
                    'search: for x in 0..m {
                        for y in 0..m {
                            for z in 0..m {
                                let primitive = x % p != 0 || y % p != 0 || z % p != 0;
                                if primitive && (z * z - a * x * x - b * y * y).rem_euclid(m) == 0 {
                                    // lift only matters when not all of x,y,z are degenerate
                                    found = true;
                                    break 'search;
                                }
                            }
                        }
                    }
                    let h = hilbert_symbol(&q(a), &q(b), &Place::Finite(big(p))).unwrap();
                    if h == 1 {
                        assert!(found, "a={a} b={b} p={p}");
                    }
                }
            }
        }
    }
}
