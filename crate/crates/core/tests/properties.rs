use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use resym_core::arith::{self, Place};
use resym_core::magnus::{self, Word};
use resym_core::nilgroup::rho_i;
use resym_core::quadfield::QuadInt;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1u8..=4, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        Word::new(
            &ls.iter()
                .map(|&(g, s)| (g, if s { 1 } else { -1 }))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    })
}

fn seq(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=4, 1..=max_len)
}

fn small_primes() -> Vec<u64> {
    (3..400).filter(|&p| arith::is_prime_u64(p)).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn magnus_is_multiplicative(u in word(8), v in word(8)) {
        let lhs = magnus::magnus(&u.mul(&v), 5).unwrap();
        let rhs = magnus::magnus(&u, 5).unwrap().mul(&magnus::magnus(&v, 5).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn magnus_of_inverse(u in word(10)) {
        let prod = magnus::magnus(&u, 5).unwrap().mul(&magnus::magnus(&u.inverse(), 5).unwrap());
        prop_assert!(prod.is_one());
    }

    #[test]
    fn fox_agrees_with_magnus(i in seq(4), w in word(10)) {
        prop_assert_eq!(magnus::mu2(&i, &w).unwrap(), magnus::fox_mu2(&i, &w).unwrap());
    }

    #[test]
    fn shuffle_count(a in seq(4), b in seq(4)) {
        let sh = magnus::proper_shuffles(&a, &b);
        prop_assert_eq!(sh.len(), binomial(a.len() + b.len(), a.len()));
        for h in &sh {
            let mut x = h.clone();
            let mut y = [a.clone(), b.clone()].concat();
            x.sort();
            y.sort();
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn rho_is_multiplicative(u in word(8), v in word(8), i in seq(4)) {
        let lhs = rho_i(&u.mul(&v), &i).unwrap();
        let rhs = rho_i(&u, &i).unwrap().mul(&rho_i(&v, &i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quad_norm_multiplicative(a in -500i64..500, b in -500i64..500, c in -500i64..500, e in -500i64..500,
                                di in 0usize..4) {
        let d = [5i64, 13, 29, 101][di];
        let x = QuadInt::from_i64(a, b, d);
        let y = QuadInt::from_i64(c, e, d);
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.norm(), BigInt::from(a * a - d * b * b));
    }

    #[test]
    fn hilbert_product_formula(a in -3000i64..3000, b in -3000i64..3000) {
        prop_assume!(a != 0 && b != 0);
        let (a, b) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        let mut prod = 1;
        for v in arith::relevant_places(&a, &b) {
            prod *= arith::hilbert_symbol(&a, &b, &v).unwrap();
        }
        prop_assert_eq!(prod, 1);
        // places outside the relevant set are unramified
        prop_assert_eq!(arith::hilbert_symbol(&a, &b, &Place::Finite(BigInt::from(6007))).unwrap(), 1);
    }

    #[test]
    fn euler_criterion(a in -100_000i64..100_000, pi in 0usize..78) {
        let ps = small_primes();
        let p = BigInt::from(ps[pi % ps.len()]);
        let a = BigInt::from(a);
        prop_assert_eq!(arith::legendre(&a, &p), arith::legendre_euler(&a, &p));
        prop_assert_eq!(arith::legendre(&a, &p), arith::jacobi(&a, &p));
    }
}
