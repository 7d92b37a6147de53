use num_bigint::BigInt;
use num_integer::Integer;

use resym_core::conic::{CaseTag, RelativeOptions};
use resym_core::symbol4::{self, BuildOptions};
use resym_core::{arith, big, redei, Error};

fn primes_1mod4(bound: u64) -> Vec<BigInt> {
    (5..bound)
        .step_by(4)
        .filter(|&p| arith::is_prime_u64(p))
        .map(BigInt::from)
        .collect()
}

/// The first `n` quadruples `(5, p2, p3, p4)` with entries below `bound`
/// that pass validation, in lexicographic order.
fn quadruples(bound: u64, n: usize) -> Vec<[BigInt; 4]> {
    let ps = primes_1mod4(bound);
    let mut out = Vec::new();
    for p2 in &ps {
        for p3 in &ps {
            for p4 in &ps {
                if symbol4::validate_quadruple(&big(5), p2, p3, p4).passed() {
                    out.push([big(5), p2.clone(), p3.clone(), p4.clone()]);
                    if out.len() == n {
                        return out;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn known_values() {
    assert_eq!(
        symbol4::symbol4(&big(5), &big(8081), &big(101), &big(449))
            .unwrap()
            .value,
        -1
    );
    assert_eq!(
        redei::redei_value(&big(13), &big(61), &big(937)).unwrap(),
        -1
    );
}

#[test]
fn independent_of_solution_choices() {
    let qs = quadruples(1200, 6);
    assert_eq!(qs.len(), 6);
    let mut variants_run = 0;
    for [p1, p2, p3, p4] in &qs {
        let base = symbol4::symbol4(p1, p2, p3, p4).unwrap().value;
        let variants = [
            BuildOptions {
                legendre_index: 1,
                ..BuildOptions::default()
            },
            BuildOptions {
                relative: RelativeOptions {
                    skip: 1,
                    ..RelativeOptions::default()
                },
                ..BuildOptions::default()
            },
            BuildOptions {
                relative: RelativeOptions {
                    force_case: Some(CaseTag::ZOdd),
                    ..RelativeOptions::default()
                },
                ..BuildOptions::default()
            },
            BuildOptions {
                relative: RelativeOptions {
                    force_case: Some(CaseTag::YOdd),
                    ..RelativeOptions::default()
                },
                ..BuildOptions::default()
            },
        ];
        for opts in &variants {
            match symbol4::symbol4_with(p1, p2, p3, p4, opts) {
                Ok(r) => {
                    assert_eq!(r.value, base, "[{p1},{p2},{p3},{p4}] with {opts:?}");
                    variants_run += 1;
                }
                Err(Error::BudgetExhausted(_)) => {}
                Err(e) => panic!("[{p1},{p2},{p3},{p4}]: {e}"),
            }
        }
    }
    assert!(variants_run >= 12, "only {variants_run} variants evaluated");
}

#[test]
fn independent_of_root_choice() {
    for [p1, p2, p3, p4] in quadruples(1200, 6) {
        let r = symbol4::symbol4(&p1, &p2, &p3, &p4).unwrap();
        let s1 = arith::sqrt_mod(&p1, &p4).unwrap();
        let s3 = arith::sqrt_mod(&p3, &p4).unwrap();
        for a in [s1.clone(), &p4 - &s1] {
            for b in [s3.clone(), &p4 - &s3] {
                let all_one = r
                    .certificate
                    .splitting_generators()
                    .iter()
                    .all(|g| arith::legendre(&symbol4::embed(g, &a, &b, &p4), &p4) == 1);
                assert_eq!(if all_one { 1 } else { -1 }, r.value);
            }
        }
    }
}

/// How often the canonical relative solution lands in each parity case.
#[test]
fn parity_case_frequencies() {
    let ps = primes_1mod4(400);
    let (mut z_odd, mut y_odd) = (0, 0);
    for p2 in &ps {
        for p3 in &ps {
            if !symbol4::validate_triple(&big(5), p2, p3).passed() {
                continue;
            }
            let k = symbol4::build_k(&big(5), p2, p3, &[]).unwrap();
            symbol4::check_k_certificate(&k).unwrap();
            let (ny, nz) = (k.relsol.y.norm(), k.relsol.z.norm());
            match k.case_tag {
                CaseTag::ZOdd => {
                    assert!(nz.is_odd());
                    z_odd += 1;
                }
                CaseTag::YOdd => {
                    assert!(ny.is_odd() && nz.is_even());
                    y_odd += 1;
                }
            }
        }
    }
    assert_eq!((z_odd, y_odd), (18, 10));
}
