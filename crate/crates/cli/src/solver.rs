//! Memoizing front end over the core solvers, backed by the optional cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use anyhow::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use resym_core::arith;
use resym_core::conic::{self, RationalConicSolution, RelativeConicSolution, RelativeOptions};
use resym_core::quadfield::QuadInt;
use resym_core::redei::{self, RedeiCertificate, SOLUTION_WINDOW};
use resym_core::symbol4::{self, KCertificate, SymbolResult};
use resym_core::{Error as CoreError, Result as CoreResult};

use crate::cache::{Cache, Kind};
use crate::json::{self, Budgets};
use crate::outcome::{failures_to_error, Mismatch};
use crate::verify;

type RelKey = (BigInt, BigInt, QuadInt, Vec<BigInt>);

pub struct Solver {
    budgets: Budgets,
    cache: Option<Arc<Cache>>,
    pairs: Mutex<HashMap<(BigInt, BigInt), CoreResult<Arc<Vec<RationalConicSolution>>>>>,
    relatives: Mutex<HashMap<RelKey, CoreResult<RelativeConicSolution>>>,
}

/// `[p1,p2,p3]` with the root of `p1` mod `p3` used for the residue.
pub struct RedeiOutcome {
    pub value: i32,
    pub certificate: RedeiCertificate,
    pub p3: BigInt,
    pub s1: BigInt,
}

fn norm_hits(q: &QuadInt, avoid: &[BigInt]) -> bool {
    let n = q.norm();
    avoid.iter().any(|p| !p.is_zero() && (&n % p).is_zero())
}

impl Solver {
    pub fn new(budgets: Budgets, cache: Option<Arc<Cache>>) -> Self {
        Solver {
            budgets,
            cache,
            pairs: Mutex::default(),
            relatives: Mutex::default(),
        }
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn cache(&self) -> Option<&Arc<Cache>> {
        self.cache.as_ref()
    }

    fn z_key(&self) -> String {
        self.budgets.z.to_string()
    }

    fn both_key(&self) -> String {
        format!("z={};height={}", self.budgets.z, self.budgets.height)
    }

    fn persist(&self, kind: Kind, primes: &[&BigInt], extra: &str, budget: &str, v: Value) {
        if let Some(c) = &self.cache {
            if let Err(e) = c.put(kind, primes, extra, budget, v) {
                eprintln!("warning: cache write to {} failed: {e}", c.path().display());
            }
        }
    }

    fn cached(&self, kind: Kind, primes: &[&BigInt], extra: &str, budget: &str) -> Option<Value> {
        self.cache.as_ref()?.get(kind, primes, extra, budget)
    }

    /// The first [`SOLUTION_WINDOW`] solutions of `x² - p1y² = p2z²`.
    pub fn pair_solutions(
        &self,
        p1: &BigInt,
        p2: &BigInt,
    ) -> CoreResult<Arc<Vec<RationalConicSolution>>> {
        let key = (p1.clone(), p2.clone());
        if let Some(r) = self.pairs.lock().unwrap().get(&key) {
            return r.clone();
        }
        let r = self.pair_uncached(p1, p2);
        self.pairs.lock().unwrap().insert(key, r.clone());
        r
    }

    fn pair_uncached(
        &self,
        p1: &BigInt,
        p2: &BigInt,
    ) -> CoreResult<Arc<Vec<RationalConicSolution>>> {
        let budget = self.z_key();
        if let Some(v) = self.cached(Kind::LegendreEq, &[p1, p2], "", &budget) {
            match replay_pair(p1, p2, &v) {
                Ok(s) => return Ok(Arc::new(s)),
                Err(e) => eprintln!("warning: discarding cache entry for ({p1},{p2}): {e:#}"),
            }
        }
        let sols = conic::legendre_solutions(p1, p2, &[], &self.budgets.z, SOLUTION_WINDOW)?;
        let v = Value::Array(sols.iter().map(json::rational).collect());
        self.persist(Kind::LegendreEq, &[p1, p2], "", &budget, v);
        Ok(Arc::new(sols))
    }

    /// Relative conic solution for `(p1, p3, α)` avoiding primes above
    /// `avoid`. The search with `avoid` is the plain search filtered, so the
    /// unfiltered answer is reused whenever it is not itself avoided.
    pub fn relative(
        &self,
        p1: &BigInt,
        p3: &BigInt,
        alpha: &QuadInt,
        avoid: &[BigInt],
    ) -> CoreResult<RelativeConicSolution> {
        if !avoid.is_empty() {
            match self.relative(p1, p3, alpha, &[]) {
                Ok(s) if !norm_hits(&s.y, avoid) && !norm_hits(&s.z, avoid) => return Ok(s),
                Err(e @ (CoreError::BudgetExhausted(_) | CoreError::Precondition(_))) => {
                    return Err(e)
                }
                _ => {}
            }
        }
        let key = (p1.clone(), p3.clone(), alpha.clone(), avoid.to_vec());
        if let Some(r) = self.relatives.lock().unwrap().get(&key) {
            return r.clone();
        }
        let r = self.relative_uncached(p1, p3, alpha, avoid);
        self.relatives.lock().unwrap().insert(key, r.clone());
        r
    }

    fn relative_uncached(
        &self,
        p1: &BigInt,
        p3: &BigInt,
        alpha: &QuadInt,
        avoid: &[BigInt],
    ) -> CoreResult<RelativeConicSolution> {
        let avoid_s: Vec<String> = avoid.iter().map(|p| p.to_string()).collect();
        let extra = format!(
            "alpha={},{};avoid={}",
            alpha.a2,
            alpha.b2,
            avoid_s.join(",")
        );
        let budget = self.budgets.height.to_string();
        if let Some(v) = self.cached(Kind::RelativeConic, &[p1, p3], &extra, &budget) {
            let replay = json::relative_from(&v).and_then(|s| {
                conic::check_relative_solution(p1, p3, alpha, &s)?;
                if norm_hits(&s.y, avoid)
                    || norm_hits(&s.z, avoid)
                    || s.height > self.budgets.height
                {
                    anyhow::bail!("entry violates the avoid set or the height budget");
                }
                Ok(s)
            });
            match replay {
                Ok(s) => return Ok(s),
                Err(e) => {
                    eprintln!("warning: discarding cache entry for ({p1},{p3},{alpha}): {e:#}")
                }
            }
        }
        let opts = RelativeOptions {
            height_budget: self.budgets.height,
            ..RelativeOptions::default()
        };
        let s = conic::solve_relative_conic_with(p1, p3, alpha, avoid, &opts)?;
        self.persist(
            Kind::RelativeConic,
            &[p1, p3],
            &extra,
            &budget,
            json::relative(&s),
        );
        Ok(s)
    }

    pub fn redei(&self, p1: &BigInt, p2: &BigInt, p3: &BigInt) -> CoreResult<RedeiOutcome> {
        let bad = redei::triple_precondition(&[p1, p2, p3]);
        if !bad.is_empty() {
            return Err(CoreError::Precondition(bad));
        }
        let sols = self.pair_solutions(p1, p2)?;
        let (value, certificate) = redei::redei_symbol_from(p1, p2, p3, sols.to_vec())?;
        let s1 = arith::sqrt_mod(p1, p3)
            .ok_or_else(|| CoreError::Internal(format!("{p1} has no root mod {p3}")))?;
        Ok(RedeiOutcome {
            value,
            certificate,
            p3: p3.clone(),
            s1,
        })
    }

    pub fn redei_json(&self, o: &RedeiOutcome) -> Value {
        json::answer(
            o.value,
            json::redei_certificate(&o.p3, &o.certificate, &o.s1, &self.budgets.z),
        )
    }

    /// `{"symbol", "certificate"}` for `[p1,p2,p3]`, from the cache when a
    /// stored answer survives replay.
    pub fn redei_answer(&self, p1: &BigInt, p2: &BigInt, p3: &BigInt) -> Result<Value> {
        let budget = self.z_key();
        if let Some(v) = self.cached(Kind::Redei, &[p1, p2, p3], "", &budget) {
            match verify::replay_redei(&v)
                .and_then(|_| expect_primes(&v, &[p1, p2, p3], &self.budgets))
            {
                Ok(()) => return Ok(v),
                Err(e) => {
                    eprintln!("warning: discarding cached symbol for ({p1},{p2},{p3}): {e:#}")
                }
            }
        }
        let v = self.redei_json(&self.redei(p1, p2, p3)?);
        self.persist(Kind::Redei, &[p1, p2, p3], "", &budget, v.clone());
        Ok(v)
    }

    /// `K` for `(p1, p2, p3)` from the first Legendre solution, as
    /// `build_k` does.
    pub fn build_k(
        &self,
        p1: &BigInt,
        p2: &BigInt,
        p3: &BigInt,
        avoid: &[BigInt],
    ) -> CoreResult<KCertificate> {
        let rep = symbol4::validate_triple_with_budget([p1, p2, p3], &self.budgets.z);
        if !rep.passed() {
            return Err(failures_to_error(rep.failures));
        }
        let sol = self.pair_solutions(p1, p2)?[0].clone();
        let rel = self.relative(p1, p3, &sol.alpha, avoid)?;
        symbol4::assemble_k(p1, p2, p3, sol, rel)
    }

    pub fn symbol4(
        &self,
        p1: &BigInt,
        p2: &BigInt,
        p3: &BigInt,
        p4: &BigInt,
    ) -> CoreResult<SymbolResult> {
        let rep = symbol4::validate_quadruple_with_budget([p1, p2, p3, p4], &self.budgets.z);
        if !rep.passed() {
            return Err(failures_to_error(rep.failures));
        }
        let k = self.build_k(p1, p2, p3, std::slice::from_ref(p4))?;
        symbol4::symbol4_from_certificate(k, p4, &self.budgets.z)
    }

    pub fn symbol4_json(&self, r: &SymbolResult, p4: &BigInt) -> Value {
        json::answer(r.value, json::symbol4_certificate(r, p4, &self.budgets))
    }

    pub fn symbol4_answer(
        &self,
        p1: &BigInt,
        p2: &BigInt,
        p3: &BigInt,
        p4: &BigInt,
    ) -> Result<Value> {
        let budget = self.both_key();
        let ps = [p1, p2, p3, p4];
        if let Some(v) = self.cached(Kind::Symbol4, &ps, "", &budget) {
            match verify::replay_symbol4(&v).and_then(|_| expect_primes(&v, &ps, &self.budgets)) {
                Ok(()) => return Ok(v),
                Err(e) => {
                    eprintln!("warning: discarding cached symbol for ({p1},{p2},{p3},{p4}): {e:#}")
                }
            }
        }
        let v = self.symbol4_json(&self.symbol4(p1, p2, p3, p4)?, p4);
        self.persist(Kind::Symbol4, &ps, "", &budget, v.clone());
        Ok(v)
    }
}

fn replay_pair(p1: &BigInt, p2: &BigInt, v: &Value) -> Result<Vec<RationalConicSolution>> {
    let arr = v
        .as_array()
        .filter(|a| !a.is_empty())
        .ok_or_else(|| anyhow::anyhow!("no solutions"))?;
    let sols = arr
        .iter()
        .map(json::rational_from)
        .collect::<Result<Vec<_>>>()?;
    for s in &sols {
        conic::check_rational_solution(p1, p2, s)?;
    }
    Ok(sols)
}

/// The answer is about `ps` and was computed under `budgets`.
fn expect_primes(v: &Value, ps: &[&BigInt], budgets: &Budgets) -> Result<()> {
    let cert = json::field(v, "certificate")?;
    let got = json::primes_from(cert, ps.len())?;
    if got.iter().zip(ps).any(|(a, b)| a != *b) {
        return Err(Mismatch(format!("certificate is for {}", cert["primes"])).into());
    }
    let b = json::field(cert, "budget")?;
    let z_ok = json::int_field(b, "z")? == budgets.z;
    let h_ok = ps.len() != 4 || b.get("height").and_then(Value::as_u64) == Some(budgets.height);
    if !z_ok || !h_ok {
        return Err(Mismatch(format!("certificate budget {}", json!(cert["budget"]))).into());
    }
    Ok(())
}
