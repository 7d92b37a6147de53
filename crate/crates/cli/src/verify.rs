//! Replay of certificates and corpus verification.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use anyhow::{bail, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use resym_core::arith::{self, modp};
use resym_core::magnus;
use resym_core::nilgroup;
use resym_core::redei::{self, RedeiCertificate};
use resym_core::symbol4::{self, SymbolResult};
use resym_core::Error as CoreError;

use crate::cache::Cache;
use crate::json::{self, Budgets};
use crate::outcome::Mismatch;
use crate::solver::Solver;

fn mismatch<T>(msg: impl Into<String>) -> Result<T> {
    Err(Mismatch(msg.into()).into())
}

fn symbol_of(v: &Value) -> Result<i32> {
    match json::field(v, "symbol")?.as_i64() {
        Some(s @ (-1 | 1)) => Ok(s as i32),
        _ => mismatch(format!("symbol {} is not ±1", v["symbol"])),
    }
}

fn expect_kind(cert: &Value, kind: &str) -> Result<()> {
    if cert.get("kind").and_then(Value::as_str) != Some(kind) {
        return mismatch(format!(
            "expected a {kind} certificate, got kind {}",
            cert["kind"]
        ));
    }
    Ok(())
}

/// Checks a `redei` answer from its certificate alone and returns the
/// symbol.
pub fn replay_redei(v: &Value) -> Result<i32> {
    let symbol = symbol_of(v)?;
    let cert = json::field(v, "certificate")?;
    expect_kind(cert, "redei")?;
    let ps = json::primes_from(cert, 3)?;
    let (p1, p2, p3) = (&ps[0], &ps[1], &ps[2]);
    let z_budget = json::int_field(json::field(cert, "budget")?, "z")?;
    let sol = json::rational_from(json::field(cert, "solution")?)?;
    let s1 = json::int_field(cert, "sqrt_p1_mod_p3")?;
    let bad = redei::triple_precondition(&[p1, p2, p3]);
    if !bad.is_empty() {
        return mismatch(format!("triple fails {}", bad.join(", ")));
    }
    resym_core::conic::check_rational_solution(p1, p2, &sol)?;
    if sol.z.abs() > z_budget {
        return mismatch(format!(
            "z = {} exceeds the recorded budget {z_budget}",
            sol.z
        ));
    }
    if !modp(&(&s1 * &s1 - p1), p3).is_zero() {
        return mismatch(format!("{s1}² ≢ {p1} (mod {p3})"));
    }
    if (&sol.z % p3).is_zero() {
        return mismatch(format!("z = {} vanishes mod {p3}", sol.z));
    }
    let c1 = redei::alpha_character(&sol, &s1, p3);
    let c2 = redei::alpha_character(&sol, &(p3 - &s1), p3);
    if c1 != c2 || c1 != symbol {
        return mismatch(format!(
            "residue characters {c1}, {c2} against symbol {symbol}"
        ));
    }
    let rc = RedeiCertificate {
        p1: p1.clone(),
        p2: p2.clone(),
        alpha: sol.alpha.clone(),
        solution: sol,
    };
    if json::redei_certificate(p3, &rc, &s1, &z_budget) != *cert {
        return mismatch("certificate is not in canonical form");
    }
    Ok(symbol)
}

/// Rebuilds `K` from the recorded solutions, re-derives every generator and
/// character, and returns the evaluated symbol.
pub fn replay_symbol4(v: &Value) -> Result<SymbolResult> {
    let symbol = symbol_of(v)?;
    let cert = json::field(v, "certificate")?;
    expect_kind(cert, "symbol4")?;
    let ps = json::primes_from(cert, 4)?;
    let budgets = Budgets::from_json(json::field(cert, "budget")?)?;
    let parts = json::k_parts_from(json::field(cert, "k")?)?;
    if parts.primes[..] != ps[..3] {
        return mismatch("K certificate is for different primes");
    }
    if parts.legendre.z.abs() > budgets.z || parts.relative.height > budgets.height {
        return mismatch("recorded solutions exceed the recorded budgets");
    }
    let k = symbol4::assemble_k(&ps[0], &ps[1], &ps[2], parts.legendre, parts.relative)?;
    if k.thetas != parts.thetas || k.etas != parts.etas || k.h != parts.h {
        return mismatch("recorded generators differ from the ones derived from the solutions");
    }
    let r = symbol4::symbol4_from_certificate(k, &ps[3], &budgets.z)?;
    if r.value != symbol {
        return mismatch(format!(
            "characters {:?} give {}, recorded {symbol}",
            r.characters, r.value
        ));
    }
    if json::symbol4_certificate(&r, &ps[3], &budgets) != *cert {
        return mismatch("certificate is not in canonical form");
    }
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub lines: usize,
    pub ok: usize,
    pub exhausted: usize,
    pub reciprocity_checked: usize,
    pub tau_checked: usize,
    pub shuffle_checked: usize,
    pub shuffle_vacuous: usize,
    /// Shuffle instances skipped because a permuted symbol exhausted its
    /// budget.
    pub shuffle_unevaluated: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lines": self.lines,
            "ok": self.ok,
            "budget_exhausted": self.exhausted,
            "reciprocity_checked": self.reciprocity_checked,
            "tau_checked": self.tau_checked,
            "shuffle_checked": self.shuffle_checked,
            "shuffle_vacuous": self.shuffle_vacuous,
            "shuffle_unevaluated": self.shuffle_unevaluated,
            "failures": self.failures,
        })
    }
}

#[derive(Default)]
struct LineStats {
    ok: bool,
    exhausted: bool,
    reciprocity: bool,
    tau: bool,
    shuffle_checked: usize,
    shuffle_vacuous: usize,
    shuffle_unevaluated: usize,
}

/// One solver per budget pair found in the corpus, sharing the cache.
struct Solvers {
    cache: Option<Arc<Cache>>,
    map: Mutex<HashMap<String, Arc<Solver>>>,
}

impl Solvers {
    fn get(&self, b: &Budgets) -> Arc<Solver> {
        let key = format!("{};{}", b.z, b.height);
        let mut m = self.map.lock().unwrap();
        m.entry(key)
            .or_insert_with(|| Arc::new(Solver::new(b.clone(), self.cache.clone())))
            .clone()
    }
}

fn line_budgets(line: &Value) -> Result<Budgets> {
    let b = match line.get("certificate") {
        Some(c) => json::field(c, "budget")?,
        None => json::field(line, "budget")?,
    };
    Ok(Budgets {
        z: json::int_field(b, "z")?,
        height: b
            .get("height")
            .and_then(Value::as_u64)
            .unwrap_or(Budgets::default().height),
    })
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn expect_exhausted<T>(r: Result<T, CoreError>) -> Result<()> {
    match r {
        Err(CoreError::BudgetExhausted(_)) => Ok(()),
        Err(e) => mismatch(format!(
            "recorded as budget-exhausted, recomputation gives: {e}"
        )),
        Ok(_) => mismatch("recorded as budget-exhausted, recomputation succeeds"),
    }
}

fn answer_of(line: &Value) -> Result<Value> {
    Ok(
        json!({ "symbol": json::field(line, "symbol")?, "certificate": json::field(line, "certificate")? }),
    )
}

fn verify_triple(line: &Value, solvers: &Solvers) -> Result<LineStats> {
    let ps = json::primes_from(line, 3)?;
    let solver = solvers.get(&line_budgets(line)?);
    let mut st = LineStats::default();
    match line.get("status").and_then(Value::as_str) {
        Some("ok") => {
            let answer = answer_of(line)?;
            let symbol = replay_redei(&answer)?;
            if json::primes_from(&answer["certificate"], 3)? != ps {
                return mismatch("line primes differ from certificate primes");
            }
            let fresh = solver.redei_json(&solver.redei(&ps[0], &ps[1], &ps[2])?);
            if fresh != answer {
                return mismatch(format!("recomputed answer differs: {fresh}"));
            }
            for [i, j, k] in PERMUTATIONS {
                let v = solver.redei(&ps[i], &ps[j], &ps[k])?.value;
                if v != symbol {
                    return mismatch(format!(
                        "reciprocity: [{},{},{}] = {v} but [{},{},{}] = {symbol}",
                        ps[i], ps[j], ps[k], ps[0], ps[1], ps[2]
                    ));
                }
            }
            st.ok = true;
            st.reciprocity = true;
        }
        Some("budget_exhausted") => {
            expect_exhausted(solver.redei(&ps[0], &ps[1], &ps[2]))?;
            st.exhausted = true;
        }
        other => bail!("unknown status {other:?}"),
    }
    Ok(st)
}

/// Outcome of one shuffle instance on a quadruple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shuffle {
    /// Every permuted quadruple validated; the product of their symbols.
    Product(i32),
    /// Some permuted quadruple fails validation.
    Vacuous,
    /// Some permuted symbol could not be evaluated within the budgets.
    Unevaluated(String),
}

/// Shuffle products `∏_{H ∈ PSh(I,J)} [p_H, p4]` for the splits
/// `(1)|(2,3)` and `(1,2)|(3)`.
pub fn shuffle_products(solver: &Solver, ps: &[BigInt]) -> Result<Vec<Shuffle>> {
    let mut out = Vec::new();
    'split: for (a, b) in [(&[1u8][..], &[2u8, 3][..]), (&[1, 2][..], &[3][..])] {
        let hs = magnus::proper_shuffles(a, b);
        let quads: Vec<Vec<&BigInt>> = hs
            .iter()
            .map(|h| {
                h.iter()
                    .map(|&i| &ps[i as usize - 1])
                    .chain([&ps[3]])
                    .collect()
            })
            .collect();
        for q in &quads {
            let rep = symbol4::validate_quadruple_with_budget(
                [q[0], q[1], q[2], q[3]],
                &solver.budgets().z,
            );
            if !rep.passed() {
                out.push(Shuffle::Vacuous);
                continue 'split;
            }
        }
        let mut prod = 1;
        for q in &quads {
            match solver.symbol4(q[0], q[1], q[2], q[3]) {
                Ok(r) => prod *= r.value,
                Err(e @ CoreError::BudgetExhausted(_)) => {
                    out.push(Shuffle::Unevaluated(e.to_string()));
                    continue 'split;
                }
                Err(e) => return Err(e.into()),
            }
        }
        out.push(Shuffle::Product(prod));
    }
    Ok(out)
}

fn verify_quad(line: &Value, solvers: &Solvers) -> Result<LineStats> {
    let ps = json::primes_from(line, 4)?;
    let solver = solvers.get(&line_budgets(line)?);
    let mut st = LineStats::default();
    match line.get("status").and_then(Value::as_str) {
        Some("ok") => {
            let answer = answer_of(line)?;
            let r = replay_symbol4(&answer)?;
            if json::primes_from(&answer["certificate"], 4)? != ps {
                return mismatch("line primes differ from certificate primes");
            }
            let fresh = solver.symbol4(&ps[0], &ps[1], &ps[2], &ps[3])?;
            let fresh = solver.symbol4_json(&fresh, &ps[3]);
            if fresh != answer {
                return mismatch(format!("recomputed answer differs: {fresh}"));
            }
            let tau = nilgroup::verify_tau_action(&r.certificate)?;
            if !tau.passed() {
                return mismatch(format!("τ-action check failed: {tau}"));
            }
            for sh in shuffle_products(&solver, &ps)? {
                match sh {
                    Shuffle::Product(1) => st.shuffle_checked += 1,
                    Shuffle::Product(v) => return mismatch(format!("shuffle product is {v}")),
                    Shuffle::Vacuous => st.shuffle_vacuous += 1,
                    Shuffle::Unevaluated(_) => st.shuffle_unevaluated += 1,
                }
            }
            st.ok = true;
            st.tau = true;
        }
        Some("budget_exhausted") => {
            expect_exhausted(solver.symbol4(&ps[0], &ps[1], &ps[2], &ps[3]))?;
            st.exhausted = true;
        }
        other => bail!("unknown status {other:?}"),
    }
    Ok(st)
}

fn verify_line(text: &str, solvers: &Solvers) -> Result<LineStats> {
    let line: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return mismatch(format!("malformed JSON: {e}")),
    };
    match line.get("kind").and_then(Value::as_str) {
        Some("triple") => verify_triple(&line, solvers),
        Some("quad") => verify_quad(&line, solvers),
        other => mismatch(format!("unknown kind {other:?}")),
    }
}

/// Verifies every nonblank line of a corpus. Lines are independent and
/// checked in parallel; the report does not depend on the thread count.
pub fn verify_corpus(text: &str, cache: Option<Arc<Cache>>) -> VerifyReport {
    let solvers = Solvers {
        cache,
        map: Mutex::default(),
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let results: Vec<(usize, Result<LineStats>)> = lines
        .par_iter()
        .map(|&(n, l)| (n, verify_line(l, &solvers)))
        .collect();
    let mut rep = VerifyReport {
        lines: lines.len(),
        ..VerifyReport::default()
    };
    for (n, r) in results {
        match r {
            Ok(st) => {
                rep.ok += st.ok as usize;
                rep.exhausted += st.exhausted as usize;
                rep.reciprocity_checked += st.reciprocity as usize;
                rep.tau_checked += st.tau as usize;
                rep.shuffle_checked += st.shuffle_checked;
                rep.shuffle_vacuous += st.shuffle_vacuous;
                rep.shuffle_unevaluated += st.shuffle_unevaluated;
            }
            Err(e) => rep.failures.push(format!("line {n}: {e:#}")),
        }
    }
    rep
}

/// The Legendre symbol `(a/p)` with its Euler-criterion certificate.
pub fn legendre_answer(a: &BigInt, p: &BigInt) -> Result<Value, CoreError> {
    let mut bad = Vec::new();
    if !arith::is_prime(p) {
        bad.push(format!("p = {p} is prime"));
    } else if *p == BigInt::from(2) {
        bad.push("p is odd".to_string());
    }
    if !bad.is_empty() {
        return Err(CoreError::Precondition(bad));
    }
    let v = arith::legendre(a, p);
    let euler = modp(a, p).modpow(&((p - 1u32) / 2u32), p);
    if arith::legendre_euler(a, p) != v {
        return Err(CoreError::Internal(format!(
            "Euler criterion disagrees with reciprocity for ({a}/{p})"
        )));
    }
    let root = if v == 1 {
        arith::sqrt_mod(a, p).map(|s| json::dec(&s))
    } else {
        None
    };
    let cert = json!({
        "kind": "legendre",
        "a": json::dec(a),
        "p": json::dec(p),
        "euler_power": json::dec(&euler),
        "sqrt": root.unwrap_or(Value::Null),
    });
    Ok(json::answer(v, cert))
}
