//! Corpus generation over prime tuples.
//!
//! Candidates are enumerated sequentially in a fixed order with cheap
//! filters, then evaluated in parallel chunks whose results are written in
//! candidate order, so the output depends only on the parameters and never
//! on the number of workers.

use std::io::Write;

use anyhow::Result;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use resym_core::arith;
use resym_core::quadfield;
use resym_core::Error as CoreError;

use crate::json;
use crate::outcome::Usage;
use crate::solver::Solver;

/// Largest accepted `--bound`.
pub const MAX_BOUND: u64 = 1_000_000;

const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    Triple,
    Quad,
}

impl ScanKind {
    fn label(self) -> &'static str {
        match self {
            ScanKind::Triple => "triple",
            ScanKind::Quad => "quad",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub kind: ScanKind,
    /// Every entry is below `bound`.
    pub bound: u64,
    pub p1: Option<u64>,
    pub p2: Option<u64>,
    pub p3: Option<u64>,
    /// Stop after this many output lines.
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub candidates: usize,
    pub emitted: usize,
    pub ok: usize,
    pub exhausted: usize,
}

/// Primes `p ≡ 1 (mod 4)` with `p < bound`.
pub fn primes_1mod4(bound: u64) -> Vec<u64> {
    (5..bound)
        .step_by(4)
        .filter(|&p| arith::is_prime_u64(p))
        .collect()
}

fn qr(a: u64, b: u64) -> bool {
    arith::legendre(&BigInt::from(a), &BigInt::from(b)) == 1
}

/// Depth-first enumeration of tuples, one list per slot, pruned by a
/// predicate on prefixes.
struct Tuples<F> {
    lists: Vec<Vec<u64>>,
    ok: F,
    stack: Vec<usize>,
    started: bool,
}

impl<F: FnMut(&[u64]) -> bool> Iterator for Tuples<F> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.started {
            *self.stack.last_mut()? += 1;
        } else {
            self.started = true;
            if self.lists.is_empty() {
                return None;
            }
            self.stack.push(0);
        }
        loop {
            let d = self.stack.len() - 1;
            if self.stack[d] >= self.lists[d].len() {
                self.stack.pop();
                *self.stack.last_mut()? += 1;
                continue;
            }
            let prefix: Vec<u64> = self
                .stack
                .iter()
                .enumerate()
                .map(|(i, &j)| self.lists[i][j])
                .collect();
            if !(self.ok)(&prefix) {
                self.stack[d] += 1;
                continue;
            }
            if d + 1 == self.lists.len() {
                return Some(prefix);
            }
            self.stack.push(0);
        }
    }
}

/// Triples `p1 < p2 < p3` with pairwise residues, ordered by `p3`, then
/// `p2`, then `p1`, so a larger bound extends a smaller one.
fn triple_candidates(cfg: &ScanConfig) -> impl Iterator<Item = Vec<u64>> {
    let ps = primes_1mod4(cfg.bound);
    let fixed = [cfg.p3, cfg.p2, cfg.p1];
    let lists = fixed
        .iter()
        .map(|f| {
            ps.iter()
                .copied()
                .filter(|p| f.is_none_or(|v| v == *p))
                .collect()
        })
        .collect();
    let ok = |pre: &[u64]| {
        let n = pre.len();
        n == 1 || (pre[n - 1] < pre[n - 2] && pre[..n - 1].iter().all(|&q| qr(pre[n - 1], q)))
    };
    Tuples {
        lists,
        ok,
        stack: Vec::new(),
        started: false,
    }
    .map(|mut t| {
        t.reverse();
        t
    })
}

/// Quadruples in lexicographic order: `p1 ≡ 5 (mod 8)` with `h(Q(√p1)) = 1`,
/// all entries distinct with pairwise residues.
fn quad_candidates(cfg: &ScanConfig) -> impl Iterator<Item = Vec<u64>> {
    let ps = primes_1mod4(cfg.bound);
    let p1s: Vec<u64> = ps
        .iter()
        .copied()
        .filter(|&p| p % 8 == 5 && cfg.p1.is_none_or(|v| v == p))
        .filter(|&p| quadfield::class_number_is_one(&BigInt::from(p)).unwrap_or(false))
        .collect();
    let pick = |f: Option<u64>| -> Vec<u64> {
        ps.iter()
            .copied()
            .filter(|p| f.is_none_or(|v| v == *p))
            .collect()
    };
    let lists = vec![p1s, pick(cfg.p2), pick(cfg.p3), pick(None)];
    let ok = |pre: &[u64]| {
        let (last, rest) = pre.split_last().expect("nonempty prefix");
        rest.iter().all(|&q| q != *last && qr(*last, q))
    };
    Tuples {
        lists,
        ok,
        stack: Vec::new(),
        started: false,
    }
}

fn big_all(t: &[u64]) -> Vec<BigInt> {
    t.iter().map(|&p| BigInt::from(p)).collect()
}

fn line(kind: ScanKind, t: &[BigInt], status: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind.label()));
    m.insert("primes".into(), json::primes(&t.iter().collect::<Vec<_>>()));
    m.insert("status".into(), json!(status));
    m
}

fn ok_line(kind: ScanKind, t: &[BigInt], answer: Value) -> Value {
    let mut m = line(kind, t, "ok");
    if let Value::Object(a) = answer {
        m.extend(a);
    }
    Value::Object(m)
}

fn exhausted_line(kind: ScanKind, t: &[BigInt], solver: &Solver, detail: &CoreError) -> Value {
    let mut m = line(kind, t, "budget_exhausted");
    let b = solver.budgets();
    let budget = match kind {
        ScanKind::Triple => json!({ "z": json::dec(&b.z) }),
        ScanKind::Quad => b.to_json(),
    };
    m.insert("budget".into(), budget);
    m.insert("detail".into(), json!(detail.to_string()));
    Value::Object(m)
}

fn core_error(e: &anyhow::Error) -> Option<&CoreError> {
    e.chain().find_map(|c| c.downcast_ref::<CoreError>())
}

/// `None`: the tuple does not qualify. Internal errors abort the scan.
fn evaluate(kind: ScanKind, t: &[u64], solver: &Solver) -> Result<Option<Value>> {
    let b = big_all(t);
    let outcome = match kind {
        ScanKind::Triple => solver.redei_answer(&b[0], &b[1], &b[2]),
        ScanKind::Quad => {
            // triple symbols through the memo first: most quadruples stop here
            for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                match solver.redei(&b[i], &b[j], &b[k]) {
                    Ok(o) if o.value == 1 => {}
                    Ok(_) | Err(CoreError::Precondition(_)) => return Ok(None),
                    Err(e @ CoreError::BudgetExhausted(_)) => {
                        return Ok(Some(exhausted_line(kind, &b, solver, &e)))
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            solver.symbol4_answer(&b[0], &b[1], &b[2], &b[3])
        }
    };
    match outcome {
        Ok(answer) => Ok(Some(ok_line(kind, &b, answer))),
        Err(e) => match core_error(&e) {
            Some(CoreError::Precondition(_)) => Ok(None),
            Some(ce @ CoreError::BudgetExhausted(_)) => {
                Ok(Some(exhausted_line(kind, &b, solver, ce)))
            }
            _ => Err(e),
        },
    }
}

/// Runs a scan on the current rayon pool, writing one JSON line per
/// qualifying tuple.
pub fn scan(cfg: &ScanConfig, solver: &Solver, out: &mut dyn Write) -> Result<ScanSummary> {
    if cfg.bound > MAX_BOUND {
        return Err(Usage(format!(
            "--bound {} exceeds the ceiling {MAX_BOUND}",
            cfg.bound
        ))
        .into());
    }
    let mut cands: Box<dyn Iterator<Item = Vec<u64>>> = match cfg.kind {
        ScanKind::Triple => Box::new(triple_candidates(cfg)),
        ScanKind::Quad => Box::new(quad_candidates(cfg)),
    };
    let limit = cfg.limit.unwrap_or(usize::MAX);
    let mut sum = ScanSummary::default();
    while sum.emitted < limit {
        let chunk: Vec<Vec<u64>> = cands.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        sum.candidates += chunk.len();
        let results: Vec<Result<Option<Value>>> = chunk
            .par_iter()
            .map(|t| evaluate(cfg.kind, t, solver))
            .collect();
        for r in results {
            if sum.emitted >= limit {
                break;
            }
            if let Some(v) = r? {
                if v["status"] == "ok" {
                    sum.ok += 1;
                } else {
                    sum.exhausted += 1;
                }
                writeln!(out, "{v}")?;
                sum.emitted += 1;
            }
        }
    }
    out.flush()?;
    Ok(sum)
}
