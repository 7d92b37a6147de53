//! Exit codes and the machine-readable failure report.

use std::fmt;

use resym_core::Error as CoreError;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;
pub const EXIT_IO: u8 = 5;

/// A recomputation or replay disagreed with recorded data.
#[derive(Debug)]
pub struct Mismatch(pub String);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for Mismatch {}

/// Malformed arguments.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(ce) = cause.downcast_ref::<CoreError>() {
            return match ce {
                CoreError::InvalidInput(_) => EXIT_USAGE,
                CoreError::Precondition(_) => EXIT_PRECONDITION,
                CoreError::BudgetExhausted(_) => EXIT_BUDGET,
                CoreError::Internal(_) => EXIT_VERIFICATION,
            };
        }
        if cause.is::<Usage>() {
            return EXIT_USAGE;
        }
        if cause.is::<Mismatch>() {
            return EXIT_VERIFICATION;
        }
        if cause.is::<std::io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_VERIFICATION
}

/// Stable identifier of a failed clause, e.g. `p1 mod 8` or
/// `legendre p2 p3`.
pub fn clause_id(statement: &str) -> String {
    let idx = |s: &str| -> Vec<String> {
        s.split(|c: char| !c.is_ascii_alphanumeric())
            .filter(|t| {
                t.len() >= 2 && t.starts_with('p') && t[1..].bytes().all(|b| b.is_ascii_digit())
            })
            .map(str::to_string)
            .collect()
    };
    let ps = idx(statement);
    if statement == "p1 ≡ 5 (mod 8)" {
        "p1 mod 8".into()
    } else if statement.ends_with("≡ 1 (mod 4)") && ps.len() == 1 {
        format!("{} mod 4", ps[0])
    } else if statement.ends_with(" is prime") {
        let name = statement.split(' ').next().unwrap_or(statement);
        format!("{name} prime")
    } else if statement.contains('≠') && ps.len() == 2 {
        format!("distinct {} {}", ps[0], ps[1])
    } else if statement.starts_with('(') && statement.ends_with(") = 1") && ps.len() == 2 {
        format!("legendre {} {}", ps[0], ps[1])
    } else if statement.starts_with('[') && statement.contains("evaluable") {
        format!("triple {} evaluable", ps[..3.min(ps.len())].join(" "))
    } else if statement.starts_with('[') && ps.len() == 3 {
        format!("triple {}", ps.join(" "))
    } else if statement.starts_with("h(Q(√p1))") {
        "class number p1".into()
    } else if statement.starts_with("hilbert") {
        "hilbert".into()
    } else {
        statement.to_string()
    }
}

/// `{"error":"precondition","failed":[{"clause":..,"statement":..}]}`.
pub fn precondition_report(failures: &[String]) -> Value {
    let failed: Vec<Value> = failures
        .iter()
        .map(|s| json!({ "clause": clause_id(s), "statement": s }))
        .collect();
    json!({ "error": "precondition", "failed": failed })
}

/// Validation failures that are only due to an exhausted triple-symbol
/// search are a budget problem, not a precondition one.
pub fn failures_to_error(failures: Vec<String>) -> CoreError {
    if !failures.is_empty()
        && failures
            .iter()
            .all(|f| f.contains("evaluable:") && f.contains("budget"))
    {
        CoreError::BudgetExhausted(failures.join("; "))
    } else {
        CoreError::Precondition(failures)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_ids() {
        assert_eq!(clause_id("p1 ≡ 5 (mod 8)"), "p1 mod 8");
        assert_eq!(clause_id("p3 ≡ 1 (mod 4)"), "p3 mod 4");
        assert_eq!(clause_id("p2 = 9 is prime"), "p2 prime");
        assert_eq!(clause_id("p1 ≠ p4"), "distinct p1 p4");
        assert_eq!(clause_id("(p2/p1) = 1"), "legendre p2 p1");
        assert_eq!(clause_id("[p1,p2,p4] = 1"), "triple p1 p2 p4");
        assert_eq!(clause_id("h(Q(√p1)) = 1"), "class number p1");
    }

    #[test]
    fn codes() {
        let e = anyhow::Error::new(CoreError::BudgetExhausted("x".into()));
        assert_eq!(exit_code(&e), EXIT_BUDGET);
        let e = anyhow::Error::new(std::io::Error::other("disk")).context("reading corpus");
        assert_eq!(exit_code(&e), EXIT_IO);
        assert_eq!(
            exit_code(&anyhow::Error::new(Mismatch("m".into()))),
            EXIT_VERIFICATION
        );
    }
}
