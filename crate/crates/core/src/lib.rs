//! Constructive computation of the Legendre symbol, the Rédei triple symbol
//! and the fourth multiple residue symbol `[p1,p2,p3,p4]`, together with the
//! mod-2 Magnus/Fox machinery and the unipotent groups `N_n(F_2)`.
//!
//! Symbols are decided by residue characters of explicit Kummer generators;
//! every solver output carries a certificate that can be re-checked by an
//! independent checker.

pub mod arith;
pub mod biquad;
pub mod conic;
pub mod magnus;
pub mod nilgroup;
pub mod quadfield;
pub mod redei;
pub mod symbol4;

mod error;

pub use error::{Error, Result};

use num_bigint::BigInt;

/// Shorthand used throughout the crate and its tests.
pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
