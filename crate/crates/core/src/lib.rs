//! Ramanujan sums, Ramanujan expansions and their arithmetic transforms.
//!
//! The crate builds a factor table once and derives from it exact Ramanujan
//! sums, Eratosthenes/Wintner/Carmichael transforms, Lucht expansions with
//! η-decay checks, and the periodic-correlation counterexample machinery.

pub mod error;
pub mod expansions;
pub mod number_theory;
pub mod periodic_correlations;
pub mod ramanujan_sums;
pub mod report;
pub mod transforms;

pub use error::{Error, Result};
pub use number_theory::{build_factor_table, FactorTable};
pub use report::{Report, Verdict};
