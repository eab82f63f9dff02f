//! Rate-function algebra: the DSL, the composite rate `M_K`, right-inversion
//! and rate prediction, region membership, and the growth-condition checks.

pub(crate) mod dsl;

pub mod checks;
pub mod rate;
pub mod region;

use thiserror::Error;

pub use checks::{condition_13_check, exp_growth_check, regular_growth_check};
pub use rate::{compose_mk, predicted_rate, right_inverse, RateFunction};
pub use region::{region_contains, RegionSpec};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RateError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("semantic error at byte {pos}: {msg}")]
    Semantic { pos: usize, msg: String },
    #[error("precondition violated: {msg}")]
    Precondition { msg: String },
    #[error("rate stays below t = {t} up to the search ceiling {ceiling:e}; no right-inverse")]
    UnboundedSearch { t: f64, ceiling: f64 },
    #[error("degenerate rate: c*t = {ct} does not exceed M_K(0) = {mk0}, the inverse is 0")]
    DegenerateRate { ct: f64, mk0: f64 },
}
