//! Numerical toolkit for the rate calculus behind quantified Tauberian decay
//! estimates, together with evaluators and certification harnesses for an
//! explicitly constructed extremal function sequence.
//!
//! The crate is organised in three layers:
//!
//! * [`ratefun`]: a small DSL for positive non-decreasing rate functions,
//!   the composite rate `M_K(s) = M(s)(log(1+s) + log(1+K(s)))`, its minimal
//!   right-inverse, decay-rate prediction, region membership tests and
//!   grid-based growth checks.
//! * [`construction`]: overflow-safe evaluators for the extremal sequence
//!   `f_m` (factor functions, Fourier integrand, adaptive and FFT quadrature,
//!   analytic continuation of the transform, derivative-product suprema),
//!   built on a log-domain complex representation.
//! * [`verify`]: grid certifications of the quantitative properties of the
//!   sequence and of the witness parameter choices, producing deterministic,
//!   machine-readable [`report::VerificationReport`] values.

// Negated comparisons like `!(tol >= 1e-12)` are deliberate: they reject NaN
// along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod construction;
pub mod ratefun;
pub mod report;
pub mod verify;

pub(crate) mod util;

pub use construction::index::{index_for, k_m, ConstructionIndex};
pub use construction::logcomplex::LogComplex;
pub use construction::quadrature::{QuadMethod, QuadratureResult};
pub use ratefun::rate::RateFunction;
pub use ratefun::region::RegionSpec;
pub use report::{GridSpec, Spacing, VerificationReport};
