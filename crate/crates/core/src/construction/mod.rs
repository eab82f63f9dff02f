//! Overflow-safe numerical evaluation of the extremal function sequence: the
//! factor functions and their derivatives, the Fourier-side integrand, the
//! time-domain values by adaptive oscillatory quadrature and by FFT
//! discretisation, and the derivative-product supremum constant.

pub mod cm;
pub mod factors;
pub mod fft;
pub mod index;
pub mod logcomplex;
pub mod quadrature;

use thiserror::Error;

pub use cm::c_m_estimate;
pub use factors::{
    f_factor_eval, g_eval, h_eval, phi_eval, q_eval, strip_half_width, transform_eval, POLE_GUARD,
};
pub use fft::{f_eval_fft, FftParams, FftTimeGrid};
pub use index::{index_for, k_m, ConstructionIndex};
pub use logcomplex::LogComplex;
pub use quadrature::{f_deriv_eval, f_eval, scale_sequence, QuadMethod, QuadratureResult};

/// Pointwise evaluation failures of the factor functions.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("m = {m} unsupported: the construction is defined for even m in [2, 62]")]
    UnsupportedM { m: u32 },
    #[error("evaluation point ({re}, {im}) is within the guard distance of a pole of {factor}")]
    NearPole {
        factor: &'static str,
        re: f64,
        im: f64,
    },
    #[error("Re lambda = {re} outside the continuation strip |Re| < {half_width} (nearest pole family: {family})")]
    OutOfStrip {
        re: f64,
        half_width: f64,
        family: &'static str,
    },
}

impl EvalError {
    pub(crate) fn near_pole(factor: &'static str, z: num_complex::Complex64) -> Self {
        EvalError::NearPole {
            factor,
            re: z.re,
            im: z.im,
        }
    }

    pub(crate) fn rename_factor(self, factor: &'static str) -> Self {
        match self {
            EvalError::NearPole { re, im, .. } => EvalError::NearPole { factor, re, im },
            other => other,
        }
    }
}

/// Failures of the quadrature evaluators.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum QuadError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("tolerance {tol:e} below the supported floor 1e-12")]
    BadTolerance { tol: f64 },
    #[error("error estimate {estimate:e} still above tolerance {tol:e} after {nodes} integrand evaluations")]
    ToleranceNotMet { estimate: f64, tol: f64, nodes: u64 },
    #[error("incompatible grid parameters: {msg}")]
    IncompatibleGrid { msg: String },
    #[error("invalid parameter: {msg}")]
    BadParameter { msg: String },
    #[error(
        "closed-form derivative disagrees with finite difference at s = {s} ({formula} vs {fd})"
    )]
    DerivativeCrossCheck { s: f64, formula: f64, fd: f64 },
}
