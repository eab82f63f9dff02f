//! Rate functions: immutable positive non-decreasing functions evaluable in
//! linear and log domain, the composite rate `M_K`, its minimal
//! right-inverse, and the predicted decay rate.

use std::sync::Arc;

use super::dsl::{self, Expr};
use super::RateError;

/// Bracket expansion stops here; a rate still below the target at this point
/// is reported as bounded below the target.
pub const SEARCH_CEILING: f64 = 1e300;

/// Relative width at which bisection stops.
pub const INVERSE_REL_WIDTH: f64 = 1e-12;

#[derive(Clone, Debug)]
enum Kind {
    Expr(Expr),
    /// `M_K(s) = M(s) (log(1+s) + log(1+K(s)))`
    ComposeMk {
        m: Arc<RateFunction>,
        k: Arc<RateFunction>,
    },
}

/// A positive non-decreasing continuous function on `[0, inf)`.
#[derive(Clone, Debug)]
pub struct RateFunction {
    source: String,
    kind: Kind,
    strictly_increasing: bool,
}

impl RateFunction {
    /// Parses a DSL expression. Errors carry the byte position.
    pub fn parse(dsl_src: &str) -> Result<Self, RateError> {
        let expr = dsl::parse(dsl_src)?;
        let strictly_increasing = expr.strictly_increasing();
        Ok(RateFunction {
            source: dsl_src.trim().to_string(),
            kind: Kind::Expr(expr),
            strictly_increasing,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.strictly_increasing
    }

    /// Linear-domain value; may overflow to infinity for fast-growing rates.
    pub fn eval(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Expr(e) => e.eval(s),
            Kind::ComposeMk { m, .. } => m.eval(s) * self.mk_inner(s),
        }
    }

    /// Natural log of the value; finite whenever the log itself is in range.
    pub fn eval_log(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Expr(e) => e.eval_log(s),
            Kind::ComposeMk { m, .. } => m.eval_log(s) + self.mk_inner(s).ln(),
        }
    }

    /// `log(1+s) + log(1+K(s))`, the slowly-varying part of `M_K`. The second
    /// term is `softplus` of `log K(s)`, which survives overflow of `K`.
    fn mk_inner(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Expr(_) => unreachable!("inner factor only exists for composites"),
            Kind::ComposeMk { k, .. } => {
                let lk = k.eval_log(s);
                let softplus = if lk > 0.0 {
                    lk + (-lk).exp().ln_1p()
                } else {
                    lk.exp().ln_1p()
                };
                s.ln_1p() + softplus
            }
        }
    }
}

/// Builds `M_K` from `M` and `K` pointwise; always strictly increasing since
/// `log(1+s)` is and both factors stay positive.
pub fn compose_mk(m: &RateFunction, k: &RateFunction) -> RateFunction {
    RateFunction {
        source: format!("compose_mk({},{})", m.source, k.source),
        kind: Kind::ComposeMk {
            m: Arc::new(m.clone()),
            k: Arc::new(k.clone()),
        },
        strictly_increasing: true,
    }
}

/// Minimal right-inverse: the smallest `s >= 0` with `f(s) >= t`, by
/// geometric bracket expansion and bisection to relative width 1e-12.
/// Returns 0 when `t <= f(0)`.
pub fn right_inverse(f: &RateFunction, t: f64) -> Result<f64, RateError> {
    if !(t > 0.0) {
        return Err(RateError::Precondition {
            msg: format!("t = {t} must be positive"),
        });
    }
    let lt = t.ln();
    if f.eval_log(0.0) >= lt {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while f.eval_log(hi) < lt {
        lo = hi;
        hi *= 2.0;
        if hi > SEARCH_CEILING {
            return Err(RateError::UnboundedSearch {
                t,
                ceiling: SEARCH_CEILING,
            });
        }
    }
    for _ in 0..4000 {
        if hi - lo <= INVERSE_REL_WIDTH * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.eval_log(mid) >= lt {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Predicted decay rate `1 / M_K^-1(c t)`; degenerate when `c t` is at or
/// below `M_K(0)` and the inverse collapses to 0.
pub fn predicted_rate(
    m: &RateFunction,
    k: &RateFunction,
    c: f64,
    t: f64,
) -> Result<f64, RateError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(RateError::Precondition {
            msg: format!("c = {c} must lie in (0, 1]"),
        });
    }
    if !(t > 0.0) {
        return Err(RateError::Precondition {
            msg: format!("t = {t} must be positive"),
        });
    }
    let mk = compose_mk(m, k);
    let ct = c * t;
    let mk0 = mk.eval(0.0);
    if ct <= mk0 {
        return Err(RateError::DegenerateRate { ct, mk0 });
    }
    let s = right_inverse(&mk, ct)?;
    Ok(1.0 / s)
}
