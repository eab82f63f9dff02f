//! Complex values stored as (log-magnitude, phase) so that quantities whose
//! exponents exceed machine range (powers like `s^(m*2^m)`) remain exactly
//! representable. Zero is encoded as `log_mag = -inf` with phase 0.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul};

use num_complex::Complex64;

const TAU: f64 = 2.0 * PI;

/// Wraps a phase into `(-pi, pi]`.
pub(crate) fn wrap_phase(p: f64) -> f64 {
    if -PI < p && p <= PI {
        return p;
    }
    let mut x = p % TAU;
    if x > PI {
        x -= TAU;
    } else if x <= -PI {
        x += TAU;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    /// Log form of a plain complex value; `hypot` keeps the magnitude finite
    /// for components near the overflow threshold.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex::new(z.re.hypot(z.im).ln(), z.im.atan2(z.re))
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogComplex {
                log_mag: x.ln(),
                phase: 0.0,
            }
        } else {
            LogComplex {
                log_mag: (-x).ln(),
                phase: PI,
            }
        }
    }

    /// Converts back to a plain complex. Magnitudes beyond the double range
    /// saturate to infinity/zero; callers that may leave the range should
    /// inspect `log_mag` instead.
    pub fn to_complex(self) -> Complex64 {
        let r = self.log_mag.exp();
        Complex64::new(r * self.phase.cos(), r * self.phase.sin())
    }

    pub fn log_mag(self) -> f64 {
        self.log_mag
    }

    pub fn phase(self) -> f64 {
        self.phase
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn abs(self) -> f64 {
        self.log_mag.exp()
    }

    /// Integer power: exact scaling of the log-magnitude. The phase is
    /// reduced mod 2pi after multiplication, so its absolute accuracy
    /// degrades like `n * eps` for very large `n`.
    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return if n > 0 {
                Self::ZERO
            } else {
                LogComplex {
                    log_mag: f64::INFINITY,
                    phase: 0.0,
                }
            };
        }
        LogComplex::new(self.log_mag * n as f64, wrap_phase(self.phase * n as f64))
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    /// `ln(1 + self)` as a plain complex (`re = ln|1+self|`,
    /// `im = arg(1+self)`), accurate in absolute terms even when the result
    /// is far below the working magnitude. This is what keeps expressions
    /// like `z^m/(1+z^m)` fully accurate in log magnitude.
    pub fn ln_1p(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let r = self.log_mag.exp();
        let (sin, cos) = self.phase.sin_cos();
        let u = 2.0 * r * cos + r * r;
        Complex64::new(0.5 * u.ln_1p(), (r * sin).atan2(1.0 + r * cos))
    }

    /// The Moebius ratio `self / (1 + self)`, stable across the whole
    /// magnitude range: for `|self| > 1` it is computed as
    /// `1/(1 + self^-1)`, which realises the rewrite
    /// `log(1 + z^m) = m log z + log(1 + z^-m)` without cancellation.
    pub fn mobius_ratio(self) -> Self {
        if self.log_mag > 0.0 {
            let l = self.recip().ln_1p();
            LogComplex::new(-l.re, -l.im)
        } else {
            let l = self.ln_1p();
            LogComplex::new(self.log_mag - l.re, self.phase - l.im)
        }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        LogComplex::new(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

impl Add for LogComplex {
    type Output = LogComplex;

    /// Log-sum with the larger magnitude as pivot: `a + b = a(1 + b/a)`,
    /// `|b/a| <= 1`. This is what makes expressions like `log(1 + z^m)`
    /// cancellation-free for `|z| > 1`.
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let r = (small.log_mag - big.log_mag).exp();
        let dphi = wrap_phase(small.phase - big.phase);
        let u = 2.0 * r * dphi.cos() + r * r;
        if u <= -1.0 {
            // exact cancellation
            return Self::ZERO;
        }
        let wre = 1.0 + r * dphi.cos();
        let wim = r * dphi.sin();
        LogComplex::new(big.log_mag + 0.5 * u.ln_1p(), big.phase + wim.atan2(wre))
    }
}
