//! Log-domain evaluators for the factor functions of the extremal sequence:
//! the fixed rational factor `F`, the scale factors `G_m` and `Q_m`, the
//! high-power factor `H_m = Q_m^(2^m)`, the Fourier integrand `Phi_m`, and
//! the analytically continued transform. All evaluation happens in
//! (log-magnitude, phase) form; the rewrite that matters numerically is
//! `log(1 + z^m) = m log z + log(1 + z^-m)` for `|z| > 1`, realised without
//! cancellation by [`LogComplex::mobius_ratio`].

use std::f64::consts::PI;

use num_complex::Complex64;

use super::logcomplex::LogComplex;
use super::EvalError;

/// Evaluation closer than this to a pole reports an error instead of noise.
pub const POLE_GUARD: f64 = 1e-8;

/// Validates the subsequence parameter: even, at least 2, small enough that
/// `2^m` fits the integer power path.
pub(crate) fn check_m(m: u32) -> Result<(), EvalError> {
    if m < 2 || !m.is_multiple_of(2) || m > 62 {
        return Err(EvalError::UnsupportedM { m });
    }
    Ok(())
}

/// Distance from `z` to the nearest point of the family `R e^(i(2j+1)pi/m)`.
fn root_family_distance(z: Complex64, radius: f64, m: u32) -> f64 {
    let r = z.re.hypot(z.im);
    let theta = z.im.atan2(z.re);
    let mf = m as f64;
    let jc = ((theta * mf / PI - 1.0) / 2.0).round() as i64;
    let mut best = f64::INFINITY;
    for dj in -1..=1 {
        let ang = (2 * (jc + dj) + 1) as f64 * PI / mf;
        let d2 = r * r + radius * radius - 2.0 * r * radius * (theta - ang).cos();
        best = best.min(d2.max(0.0).sqrt());
    }
    best
}

fn log_pow(z: Complex64, n: i64) -> LogComplex {
    LogComplex::from_complex(z).powi(n)
}

/// `F(z) = ((z^2 - 625) / (1 + z^2))^4`, as four times the log of the
/// quotient. Poles at `z = +-i`.
pub fn f_factor_eval(lambda: Complex64) -> Result<LogComplex, EvalError> {
    if root_family_distance(lambda, 1.0, 2) < POLE_GUARD {
        return Err(EvalError::near_pole("F", lambda));
    }
    let z2 = log_pow(lambda, 2);
    let num = z2 + LogComplex::from_real(-625.0);
    let den = LogComplex::ONE + z2;
    Ok((num / den).powi(4))
}

/// `G_m(z) = z^m / (25^m + z^m) = w/(1+w)` with `w = (z/25)^m`. Poles at
/// `25 e^(i(2j+1)pi/m)`.
pub fn g_eval(m: u32, lambda: Complex64) -> Result<LogComplex, EvalError> {
    check_m(m)?;
    if root_family_distance(lambda, 25.0, m) < POLE_GUARD {
        return Err(EvalError::near_pole("G_m", lambda));
    }
    let w = log_pow(lambda / 25.0, m as i64);
    Ok(w.mobius_ratio())
}

/// `Q_m(z) = z^m / (1 + z^m)`. Poles at `e^(i(2j+1)pi/m)`.
pub fn q_eval(m: u32, lambda: Complex64) -> Result<LogComplex, EvalError> {
    check_m(m)?;
    if root_family_distance(lambda, 1.0, m) < POLE_GUARD {
        return Err(EvalError::near_pole("Q_m", lambda));
    }
    Ok(log_pow(lambda, m as i64).mobius_ratio())
}

/// `H_m(z) = z^(m 2^m) / (1 + z^m)^(2^m) = Q_m(z)^(2^m)`.
pub fn h_eval(m: u32, lambda: Complex64) -> Result<LogComplex, EvalError> {
    let q = q_eval(m, lambda).map_err(|e| e.rename_factor("H_m"))?;
    Ok(q.powi(1i64 << m))
}

/// Fourier-side integrand `Phi_m(s) = F(s) G_m(s) H_m(s) / (1 + s^4)`.
/// On top of the factor poles, `1 + s^4` vanishes at `e^(i(2j+1)pi/4)`.
pub fn phi_eval(m: u32, s: Complex64) -> Result<LogComplex, EvalError> {
    check_m(m)?;
    if root_family_distance(s, 1.0, 4) < POLE_GUARD {
        return Err(EvalError::near_pole("1+s^4", s));
    }
    let f = f_factor_eval(s)?;
    let g = g_eval(m, s)?;
    let h = h_eval(m, s)?;
    let ln_den = log_pow(s, 4).ln_1p();
    Ok(f * g * h * LogComplex::new(-ln_den.re, -ln_den.im))
}

/// Half-width of the vertical strip on which the transform continues
/// analytically: the nearest pole families are the `m`-th roots of `-1`
/// (distance `sin(pi/m)`) and the quartic denominator (distance
/// `sin(pi/4)`).
pub fn strip_half_width(m: u32) -> f64 {
    (PI / m as f64).sin().min((PI / 4.0).sin())
}

/// Analytic continuation of the transform, `fhat_m(lambda) = Phi_m(-i lambda)`,
/// valid on `|Re lambda| < strip_half_width(m)`.
pub fn transform_eval(m: u32, lambda: Complex64) -> Result<LogComplex, EvalError> {
    check_m(m)?;
    let w = strip_half_width(m);
    if lambda.re.abs() >= w - POLE_GUARD {
        let family = if (PI / m as f64).sin() <= (PI / 4.0).sin() {
            "m-th roots of -1 (factors G_m/H_m)"
        } else {
            "quartic denominator roots"
        };
        return Err(EvalError::OutOfStrip {
            re: lambda.re,
            half_width: w,
            family,
        });
    }
    phi_eval(m, Complex64::new(lambda.im, -lambda.re))
}

// ---------------------------------------------------------------------------
// Real-axis fast paths used by the quadrature engine and the derivative
// supremum. On the real axis every factor is nonnegative and pole-free.
// ---------------------------------------------------------------------------

/// Stable `ln(x^m/(c^m + x^m))` given `x = m ln(s/c)`.
fn ln_sigmoid(x: f64) -> f64 {
    if x <= 0.0 {
        x - x.exp().ln_1p()
    } else {
        -(-x).exp().ln_1p()
    }
}

/// `Phi_m(s)` for real `s >= 0` as a plain double (underflows to zero for
/// tiny `s`, which is the correct limit).
pub(crate) fn phi_real(m: u32, s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    if s == 0.0 {
        return 0.0;
    }
    let s2 = s * s;
    let ln_f = 4.0 * ((s2 - 625.0).abs().ln() - s2.ln_1p());
    if ln_f == f64::NEG_INFINITY {
        return 0.0; // the zero at s = 25
    }
    let mf = m as f64;
    let ln_g = ln_sigmoid(mf * (s / 25.0).ln());
    let ln_h = (1u64 << m) as f64 * ln_sigmoid(mf * s.ln());
    (ln_f + ln_g + ln_h - (s2 * s2).ln_1p()).exp()
}

/// Values and first two derivatives of the three factors at real `s >= 0`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FactorDerivs {
    /// `[F, F', F'']`
    pub f: [f64; 3],
    /// `[G_m, G_m', G_m'']`
    pub g: [f64; 3],
    /// `[H_m, H_m', H_m'']`
    pub h: [f64; 3],
}

/// Logistic value and the symmetric kernel `e^x/(1+e^x)^2`.
fn sigmoid_pair(x: f64) -> (f64, f64) {
    let e = (-x.abs()).exp();
    let sig = if x >= 0.0 {
        1.0 / (1.0 + e)
    } else {
        e / (1.0 + e)
    };
    let sig2 = e / ((1.0 + e) * (1.0 + e));
    (sig, sig2)
}

/// Closed-form quotient-rule derivatives on the factored representations.
/// With `u = (s/c)^m` one has `G = u/(1+u)`, `G' = (m/s) u/(1+u)^2` and
/// `G'' = (m/s^2) u/(1+u)^2 ((m-1) - 2m u/(1+u))`; `H = Q^(2^m)` follows by
/// the chain rule on the same pieces.
pub(crate) fn factor_derivs(m: u32, s: f64) -> FactorDerivs {
    debug_assert!(s >= 0.0);
    let mf = m as f64;
    let s2 = s * s;
    let q = (s2 - 625.0) / (1.0 + s2);
    let qd = 1252.0 * s / ((1.0 + s2) * (1.0 + s2));
    let qdd = 1252.0 * (1.0 - 3.0 * s2) / ((1.0 + s2) * (1.0 + s2) * (1.0 + s2));
    let f = [
        q.powi(4),
        4.0 * q.powi(3) * qd,
        12.0 * q * q * qd * qd + 4.0 * q.powi(3) * qdd,
    ];

    if s == 0.0 {
        let gdd0 = if m == 2 { 2.0 / 625.0 } else { 0.0 };
        return FactorDerivs {
            f,
            g: [0.0, 0.0, gdd0],
            h: [0.0, 0.0, 0.0],
        };
    }

    let xg = mf * (s / 25.0).ln();
    let (gs, gs2) = sigmoid_pair(xg);
    let g = [
        gs,
        (mf / s) * gs2,
        (mf * gs2 / s2) * ((mf - 1.0) - 2.0 * mf * gs),
    ];

    let xq = mf * s.ln();
    let (qs, qs2) = sigmoid_pair(xq);
    let ln_q = ln_sigmoid(xq);
    let qp = (mf / s) * qs2;
    let qpp = (mf * qs2 / s2) * ((mf - 1.0) - 2.0 * mf * qs);
    let p = (1u64 << m) as f64;
    let hv = (p * ln_q).exp();
    let hp = p * ((p - 1.0) * ln_q).exp() * qp;
    let hpp =
        p * (p - 1.0) * ((p - 2.0) * ln_q).exp() * qp * qp + p * ((p - 1.0) * ln_q).exp() * qpp;
    FactorDerivs {
        f,
        g,
        h: [hv, hp, hpp],
    }
}
