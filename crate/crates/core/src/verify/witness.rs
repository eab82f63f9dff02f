//! Witness-bound evaluation for the quantified decay estimate: with
//! `k = floor(t)` and `R = eps^-1 MK^-1(t)`, evaluates the two bound
//! components in log domain and checks the combined total against the
//! configured multiple of `R`.

use serde_json::json;

use super::{VerifyConfig, VerifyError, WitnessConfig};
use crate::ratefun::{compose_mk, right_inverse, RateFunction};
use crate::report::{param_map, GridSpec, VerificationReport};

pub(crate) struct WitnessRow {
    pub k: u64,
    pub r: f64,
    pub t1_over_r: f64,
    pub t2_over_r: f64,
    pub ratio: f64,
}

pub(crate) fn witness_row(
    m: &RateFunction,
    k_rate: &RateFunction,
    w: &WitnessConfig,
    t: f64,
) -> Result<WitnessRow, VerifyError> {
    let mk = compose_mk(m, k_rate);
    let inv = right_inverse(&mk, t)?;
    if inv <= 0.0 {
        return Err(VerifyError::ConstraintViolation {
            name: "MK_inverse_positive",
            detail: format!("MK^-1({t}) = 0: t does not exceed MK(0)"),
        });
    }
    let r = inv / w.eps;
    let k = t.floor() as u64;
    let m0 = m.eval(0.0);
    let lower = w.c * ((k + 1) as f64).ln() / m0;
    if r < lower {
        return Err(VerifyError::ConstraintViolation {
            name: "R >= c log(k+1)/M(0)",
            detail: format!("R = {r} < {lower} at t = {t}"),
        });
    }
    let eps_r = w.eps * r;
    // T1/R = exp(t/M(eps R)) / K(eps R), T2/R = exp(t/M(0)) (2 eps)^k
    let ln_t1_over_r = t * (-m.eval_log(eps_r)).exp() - k_rate.eval_log(eps_r);
    let ln_t2_over_r = t / m0 + k as f64 * (2.0 * w.eps).ln();
    let (t1_over_r, t2_over_r) = (ln_t1_over_r.exp(), ln_t2_over_r.exp());
    Ok(WitnessRow {
        k,
        r,
        t1_over_r,
        t2_over_r,
        ratio: t1_over_r + t2_over_r + 1.0,
    })
}

/// Checks `(T1 + T2 + R)/R` at each configured `t`, with
/// `T1 = (R/K(eps R)) exp(t/M(eps R))` and `T2 = R exp(t/M(0)) (2 eps)^k`.
pub fn verify_thm23_witness(cfg: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    let w = &cfg.witness;
    let m = RateFunction::parse(&w.m_dsl)?;
    let k_rate = RateFunction::parse(&w.k_dsl)?;
    if !(w.eps > 0.0 && w.eps < 1.0 / 6.0) {
        return Err(VerifyError::Precondition {
            msg: format!("eps = {} must lie in (0, 1/6)", w.eps),
        });
    }
    let m0 = m.eval(0.0);
    if 2.0 * w.eps > (-1.0 / m0).exp() {
        return Err(VerifyError::ConstraintViolation {
            name: "2 eps <= exp(-1/M(0))",
            detail: format!("2*{} > {}", w.eps, (-1.0 / m0).exp()),
        });
    }
    if w.t_list.is_empty() || w.t_list.iter().any(|&t| t < 1.0) {
        return Err(VerifyError::Precondition {
            msg: "t_list must be nonempty with t >= 1".into(),
        });
    }

    let mut notes = Vec::new();
    let mut worst = 0.0f64;
    for &t in &w.t_list {
        let row = witness_row(&m, &k_rate, w, t)?;
        notes.push(format!(
            "t={t}: k={}, R={:.6e}, T1/R={:.6e}, T2/R={:.3e}, (T1+T2+R)/R={:.6}",
            row.k, row.r, row.t1_over_r, row.t2_over_r, row.ratio
        ));
        worst = worst.max(row.ratio);
    }
    let (t_lo, t_hi) = (
        w.t_list.iter().copied().fold(f64::INFINITY, f64::min),
        w.t_list.iter().copied().fold(0.0f64, f64::max),
    );
    Ok(VerificationReport {
        property_id: "thm23-witness".into(),
        params: param_map([
            ("M", json!(w.m_dsl)),
            ("K", json!(w.k_dsl)),
            ("eps", json!(w.eps)),
            ("c", json!(w.c)),
            ("t_list", json!(w.t_list)),
        ]),
        grid: GridSpec::log(t_lo, t_hi.max(t_lo), w.t_list.len()),
        extremum: worst,
        threshold: cfg.witness_ratio_threshold,
        pass: worst <= cfg.witness_ratio_threshold,
        notes,
    })
}
