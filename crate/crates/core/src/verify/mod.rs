//! Certification suite: runs every grid verifier with a deterministic
//! configuration and collects machine-readable reports.

mod norms;
mod spectral;
mod witness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use norms::{verify_1a, verify_1b, verify_cm_uniform};
pub use spectral::{verify_2a, verify_2b, verify_q_strip};
pub use witness::verify_thm23_witness;

use crate::ratefun::{self, RateError, RateFunction};
use crate::report::{GridSpec, VerificationReport};

#[derive(Clone, Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Rate(#[from] RateError),
    #[error(transparent)]
    Eval(#[from] crate::construction::EvalError),
    #[error(transparent)]
    Quad(#[from] crate::construction::QuadError),
    #[error("precondition violated: {msg}")]
    Precondition { msg: String },
    #[error("constraint violated: {name}: {detail}")]
    ConstraintViolation { name: &'static str, detail: String },
    #[error("strip S_(k,c) with half-width {strip} exceeds the continuation domain {domain} for m = {m}; choose c >= {min_c}")]
    StripExceedsDomain {
        m: u32,
        strip: f64,
        domain: f64,
        min_c: f64,
    },
}

/// Witness-bound parameters for the quantified decay estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct WitnessConfig {
    pub m_dsl: String,
    pub k_dsl: String,
    pub eps: f64,
    pub c: f64,
    pub t_list: Vec<f64>,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            m_dsl: "poly:1".into(),
            k_dsl: "poly:1".into(),
            eps: 0.05,
            c: 0.1,
            t_list: vec![10.0, 100.0, 1000.0],
        }
    }
}

/// Rate functions and parameters for the growth-condition checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct RateChecksConfig {
    pub m_dsl: String,
    pub k_dsl: String,
    pub reg_c: f64,
    pub cond_eps: f64,
    pub exp_alpha: f64,
}

impl Default for RateChecksConfig {
    fn default() -> Self {
        RateChecksConfig {
            m_dsl: "poly:2".into(),
            k_dsl: "poly:2".into(),
            reg_c: 0.4,
            cond_eps: 0.5,
            exp_alpha: 1.0,
        }
    }
}

/// Full suite configuration. Every field has a deterministic default; a
/// config file may override any subset.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub m_list: Vec<u32>,
    /// time-grid extent and density for the norm sweeps
    pub t_max: f64,
    pub t_count: usize,
    /// absolute quadrature tolerance for the norm sweeps
    pub quad_tol_norms: f64,
    /// absolute quadrature tolerance for single-point values
    pub quad_tol_point: f64,
    /// strip constant for the transform bound
    pub strip_c: f64,
    pub im_max: f64,
    pub re_max: f64,
    pub disc_radius: f64,
    pub n_radii: usize,
    pub n_angles: usize,
    pub cm_s_max: f64,
    pub norm_ratio_threshold: f64,
    pub cm_ratio_threshold: f64,
    pub strip_ratio_threshold: f64,
    pub witness_ratio_threshold: f64,
    pub witness: WitnessConfig,
    pub rates: RateChecksConfig,
    /// worker cap; defaults to TAUBERKIT_THREADS or machine parallelism
    pub threads: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            m_list: vec![2, 4, 6, 8],
            t_max: 50.0,
            t_count: 101,
            quad_tol_norms: 1e-4,
            quad_tol_point: 1e-7,
            strip_c: 1.0,
            im_max: 1e3,
            re_max: 1e3,
            disc_radius: 1.0 / 3.0,
            n_radii: 40,
            n_angles: 16,
            cm_s_max: 50.0,
            norm_ratio_threshold: 20.0,
            cm_ratio_threshold: 20.0,
            strip_ratio_threshold: 50.0,
            witness_ratio_threshold: 10.0,
            witness: WitnessConfig::default(),
            rates: RateChecksConfig::default(),
            threads: None,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.m_list.is_empty() {
            return Err(VerifyError::Precondition {
                msg: "m_list must be nonempty".into(),
            });
        }
        if self.m_list.iter().any(|&m| m < 2 || m % 2 != 0) {
            return Err(VerifyError::Precondition {
                msg: "m_list must contain even integers >= 2".into(),
            });
        }
        Ok(())
    }

    pub(crate) fn workers(&self) -> usize {
        crate::util::worker_threads(self.threads)
    }
}

/// Runs every verifier plus the rate-function growth checks. Individual
/// verifier errors are collected as failed reports; the suite never aborts.
pub fn verify_all(config: &VerifyConfig) -> Result<Vec<VerificationReport>, VerifyError> {
    config.validate()?;
    let mut reports = Vec::new();
    let mut push = |name: &str, r: Result<VerificationReport, VerifyError>| match r {
        Ok(rep) => reports.push(rep),
        Err(e) => reports.push(VerificationReport {
            property_id: name.into(),
            params: Default::default(),
            grid: GridSpec::uniform(0.0, 0.0, 1),
            extremum: f64::NAN,
            threshold: f64::NAN,
            pass: false,
            notes: vec![format!("error: {e}")],
        }),
    };

    push("1a", verify_1a(config));
    push("1b", verify_1b(config));
    push("2a", verify_2a(config));
    push("2b", verify_2b(config));
    push("q-strip", verify_q_strip(config));
    push("c_m-uniform", verify_cm_uniform(config));
    push("thm23-witness", verify_thm23_witness(config));

    let m = RateFunction::parse(&config.rates.m_dsl)?;
    let k = RateFunction::parse(&config.rates.k_dsl)?;
    push(
        "reg-growth",
        ratefun::regular_growth_check(&m, config.rates.reg_c, &GridSpec::uniform(0.0, 10.0, 201))
            .map_err(VerifyError::from),
    );
    push(
        "cond-1.3",
        ratefun::condition_13_check(&m, &k, config.rates.cond_eps, &GridSpec::log(10.0, 1e6, 60))
            .map_err(VerifyError::from),
    );
    push(
        "exp-growth",
        ratefun::exp_growth_check(
            &crate::ratefun::compose_mk(&m, &k),
            config.rates.exp_alpha,
            &GridSpec::uniform(0.0, 50.0, 101),
        )
        .map_err(VerifyError::from),
    );
    Ok(reports)
}

/// Bundle verdict used for exit codes: pass iff every report that is not an
/// expected-failure passes.
pub fn bundle_passes(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| !r.counts_as_failure())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        VerifyConfig::default().validate().unwrap();
    }

    #[test]
    fn empty_m_list_rejected() {
        let cfg = VerifyConfig {
            m_list: vec![],
            ..Default::default()
        };
        assert!(matches!(
            verify_all(&cfg),
            Err(VerifyError::Precondition { .. })
        ));
        let cfg = VerifyConfig {
            m_list: vec![3],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_roundtrips_through_json_with_partial_overrides() {
        let cfg: VerifyConfig = serde_json::from_str(r#"{"m_list": [2], "t_max": 30.0}"#).unwrap();
        assert_eq!(cfg.m_list, vec![2]);
        assert_eq!(cfg.t_max, 30.0);
        assert_eq!(cfg.t_count, VerifyConfig::default().t_count);
        assert_eq!(cfg.witness.eps, 0.05);
    }
}
