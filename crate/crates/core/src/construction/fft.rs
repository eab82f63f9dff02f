//! FFT discretisation of the defining Fourier integral: the independent
//! cross-check method for the adaptive quadrature.
//!
//! Sampling `Phi_m` at `s_j = -S + j ds` (`ds = 2S/N`) and applying a
//! discrete transform yields `f_m` on the lattice `t_k = 2 pi k / (N ds)`;
//! with this grid the carrier reduces to `e^(-i t_k S) = (-1)^k` exactly.
//! The returned error accounting covers the analytic `s^-4` tail, the
//! time-domain aliasing image at period `2 pi / ds`, and an `N` vs `N/2`
//! self-convergence estimate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::factors::{check_m, phi_real};
use super::quadrature::{QuadMethod, QuadratureResult};
use super::QuadError;

/// Discretisation parameters: sampling window `[-s_max, s_max]` with `n`
/// (a power of two) sample points.
#[derive(Clone, Copy, Debug)]
pub struct FftParams {
    pub s_max: f64,
    pub n: usize,
}

impl Default for FftParams {
    fn default() -> Self {
        FftParams {
            s_max: 400.0,
            n: 16384,
        }
    }
}

/// Requested output grid `t_j = j dt`, `j < count`. `dt` must be an integer
/// multiple of the lattice spacing `pi / s_max`.
#[derive(Clone, Copy, Debug)]
pub struct FftTimeGrid {
    pub dt: f64,
    pub count: usize,
}

impl FftParams {
    /// Native output spacing of the discretisation.
    pub fn base_dt(&self) -> f64 {
        PI / self.s_max
    }
}

fn spectrum(m: u32, s_max: f64, n: usize) -> Vec<f64> {
    let ds = 2.0 * s_max / n as f64;
    let mut data: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(phi_real(m, (-s_max + j as f64 * ds).abs()), 0.0))
        .collect();
    FftPlanner::new()
        .plan_fft(n, FftDirection::Inverse)
        .process(&mut data);
    let scale = ds / (2.0 * PI);
    data.iter()
        .enumerate()
        .map(|(k, x)| {
            if k % 2 == 0 {
                scale * x.re
            } else {
                -scale * x.re
            }
        })
        .collect()
}

/// Evaluates `f_m` on a uniform time grid by FFT discretisation.
pub fn f_eval_fft(
    m: u32,
    grid: &FftTimeGrid,
    params: &FftParams,
) -> Result<Vec<QuadratureResult>, QuadError> {
    check_m(m)?;
    if params.n < 16 || !params.n.is_power_of_two() {
        return Err(QuadError::BadParameter {
            msg: format!("n = {} must be a power of two >= 16", params.n),
        });
    }
    if !(params.s_max >= 30.0) {
        return Err(QuadError::BadParameter {
            msg: format!("s_max = {} must be >= 30", params.s_max),
        });
    }
    let base = params.base_dt();
    let ratio = grid.dt / base;
    let stride = ratio.round();
    if stride < 1.0 || (ratio - stride).abs() > 1e-9 * ratio.abs() {
        return Err(QuadError::IncompatibleGrid {
            msg: format!(
                "dt = {} is not an integer multiple of 2*pi/(N*ds) = {base}",
                grid.dt
            ),
        });
    }
    let stride = stride as usize;
    if grid.count == 0 || (grid.count - 1) * stride >= params.n / 2 {
        return Err(QuadError::IncompatibleGrid {
            msg: format!(
                "grid of {} points at stride {stride} leaves the resolved half-lattice (n = {})",
                grid.count, params.n
            ),
        });
    }

    let full = spectrum(m, params.s_max, params.n);
    let half = spectrum(m, params.s_max, params.n / 2);

    // Empirical decay constant for the aliasing image at t + 2 pi / ds:
    // |f(t)| <= kappa / (1 + t^2) fitted over the resolved lattice.
    let kappa = full
        .iter()
        .take(params.n / 2)
        .enumerate()
        .map(|(k, &v)| v.abs() * (1.0 + (k as f64 * base).powi(2)))
        .fold(0.0f64, f64::max);
    let period_t = PI * params.n as f64 / params.s_max; // 2 pi / ds
    let tail = 1.0 / (3.0 * params.s_max.powi(3)) / PI;

    let nodes = (params.n + params.n / 2) as u64;
    Ok((0..grid.count)
        .map(|j| {
            let idx = j * stride;
            let t = idx as f64 * base;
            let alias = kappa / (1.0 + (period_t - t).powi(2));
            QuadratureResult {
                value: Complex64::new(full[idx], 0.0),
                abs_error_estimate: (full[idx] - half[idx]).abs(),
                truncation_bound: tail + alias,
                nodes_used: nodes,
                method: QuadMethod::FftGrid,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::quadrature::f_eval;
    use approx::assert_relative_eq;

    #[test]
    fn zero_frequency_bin_is_trapezoid_sum() {
        let params = FftParams {
            s_max: 60.0,
            n: 1024,
        };
        let out = f_eval_fft(
            2,
            &FftTimeGrid {
                dt: params.base_dt(),
                count: 1,
            },
            &params,
        )
        .unwrap();
        let ds = 2.0 * params.s_max / params.n as f64;
        let mut sum = 0.0;
        for j in 0..params.n {
            sum += phi_real(2, (-params.s_max + j as f64 * ds).abs());
        }
        assert_relative_eq!(out[0].value.re, ds * sum / (2.0 * PI), max_relative = 1e-12);
    }

    #[test]
    fn agrees_with_adaptive_quadrature() {
        let params = FftParams::default();
        let grid = FftTimeGrid {
            dt: 101.0 * params.base_dt(),
            count: 8,
        };
        for m in [2u32, 4] {
            let fft = f_eval_fft(m, &grid, &params).unwrap();
            for (j, r) in fft.iter().enumerate() {
                let t = j as f64 * grid.dt;
                let adaptive = f_eval(m, t, 1e-7).unwrap();
                assert!(
                    (adaptive.value.re - r.value.re).abs() < 1e-6,
                    "m={m} t={t}: {} vs {}",
                    adaptive.value.re,
                    r.value.re
                );
            }
        }
    }

    #[test]
    fn doubling_n_is_self_convergent() {
        let a = f_eval_fft(
            2,
            &FftTimeGrid {
                dt: PI / 400.0,
                count: 64,
            },
            &FftParams {
                s_max: 400.0,
                n: 16384,
            },
        )
        .unwrap();
        let b = f_eval_fft(
            2,
            &FftTimeGrid {
                dt: PI / 400.0,
                count: 64,
            },
            &FftParams {
                s_max: 400.0,
                n: 32768,
            },
        )
        .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value.re - y.value.re).abs() < 1e-8);
        }
    }

    #[test]
    fn incompatible_grids_rejected() {
        let params = FftParams::default();
        assert!(matches!(
            f_eval_fft(2, &FftTimeGrid { dt: 0.7, count: 4 }, &params),
            Err(QuadError::IncompatibleGrid { .. })
        ));
        assert!(matches!(
            f_eval_fft(
                2,
                &FftTimeGrid {
                    dt: params.base_dt(),
                    count: params.n
                },
                &params
            ),
            Err(QuadError::IncompatibleGrid { .. })
        ));
        assert!(matches!(
            f_eval_fft(
                2,
                &FftTimeGrid { dt: 0.1, count: 4 },
                &FftParams {
                    s_max: 400.0,
                    n: 1000
                }
            ),
            Err(QuadError::BadParameter { .. })
        ));
    }

    #[test]
    fn odd_m_rejected() {
        assert!(f_eval_fft(
            3,
            &FftTimeGrid {
                dt: PI / 400.0,
                count: 2
            },
            &FftParams::default()
        )
        .is_err());
    }
}
