//! Grid supremum of the derivative products
//! `max_{j1+j2+j3 <= 2} |F^(j1)| |G_m^(j2)| |H_m^(j3)|`: the constant that
//! controls the `(1+t^2)^-1` envelope of the sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factors::{check_m, factor_derivs};
use super::QuadError;

/// Fixed seed: the finite-difference spot-check picks the same points on
/// every run.
const FD_CHECK_SEED: u64 = 0x7ab3_55c1;
const FD_POINTS: usize = 10;
const FD_REL_TOL: f64 = 1e-6;

#[allow(clippy::needless_range_loop)]
fn max_product(m: u32, s: f64) -> f64 {
    let d = factor_derivs(m, s);
    let f = [d.f[0].abs(), d.f[1].abs(), d.f[2].abs()];
    let g = [d.g[0].abs(), d.g[1].abs(), d.g[2].abs()];
    let h = [d.h[0].abs(), d.h[1].abs(), d.h[2].abs()];
    let mut best = 0.0f64;
    for j1 in 0..3 {
        for j2 in 0..3 - j1 {
            for j3 in 0..3 - j1 - j2 {
                best = best.max(f[j1] * g[j2] * h[j3]);
            }
        }
    }
    best
}

/// Evaluation grid: coarse spacing 0.01 over `[0, s_max]`, refined to
/// `1e-3 * m^(-1/2)` inside the transition band `25 (1 -+ m^(-1/2))`.
fn build_grid(m: u32, s_max: f64) -> Vec<f64> {
    let band = (m as f64).powf(-0.5);
    let (lo, hi) = (25.0 * (1.0 - band), 25.0 * (1.0 + band));
    let mut grid = Vec::new();
    let coarse = 0.01;
    let fine = 1e-3 * band;
    let mut s = 0.0;
    while s <= s_max {
        grid.push(s);
        s += if s >= lo && s <= hi { fine } else { coarse };
    }
    grid.push(s_max);
    grid
}

fn central_fd(val: impl Fn(f64) -> f64, s: f64, h: f64) -> f64 {
    (val(s + h) - val(s - h)) / (2.0 * h)
}

/// Cross-validates the closed-form first derivatives against central finite
/// differences at deterministic pseudo-random grid points.
fn fd_cross_check(m: u32, grid: &[f64]) -> Result<(), QuadError> {
    let mut rng = ChaCha8Rng::seed_from_u64(FD_CHECK_SEED ^ m as u64);
    for _ in 0..FD_POINTS {
        let s = grid[rng.gen_range(1..grid.len().saturating_sub(1))].max(0.05);
        let h = 1e-6 * (1.0 + s);
        type Probe = Box<dyn Fn(f64) -> f64>;
        let checks: [(f64, Probe); 3] = [
            (
                factor_derivs(m, s).f[1],
                Box::new(move |x| factor_derivs(m, x).f[0]),
            ),
            (
                factor_derivs(m, s).g[1],
                Box::new(move |x| factor_derivs(m, x).g[0]),
            ),
            (
                factor_derivs(m, s).h[1],
                Box::new(move |x| factor_derivs(m, x).h[0]),
            ),
        ];
        for (formula, val) in checks {
            let fd = central_fd(val, s, h);
            let scale = formula.abs().max(fd.abs());
            if scale > FD_REL_TOL && (formula - fd).abs() > FD_REL_TOL * scale {
                return Err(QuadError::DerivativeCrossCheck { s, formula, fd });
            }
        }
    }
    Ok(())
}

/// Grid supremum defining `C_m` over `[0, s_max]`; `s_max >= 50` so the
/// transition band and the tail plateau are both covered.
pub fn c_m_estimate(m: u32, s_max: f64) -> Result<f64, QuadError> {
    check_m(m)?;
    if !(s_max >= 50.0) {
        return Err(QuadError::BadParameter {
            msg: format!("s_max = {s_max} must be >= 50"),
        });
    }
    let grid = build_grid(m, s_max);
    fd_cross_check(m, &grid)?;
    Ok(grid.iter().map(|&s| max_product(m, s)).fold(0.0, f64::max))
}
