//! Membership tests for the regions the rate calculus works with: the
//! resolvent region to the right of the curve `Re = -1/M(|Im|)`, its
//! two-sided version, the fixed vertical strip `|Re| < 1/(c log(k+1))`, and
//! a disc at the origin. All four depend only on `Re lambda` and
//! `|Im lambda|`, so membership is conjugation-symmetric.

use num_complex::Complex64;

use super::rate::RateFunction;

#[derive(Clone, Debug)]
pub enum RegionSpec {
    /// `Re lambda > -1/M(|Im lambda|)`
    RightOfCurve { rate: RateFunction },
    /// `|Re lambda| < 1/M(|Im lambda|)`
    TwoSidedCurve { rate: RateFunction },
    /// `|Re lambda| < 1/(c log(k+1))`, `k >= 1`, `c > 0`
    FixedStrip { k: u64, c: f64 },
    /// `|lambda| < radius`
    Disc { radius: f64 },
}

impl RegionSpec {
    pub fn contains(&self, lambda: Complex64) -> bool {
        match self {
            RegionSpec::RightOfCurve { rate } => {
                lambda.re > -(-rate.eval_log(lambda.im.abs())).exp()
            }
            RegionSpec::TwoSidedCurve { rate } => {
                lambda.re.abs() < (-rate.eval_log(lambda.im.abs())).exp()
            }
            RegionSpec::FixedStrip { k, c } => lambda.re.abs() < 1.0 / (c * ((*k + 1) as f64).ln()),
            RegionSpec::Disc { radius } => lambda.re.hypot(lambda.im) < *radius,
        }
    }
}

pub fn region_contains(region: &RegionSpec, lambda: Complex64) -> bool {
    region.contains(lambda)
}
