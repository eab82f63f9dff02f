//! Grid-based certifications of the growth conditions entering the rate
//! calculus: the regular-growth inequality, the double-exponential resolvent
//! bound, and plain exponential dominance.
//!
//! Boundedness along an asymptotic condition can only be certified at desk
//! scale: the trend checks fit a least-squares slope over the grid and pass
//! when it is non-increasing up to `SLOPE_TOL`, reporting the grid supremum
//! as the fitted constant.

use serde_json::json;

use super::rate::RateFunction;
use super::RateError;
use crate::report::{param_map, GridSpec, VerificationReport};
use crate::util::ls_slope;

/// Relative slack on the regular-growth inequality.
pub const REG_GROWTH_SLACK: f64 = 1e-10;

/// A fitted trend slope above this fails the boundedness checks.
pub const SLOPE_TOL: f64 = 1e-6;

/// Certifies `M(s) >= c M(s + c/M(s))` on the grid, with relative slack
/// 1e-10. The extremum is the worst ratio `c M(s + c/M(s)) / M(s)`.
pub fn regular_growth_check(
    m: &RateFunction,
    c: f64,
    grid: &GridSpec,
) -> Result<VerificationReport, RateError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(RateError::Precondition {
            msg: format!("c = {c} must lie in (0, 1)"),
        });
    }
    if grid.count == 0 || grid.min < 0.0 {
        return Err(RateError::Precondition {
            msg: "grid must be nonempty and nonnegative".into(),
        });
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_s = grid.min;
    for s in grid.points() {
        let ls = m.eval_log(s);
        let shifted = s + c * (-ls).exp();
        let ratio = c.ln() + m.eval_log(shifted) - ls;
        if ratio > worst {
            worst = ratio;
            worst_s = s;
        }
    }
    let extremum = worst.exp();
    let threshold = 1.0 + REG_GROWTH_SLACK;
    Ok(VerificationReport {
        property_id: "reg-growth".into(),
        params: param_map([("rate", json!(m.source())), ("c", json!(c))]),
        grid: *grid,
        extremum,
        threshold,
        pass: extremum <= threshold,
        notes: vec![format!(
            "worst ratio c*M(s+c/M(s))/M(s) = {extremum} at s = {worst_s}"
        )],
    })
}

/// Certifies the double-exponential dominance `K(s) = O(exp(exp((s M(s))^(1-eps))))`
/// by comparing `log log K(s)` with `(1-eps) log(s M(s))` on the grid.
/// Points where the double log is undefined (`K(s) <= 1`) or where
/// `s M(s) < 1` are skipped and reported.
pub fn condition_13_check(
    m: &RateFunction,
    k: &RateFunction,
    eps: f64,
    grid: &GridSpec,
) -> Result<VerificationReport, RateError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(RateError::Precondition {
            msg: format!("eps = {eps} must lie in (0, 1)"),
        });
    }
    if grid.count == 0 || grid.min <= 0.0 {
        return Err(RateError::Precondition {
            msg: "grid must be nonempty with positive points".into(),
        });
    }
    let mut xs = Vec::new();
    let mut ds = Vec::new();
    let mut skipped = 0usize;
    for s in grid.points() {
        let lk = k.eval_log(s);
        let lsm = s.ln() + m.eval_log(s);
        if lk <= 0.0 || lsm < 0.0 {
            skipped += 1;
            continue;
        }
        xs.push(s.ln());
        ds.push(lk.ln() - (1.0 - eps) * lsm);
    }
    let fitted_constant = ds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slope = if ds.len() >= 2 {
        ls_slope(&xs, &ds)
    } else {
        0.0
    };
    let mut notes = vec![format!(
        "log log K vs (1-eps) log(sM): fitted constant {fitted_constant}, trend slope {slope}, {} points compared",
        ds.len()
    )];
    if skipped > 0 {
        notes.push(format!(
            "{skipped} grid points skipped (K(s) <= 1 or s*M(s) < 1: double log undefined)"
        ));
    }
    Ok(VerificationReport {
        property_id: "cond-1.3".into(),
        params: param_map([
            ("M", json!(m.source())),
            ("K", json!(k.source())),
            ("eps", json!(eps)),
            ("slope", json!(slope)),
            ("compared_points", json!(ds.len())),
        ]),
        grid: *grid,
        extremum: if ds.is_empty() {
            f64::NEG_INFINITY
        } else {
            fitted_constant
        },
        threshold: SLOPE_TOL,
        pass: slope <= SLOPE_TOL,
        notes,
    })
}

/// Certifies `f(s) = O(e^(alpha s))`: the log-gap `log f(s) - alpha s` must
/// not trend upward; its grid supremum (the log of the implied constant) is
/// reported as the extremum.
pub fn exp_growth_check(
    f: &RateFunction,
    alpha: f64,
    grid: &GridSpec,
) -> Result<VerificationReport, RateError> {
    if !(alpha > 0.0) {
        return Err(RateError::Precondition {
            msg: format!("alpha = {alpha} must be positive"),
        });
    }
    if grid.count == 0 {
        return Err(RateError::Precondition {
            msg: "grid must be nonempty".into(),
        });
    }
    let points = grid.points();
    let gaps: Vec<f64> = points.iter().map(|&s| f.eval_log(s) - alpha * s).collect();
    let sup = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slope = if gaps.len() >= 2 {
        ls_slope(&points, &gaps)
    } else {
        0.0
    };
    Ok(VerificationReport {
        property_id: "exp-growth".into(),
        params: param_map([
            ("rate", json!(f.source())),
            ("alpha", json!(alpha)),
            ("slope", json!(slope)),
        ]),
        grid: *grid,
        extremum: sup,
        threshold: SLOPE_TOL,
        pass: slope <= SLOPE_TOL,
        notes: vec![format!(
            "sup of log f(s) - alpha s = {sup} (log of implied constant), trend slope {slope}"
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rf(src: &str) -> RateFunction {
        RateFunction::parse(src).unwrap()
    }

    #[test]
    fn regular_growth_worked_examples() {
        let grid = GridSpec::uniform(0.0, 10.0, 201);
        let r = regular_growth_check(&rf("const:1"), 0.5, &grid).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.extremum, 0.5, max_relative = 1e-12);

        let r = regular_growth_check(&rf("exp:1"), 0.2, &grid).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.extremum, 0.2 * 0.2f64.exp(), max_relative = 1e-10);

        let r = regular_growth_check(&rf("exp:1"), 0.99, &grid).unwrap();
        assert!(!r.pass);
        assert_relative_eq!(r.extremum, 0.99 * 0.99f64.exp(), max_relative = 1e-10);
        assert!(r.notes[0].contains("s = 0"));
    }

    #[test]
    fn regular_growth_preconditions() {
        let grid = GridSpec::uniform(0.0, 1.0, 2);
        assert!(regular_growth_check(&rf("const:1"), 1.0, &grid).is_err());
        assert!(
            regular_growth_check(&rf("const:1"), 0.5, &GridSpec::uniform(-1.0, 1.0, 2)).is_err()
        );
    }

    #[test]
    fn condition_13_worked_examples() {
        // polynomial K is always dominated
        let grid = GridSpec::log(10.0, 1e6, 60);
        let r = condition_13_check(&rf("poly:2"), &rf("poly:2"), 0.5, &grid).unwrap();
        assert!(r.pass, "{r:?}");

        // K = exp grows too fast against M = const
        let grid2 = GridSpec::log(10.0, 100.0, 40);
        let r = condition_13_check(&rf("const:1"), &rf("exp:1"), 0.5, &grid2).unwrap();
        assert!(!r.pass);
        let slope = r.params["slope"].as_f64().unwrap();
        assert_relative_eq!(slope, 0.5, max_relative = 1e-6);

        // K <= 1 everywhere: all points skipped, trivially bounded
        let r = condition_13_check(&rf("poly:1"), &rf("const:1"), 0.5, &grid2).unwrap();
        assert!(r.pass);
        assert_eq!(r.params["compared_points"], json!(0));
        assert!(r.notes.iter().any(|n| n.contains("skipped")));
    }

    #[test]
    fn exp_growth_worked_examples() {
        let grid = GridSpec::uniform(0.0, 50.0, 101);
        let r = exp_growth_check(&rf("poly:3"), 1.0, &grid).unwrap();
        assert!(r.pass);
        // sup of 3 log(1+s) - s sits at s = 2
        assert_relative_eq!(r.extremum, 3.0 * 3f64.ln() - 2.0, epsilon = 1e-2);

        let r = exp_growth_check(&rf("exp:2"), 1.0, &grid).unwrap();
        assert!(!r.pass, "log-gap s grows");

        let r = exp_growth_check(&rf("exp:1"), 1.0, &grid).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.extremum, 0.0, epsilon = 1e-12);
    }
}
