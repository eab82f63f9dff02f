//! Machine-readable certification reports and the grid descriptors they
//! embed. A report's grid spec regenerates the exact evaluation points, so a
//! rerun with the same parameters reproduces the extremum bit-for-bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Spacing rule for a one-dimensional evaluation grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    Log,
}

/// Descriptor of a one-dimensional grid; `points` materialises it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn uniform(min: f64, max: f64, count: usize) -> Self {
        assert!(count >= 1 && min <= max, "degenerate grid");
        GridSpec {
            min,
            max,
            count,
            spacing: Spacing::Uniform,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        assert!(
            count >= 1 && 0.0 < min && min <= max,
            "log grid needs 0 < min <= max"
        );
        GridSpec {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        match self.spacing {
            Spacing::Uniform => {
                let step = (self.max - self.min) / n;
                (0..self.count)
                    .map(|i| self.min + i as f64 * step)
                    .collect()
            }
            Spacing::Log => {
                let (la, lb) = (self.min.ln(), self.max.ln());
                let step = (lb - la) / n;
                (0..self.count)
                    .map(|i| (la + i as f64 * step).exp())
                    .collect()
            }
        }
    }
}

/// Inserts midpoints between adjacent points. The original points appear in
/// the refined grid unchanged, which makes grid suprema monotone under
/// refinement.
pub fn refine_points(points: &[f64], spacing: Spacing) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len() * 2);
    for (i, &p) in points.iter().enumerate() {
        out.push(p);
        if i + 1 < points.len() {
            let q = points[i + 1];
            out.push(match spacing {
                Spacing::Uniform => 0.5 * (p + q),
                Spacing::Log => (p * q).sqrt(),
            });
        }
    }
    out
}

/// Outcome of one property certification.
///
/// `pass` compares the checked quantity against `threshold`; for trend-based
/// checks the checked quantity is a fitted slope recorded in `params` while
/// `extremum` carries the grid supremum itself. `notes` holds per-parameter
/// detail; a note starting with `expected-failure` marks a violation the
/// construction only rules out asymptotically, and such reports do not fail
/// a bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property_id: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub grid: GridSpec,
    pub extremum: f64,
    pub threshold: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn expected_failure(&self) -> bool {
        self.notes.iter().any(|n| n.starts_with("expected-failure"))
    }

    /// Bundle verdict: failed reports count unless marked expected-failure.
    pub fn counts_as_failure(&self) -> bool {
        !self.pass && !self.expected_failure()
    }
}

/// Convenience for building the `params` map.
pub(crate) fn param_map<I, K>(entries: I) -> BTreeMap<String, serde_json::Value>
where
    I: IntoIterator<Item = (K, serde_json::Value)>,
    K: Into<String>,
{
    entries.into_iter().map(|(k, v)| (k.into(), v)).collect()
}
