//! Residual aggregation: one report per named check.

use serde::Serialize;

/// Summary of one residual family over every point where it was evaluated.
/// `pass` holds iff at least one observation was made and the worst stayed
/// below the threshold; a check that never ran proves nothing.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub worst_point: Vec<f64>,
    pub count: usize,
    pub threshold: f64,
    pub pass: bool,
}

/// Running max/mean aggregator for one report.
pub struct Accumulator {
    name: String,
    threshold: f64,
    max: f64,
    sum: f64,
    count: usize,
    worst_point: Vec<f64>,
}

impl Accumulator {
    pub fn new(name: impl Into<String>, threshold: f64) -> Self {
        Accumulator {
            name: name.into(),
            threshold,
            max: 0.0,
            sum: 0.0,
            count: 0,
            worst_point: Vec::new(),
        }
    }

    /// Records `|value|` at `point`. Non-finite values poison the report:
    /// they land as infinity so the check cannot pass silently.
    pub fn observe(&mut self, value: f64, point: &[f64]) {
        let v = if value.is_finite() {
            value.abs()
        } else {
            f64::INFINITY
        };
        if self.count == 0 || v > self.max {
            self.max = v;
            self.worst_point = point.to_vec();
        }
        self.sum += v;
        self.count += 1;
    }

    /// Marks one point where the residual itself could not be evaluated.
    pub fn poison(&mut self, point: &[f64]) {
        self.observe(f64::INFINITY, point);
    }

    pub fn finish(self) -> ResidualReport {
        let mean = if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        };
        ResidualReport {
            pass: self.count > 0 && self.max < self.threshold,
            name: self.name,
            max: self.max,
            mean,
            worst_point: self.worst_point,
            count: self.count,
            threshold: self.threshold,
        }
    }
}

/// True iff every report passed.
pub fn all_pass(reports: &[ResidualReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
