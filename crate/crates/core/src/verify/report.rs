use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub x: f64,
    pub t: f64,
    pub residual: f64,
}

/// Outcome of a residual check; `verdict` is pass iff max_abs <= tolerance
/// (a NaN residual fails).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub family: String,
    pub check: String,
    pub max_abs: f64,
    /// Root mean square of the residuals.
    pub l2: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_point: Option<Vec<PointResidual>>,
}

impl ResidualReport {
    pub fn from_points(family: impl Into<String>, check: impl Into<String>, points: Vec<PointResidual>, tolerance: f64) -> Self {
        let n = points.len();
        let max_abs = if points.iter().any(|p| p.residual.is_nan()) {
            f64::NAN
        } else {
            points.iter().fold(0.0f64, |m, p| m.max(p.residual.abs()))
        };
        let l2 = if n == 0 {
            0.0
        } else {
            (points.iter().map(|p| p.residual * p.residual).sum::<f64>() / n as f64).sqrt()
        };
        let verdict = if max_abs <= tolerance { Verdict::Pass } else { Verdict::Fail };
        Self {
            family: family.into(),
            check: check.into(),
            max_abs,
            l2,
            tolerance,
            verdict,
            nodes: n,
            per_point: Some(points),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn without_points(mut self) -> Self {
        self.per_point = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_max_abs() {
        let p = |r| PointResidual { x: 0.0, t: 1.0, residual: r };
        let r = ResidualReport::from_points("f", "c", vec![p(1e-7), p(-3e-7)], 1e-6);
        assert!(r.passed());
        assert_eq!(r.max_abs, 3e-7);
        assert!((r.l2 - (5e-14f64).sqrt()).abs() < 1e-20);
        assert!(!ResidualReport::from_points("f", "c", vec![p(f64::NAN)], 1.0).passed());
        let json = serde_json::to_value(r.without_points()).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys.len(), 7);
        assert_eq!(json["verdict"], "pass");
    }
}
