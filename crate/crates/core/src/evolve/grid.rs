use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Time grid in units of `1/J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TimeGrid {
    Log { start: f64, end: f64, points: usize },
    Linear { start: f64, end: f64, points: usize },
    Explicit { times: Vec<f64> },
}

impl Default for TimeGrid {
    /// 120 log-spaced points over `Jt ∈ [1e-2, 1e5]`.
    fn default() -> Self {
        TimeGrid::Log { start: 1e-2, end: 1e5, points: 120 }
    }
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TimeGrid::Log { start, end, points } => {
                if !(start > 0.0 && end > start && points >= 2) {
                    return Err(Error::InvalidArgument(format!(
                        "log grid needs 0 < start < end and at least 2 points (got {start}, {end}, {points})"
                    )));
                }
            }
            TimeGrid::Linear { start, end, points } => {
                if !(start >= 0.0 && end > start && points >= 2) {
                    return Err(Error::InvalidArgument(format!(
                        "linear grid needs 0 <= start < end and at least 2 points (got {start}, {end}, {points})"
                    )));
                }
            }
            TimeGrid::Explicit { ref times } => {
                if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidArgument("explicit grid needs finite times".into()));
                }
            }
        }
        Ok(())
    }

    pub fn times<T: Real>(&self) -> Vec<T> {
        let raw: Vec<f64> = match *self {
            TimeGrid::Log { start, end, points } => {
                let (a, b) = (start.ln(), end.ln());
                (0..points).map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp()).collect()
            }
            TimeGrid::Linear { start, end, points } => {
                (0..points).map(|k| start + (end - start) * k as f64 / (points - 1) as f64).collect()
            }
            TimeGrid::Explicit { ref times } => times.clone(),
        };
        raw.into_iter().map(T::lit).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_spans_the_log_range() {
        let t: Vec<f64> = TimeGrid::default().times();
        assert_eq!(t.len(), 120);
        assert!((t[0] - 1e-2).abs() < 1e-15);
        assert!((t[119] / 1e5 - 1.0).abs() < 1e-12);
        let ratio = t[1] / t[0];
        assert!(t.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-9));
    }

    #[test]
    fn linear_grid_endpoints() {
        let t: Vec<f64> = TimeGrid::Linear { start: 0.1, end: 2.0, points: 20 }.times();
        assert_eq!(t.len(), 20);
        assert!((t[19] - 2.0).abs() < 1e-15);
        assert!((t[1] - t[0] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(TimeGrid::Log { start: 0.0, end: 1.0, points: 3 }.validate().is_err());
        assert!(TimeGrid::Linear { start: 1.0, end: 1.0, points: 3 }.validate().is_err());
        assert!(TimeGrid::Explicit { times: vec![] }.validate().is_err());
    }
}
