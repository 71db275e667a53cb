//! Single-variate input distributions, sampled by inverse CDF.
//!
//! Every distribution maps one uniform draw u in [0, 1) to one value, so a
//! parameter's sampled value depends only on its own draw. That is what
//! makes common-random-number comparisons work: two scenario variants
//! sampled from the same substream see identical u sequences and therefore
//! identical parameter values wherever their distributions agree.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Uniform draws are nudged off the exact endpoints before hitting a normal
/// quantile function, which is infinite at 0 and 1.
const QUANTILE_GUARD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Degenerate: always `value`.
    Point { value: f64 },
    Uniform { low: f64, high: f64 },
    Triangular { low: f64, mode: f64, high: f64 },
    /// Normal, optionally truncated to [low, high] by CDF renormalization.
    Normal {
        mean: f64,
        sd: f64,
        low: Option<f64>,
        high: Option<f64>,
    },
}

impl Distribution {
    pub fn point(value: f64) -> Distribution {
        Distribution::Point { value }
    }

    pub fn uniform(low: f64, high: f64) -> Result<Distribution> {
        if !low.is_finite() || !high.is_finite() || low > high {
            return Err(Error::config("uniform distribution needs finite low <= high"));
        }
        Ok(Distribution::Uniform { low, high })
    }

    pub fn triangular(low: f64, mode: f64, high: f64) -> Result<Distribution> {
        if !low.is_finite() || !mode.is_finite() || !high.is_finite() {
            return Err(Error::config("triangular distribution needs finite parameters"));
        }
        if !(low <= mode && mode <= high && low < high) {
            return Err(Error::config(
                "triangular distribution needs low <= mode <= high with low < high",
            ));
        }
        Ok(Distribution::Triangular { low, mode, high })
    }

    pub fn normal(mean: f64, sd: f64, low: Option<f64>, high: Option<f64>) -> Result<Distribution> {
        if !mean.is_finite() || !sd.is_finite() || sd <= 0.0 {
            return Err(Error::config("normal distribution needs finite mean and sd > 0"));
        }
        if let (Some(lo), Some(hi)) = (low, high) {
            if lo >= hi {
                return Err(Error::config("normal truncation needs low < high"));
            }
        }
        Ok(Distribution::Normal { mean, sd, low, high })
    }

    /// Maps one uniform draw u in [0, 1) to a value via the inverse CDF.
    pub fn sample(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0 - QUANTILE_GUARD);
        match *self {
            Distribution::Point { value } => value,
            Distribution::Uniform { low, high } => low + u * (high - low),
            Distribution::Triangular { low, mode, high } => {
                let span = high - low;
                let mode_fraction = (mode - low) / span;
                if u < mode_fraction {
                    low + (u * span * (mode - low)).sqrt()
                } else {
                    high - ((1.0 - u) * span * (high - mode)).sqrt()
                }
            }
            Distribution::Normal { mean, sd, low, high } => {
                // construction validated the parameters, so this cannot fail
                let normal = Normal::new(mean, sd).expect("validated normal parameters");
                let p_low = low.map_or(0.0, |b| normal.cdf(b));
                let p_high = high.map_or(1.0, |b| normal.cdf(b));
                let p = (p_low + u * (p_high - p_low)).clamp(QUANTILE_GUARD, 1.0 - QUANTILE_GUARD);
                let value = normal.inverse_cdf(p);
                match (low, high) {
                    (Some(lo), Some(hi)) => value.clamp(lo, hi),
                    (Some(lo), None) => value.max(lo),
                    (None, Some(hi)) => value.min(hi),
                    (None, None) => value,
                }
            }
        }
    }
}
