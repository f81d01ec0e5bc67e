//! Truncated normal friction distribution and its exceedance function.
//!
//! The exceedance `u(x) = P(mu > x) = 1 - F(x)` is the probability that the
//! true friction exceeds a reported value `x`, i.e. that the report is "too
//! low". The inverse, [`TruncatedNormal::exceedance_quantile`], returns the
//! smallest value whose exceedance is at or below a given threshold.

use crate::error::{Error, Result};
use statrs::function::erf::erfc;
use std::f64::consts::SQRT_2;

/// Standard normal CDF via the complementary error function.
fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Normal distribution truncated to a closed support interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    mean: f64,
    sigma: f64,
    lower: f64,
    upper: f64,
    // Cached normalization: Phi(z_lower) and Phi(z_upper) - Phi(z_lower).
    cdf_at_lower: f64,
    mass: f64,
}

impl TruncatedNormal {
    pub fn new(mean: f64, sigma: f64, lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::invalid(format!(
                "truncation bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        if !(sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be > 0, got {sigma}")));
        }
        if !(lower <= mean && mean <= upper) {
            return Err(Error::invalid(format!(
                "mean {mean} must lie within the support [{lower}, {upper}]"
            )));
        }
        let cdf_at_lower = std_normal_cdf((lower - mean) / sigma);
        let mass = std_normal_cdf((upper - mean) / sigma) - cdf_at_lower;
        if !(mass > 0.0) {
            return Err(Error::invalid(
                "truncation interval carries no probability mass",
            ));
        }
        Ok(Self {
            mean,
            sigma,
            lower,
            upper,
            cdf_at_lower,
            mass,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// CDF of the truncated distribution; 0 below the support, 1 above it.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lower {
            return 0.0;
        }
        if x >= self.upper {
            return 1.0;
        }
        let p = (std_normal_cdf((x - self.mean) / self.sigma) - self.cdf_at_lower) / self.mass;
        p.clamp(0.0, 1.0)
    }

    /// Exceedance probability `u(x) = 1 - F(x)`.
    pub fn exceedance(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Smallest `x` in the support with `exceedance(x) <= u`.
    ///
    /// Computed by bisection; the interval is narrowed well below the 1e-10
    /// tolerance so that round trips through `exceedance` stay accurate at
    /// tail probabilities down to 1e-7.
    pub fn exceedance_quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::invalid(format!(
                "exceedance threshold must be in [0, 1], got {u}"
            )));
        }
        if self.exceedance(self.lower) <= u {
            return Ok(self.lower);
        }
        // Only the upper bound has exceedance exactly zero.
        if u == 0.0 {
            return Ok(self.upper);
        }
        // Invariant: exceedance(hi) <= u < exceedance(lo).
        let mut lo = self.lower;
        let mut hi = self.upper;
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if self.exceedance(mid) <= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// What the simulated friction-estimating component emits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrictionEstimate {
    /// A point prediction with the probability that the true friction exceeds it.
    Point { value: f64, uncertainty: f64 },
    /// A handle to the full situational distribution.
    Distribution(TruncatedNormal),
}
