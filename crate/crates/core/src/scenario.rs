//! Discrete weighted situation space: weather-driven friction grid,
//! friction-dependent dispersion, velocity set, and supervision split.

use crate::error::{Error, Result};
use crate::truncnorm::TruncatedNormal;
use serde::{Deserialize, Serialize};

pub const KMH_TO_MPS: f64 = 1.0 / 3.6;

/// One weather condition anchoring the friction distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeatherAnchor {
    pub label: String,
    pub friction: f64,
    /// Relative frequency, in days per year.
    pub days_per_year: f64,
}

/// How anchor day-counts are resampled onto the friction grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Split each anchor's day-count between its two bracketing grid points,
    /// proportionally to proximity. Conserves each condition's total mass and
    /// the anchor-weighted mean friction.
    MassPreserving,
    /// Evaluate the piecewise-linear interpolant through the anchor
    /// (friction, days) points at every grid value, with constant
    /// extrapolation outside the anchor span.
    PiecewiseLinear,
}

/// Linear dispersion model: sigma interpolated in friction between two
/// endpoints and clamped to the endpoint range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionModel {
    /// (friction, sigma) at the high-dispersion end (worst weather).
    pub low_anchor: (f64, f64),
    /// (friction, sigma) at the low-dispersion end (perfect road conditions).
    pub high_anchor: (f64, f64),
}

impl DispersionModel {
    pub fn sigma_range(&self) -> (f64, f64) {
        let (a, b) = (self.low_anchor.1, self.high_anchor.1);
        (a.min(b), a.max(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub anchors: Vec<WeatherAnchor>,
    pub friction_grid_step: f64,
    pub friction_grid_range: (f64, f64),
    pub weight_mode: WeightMode,
    pub dispersion: DispersionModel,
    /// Physical friction support; situational distributions truncate here.
    pub mu_bounds: (f64, f64),
    /// Velocity grid in km/h, uniformly weighted.
    pub velocities_kmh: Vec<f64>,
    pub supervision_probability: f64,
    /// Acceptable uncertainty per supervision context.
    pub threshold_supervised: f64,
    pub threshold_unsupervised: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            anchors: vec![
                WeatherAnchor {
                    label: "glaze/aquaplaning".into(),
                    friction: 0.14,
                    days_per_year: 5.0,
                },
                WeatherAnchor {
                    label: "snow/wet leaves".into(),
                    friction: 0.41,
                    days_per_year: 60.0,
                },
                WeatherAnchor {
                    label: "wet asphalt".into(),
                    friction: 0.64,
                    days_per_year: 100.0,
                },
                WeatherAnchor {
                    label: "dry asphalt".into(),
                    friction: 0.80,
                    days_per_year: 300.0,
                },
            ],
            friction_grid_step: 0.05,
            friction_grid_range: (0.10, 0.80),
            weight_mode: WeightMode::MassPreserving,
            dispersion: DispersionModel {
                low_anchor: (0.14, 0.075),
                high_anchor: (1.10, 0.020),
            },
            mu_bounds: (0.1, 1.1),
            velocities_kmh: vec![60.0, 65.0, 70.0, 75.0, 80.0],
            supervision_probability: 0.5,
            threshold_supervised: 1e-5,
            threshold_unsupervised: 1e-6,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.anchors.is_empty() {
            return Err(Error::invalid("scenario.anchors must not be empty"));
        }
        let (lo, hi) = self.mu_bounds;
        if !(lo < hi) {
            return Err(Error::invalid("scenario.mu_bounds must satisfy lo < hi"));
        }
        for a in &self.anchors {
            if !(a.friction >= lo && a.friction <= hi) {
                return Err(Error::invalid(format!(
                    "scenario.anchors: friction {} outside mu_bounds [{lo}, {hi}]",
                    a.friction
                )));
            }
            if !(a.days_per_year > 0.0) {
                return Err(Error::invalid(format!(
                    "scenario.anchors: days_per_year must be > 0 for '{}'",
                    a.label
                )));
            }
        }
        if !self
            .anchors
            .windows(2)
            .all(|w| w[0].friction < w[1].friction)
        {
            return Err(Error::invalid(
                "scenario.anchors must be sorted by strictly increasing friction",
            ));
        }
        if !(self.friction_grid_step > 0.0) {
            return Err(Error::invalid("scenario.friction_grid_step must be > 0"));
        }
        let (gmin, gmax) = self.friction_grid_range;
        if !(gmin < gmax) {
            return Err(Error::invalid(
                "scenario.friction_grid_range must satisfy min < max",
            ));
        }
        if self.velocities_kmh.is_empty() {
            return Err(Error::invalid("scenario.velocities_kmh must not be empty"));
        }
        for v in &self.velocities_kmh {
            if !(*v >= 0.0 && *v <= 130.0) {
                return Err(Error::invalid(format!(
                    "scenario.velocities_kmh: {v} outside [0, 130]"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.supervision_probability) {
            return Err(Error::invalid(
                "scenario.supervision_probability must be in [0, 1]",
            ));
        }
        for (name, u) in [
            ("threshold_supervised", self.threshold_supervised),
            ("threshold_unsupervised", self.threshold_unsupervised),
        ] {
            if !(u > 0.0 && u <= 1.0) {
                return Err(Error::invalid(format!(
                    "scenario.{name} must be in (0, 1], got {u}"
                )));
            }
        }
        Ok(())
    }

    /// Uniform friction grid covering `friction_grid_range`.
    pub fn friction_grid(&self) -> Vec<f64> {
        let (min, max) = self.friction_grid_range;
        let n = ((max - min) / self.friction_grid_step).round() as usize;
        (0..=n).map(|i| min + i as f64 * self.friction_grid_step).collect()
    }
}

/// Situational dispersion sigma for a friction mean.
pub fn dispersion(mu: f64, config: &ScenarioConfig) -> f64 {
    let (x0, s0) = config.dispersion.low_anchor;
    let (x1, s1) = config.dispersion.high_anchor;
    let raw = s0 + (s1 - s0) * (mu - x0) / (x1 - x0);
    let (smin, smax) = config.dispersion.sigma_range();
    raw.clamp(smin, smax)
}

/// Normalized likelihood for each friction grid value.
pub fn friction_weights(config: &ScenarioConfig) -> Result<Vec<(f64, f64)>> {
    config.validate()?;
    let grid = config.friction_grid();
    let mut weights = vec![0.0; grid.len()];
    match config.weight_mode {
        WeightMode::MassPreserving => {
            for anchor in &config.anchors {
                let f = anchor.friction;
                // Index of the grid cell at or just below the anchor.
                let pos = (f - grid[0]) / config.friction_grid_step;
                let i = (pos.floor() as usize).min(grid.len() - 1);
                let frac = pos - i as f64;
                if frac.abs() < 1e-9 || i + 1 == grid.len() {
                    weights[i] += anchor.days_per_year;
                } else {
                    weights[i] += anchor.days_per_year * (1.0 - frac);
                    weights[i + 1] += anchor.days_per_year * frac;
                }
            }
        }
        WeightMode::PiecewiseLinear => {
            for (w, &x) in weights.iter_mut().zip(&grid) {
                *w = interp_days(&config.anchors, x);
            }
        }
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid(
            "scenario: friction grid received no probability mass",
        ));
    }
    Ok(grid
        .into_iter()
        .zip(weights.into_iter().map(|w| w / total))
        .collect())
}

/// Piecewise-linear interpolant through the anchor (friction, days) points,
/// constant outside the anchor span.
fn interp_days(anchors: &[WeatherAnchor], x: f64) -> f64 {
    let first = &anchors[0];
    let last = &anchors[anchors.len() - 1];
    if x <= first.friction {
        return first.days_per_year;
    }
    if x >= last.friction {
        return last.days_per_year;
    }
    for pair in anchors.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if x <= b.friction {
            let t = (x - a.friction) / (b.friction - a.friction);
            return a.days_per_year + t * (b.days_per_year - a.days_per_year);
        }
    }
    unreachable!("anchors cover x by the guards above")
}

/// One weighted cell of the situation space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Situation {
    pub friction_mean: f64,
    pub sigma: f64,
    /// Shared speed of both vehicles, m/s.
    pub speed: f64,
    pub supervised: bool,
    /// Probability of this cell; may be zero for grid cells that received no
    /// weather mass.
    pub weight: f64,
}

/// Immutable situation list plus the friction support shared by all cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SituationSpace {
    pub situations: Vec<Situation>,
    pub mu_bounds: (f64, f64),
}

impl SituationSpace {
    /// Situational friction distribution for one cell.
    pub fn distribution(&self, situation: &Situation) -> Result<TruncatedNormal> {
        TruncatedNormal::new(
            situation.friction_mean,
            situation.sigma,
            self.mu_bounds.0,
            self.mu_bounds.1,
        )
    }

    pub fn total_weight(&self) -> f64 {
        self.situations.iter().map(|s| s.weight).sum()
    }
}

/// Cartesian product of friction grid x velocities x supervision contexts,
/// with product weights. Iteration order is deterministic: friction ascending,
/// then velocity ascending, then unsupervised before supervised.
pub fn build_situations(config: &ScenarioConfig) -> Result<SituationSpace> {
    let weights = friction_weights(config)?;
    let velocity_weight = 1.0 / config.velocities_kmh.len() as f64;
    let p_sup = config.supervision_probability;
    let mut situations = Vec::with_capacity(weights.len() * config.velocities_kmh.len() * 2);
    for &(friction, w_friction) in &weights {
        let sigma = dispersion(friction, config);
        for &v_kmh in &config.velocities_kmh {
            let speed = v_kmh * KMH_TO_MPS;
            for (supervised, w_sup) in [(false, 1.0 - p_sup), (true, p_sup)] {
                situations.push(Situation {
                    friction_mean: friction,
                    sigma,
                    speed,
                    supervised,
                    weight: w_friction * velocity_weight * w_sup,
                });
            }
        }
    }
    Ok(SituationSpace {
        situations,
        mu_bounds: config.mu_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dispersion_endpoints_and_midpoint() {
        let cfg = ScenarioConfig::default();
        assert_relative_eq!(dispersion(0.14, &cfg), 0.075);
        assert_relative_eq!(dispersion(1.10, &cfg), 0.020);
        assert_relative_eq!(dispersion(0.62, &cfg), 0.0475, epsilon = 1e-12);
        // Clamped below the low anchor.
        assert_relative_eq!(dispersion(0.10, &cfg), 0.075);
    }

    #[test]
    fn dispersion_is_monotone_non_increasing() {
        let cfg = ScenarioConfig::default();
        let grid = cfg.friction_grid();
        for pair in grid.windows(2) {
            assert!(dispersion(pair[1], &cfg) <= dispersion(pair[0], &cfg));
        }
    }

    #[test]
    fn friction_weights_normalize_and_peak_at_dry() {
        for mode in [WeightMode::MassPreserving, WeightMode::PiecewiseLinear] {
            let cfg = ScenarioConfig {
                weight_mode: mode,
                ..ScenarioConfig::default()
            };
            let weights = friction_weights(&cfg).unwrap();
            assert_eq!(weights.len(), 15);
            let total: f64 = weights.iter().map(|(_, w)| w).sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-12);
            let (peak, _) = weights
                .iter()
                .fold((0.0, 0.0), |acc, &(f, w)| if w > acc.1 { (f, w) } else { acc });
            assert_relative_eq!(peak, 0.80, epsilon = 1e-12);
        }
    }

    // Hand evaluation of the piecewise-linear interpolant at the anchor 0.41:
    // the raw weight equals the anchor's 60 days, i.e. 60/465 of the anchor
    // total before grid-resampling renormalization.
    #[test]
    fn piecewise_interpolant_recovers_anchor_value() {
        let cfg = ScenarioConfig::default();
        assert_relative_eq!(interp_days(&cfg.anchors, 0.41), 60.0, epsilon = 1e-12);
        assert_relative_eq!(interp_days(&cfg.anchors, 0.75), 237.5, epsilon = 1e-12);
        // Constant extrapolation below the lowest anchor.
        assert_relative_eq!(interp_days(&cfg.anchors, 0.10), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn mass_preserving_conserves_anchor_mean() {
        let cfg = ScenarioConfig::default();
        let weights = friction_weights(&cfg).unwrap();
        let mean: f64 = weights.iter().map(|(f, w)| f * w).sum();
        let anchor_total: f64 = cfg.anchors.iter().map(|a| a.days_per_year).sum();
        let anchor_mean: f64 = cfg
            .anchors
            .iter()
            .map(|a| a.friction * a.days_per_year / anchor_total)
            .sum();
        assert_relative_eq!(mean, anchor_mean, epsilon = 1e-12);
    }

    #[test]
    fn default_space_has_150_situations_summing_to_one() {
        let cfg = ScenarioConfig::default();
        let space = build_situations(&cfg).unwrap();
        assert_eq!(space.situations.len(), 15 * 5 * 2);
        assert_relative_eq!(space.total_weight(), 1.0, epsilon = 1e-12);
        for s in &space.situations {
            assert!(s.sigma >= 0.02 && s.sigma <= 0.075);
            assert!(s.weight >= 0.0);
        }
    }

    #[test]
    fn marginalizing_recovers_friction_weights() {
        let cfg = ScenarioConfig::default();
        let weights = friction_weights(&cfg).unwrap();
        let space = build_situations(&cfg).unwrap();
        for (f, w) in weights {
            let marginal: f64 = space
                .situations
                .iter()
                .filter(|s| (s.friction_mean - f).abs() < 1e-12)
                .map(|s| s.weight)
                .sum();
            assert_relative_eq!(marginal, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_is_uniform_and_inside_range() {
        let cfg = ScenarioConfig::default();
        let grid = cfg.friction_grid();
        assert_relative_eq!(grid[0], 0.10);
        assert_relative_eq!(*grid.last().unwrap(), 0.80, epsilon = 1e-12);
        for pair in grid.windows(2) {
            assert_relative_eq!(pair[1] - pair[0], 0.05, epsilon = 1e-12);
        }
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = ScenarioConfig::default();
        cfg.anchors.clear();
        assert!(friction_weights(&cfg).is_err());

        let cfg = ScenarioConfig {
            supervision_probability: 1.5,
            ..ScenarioConfig::default()
        };
        assert!(cfg.validate().is_err());

        let cfg = ScenarioConfig {
            velocities_kmh: vec![200.0],
            ..ScenarioConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
