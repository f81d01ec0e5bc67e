//! Run configuration: a single TOML document whose defaults reproduce the
//! full study, so an empty file (or no file at all) is a valid configuration.

use crate::engine::{MarginGrid, UseCase};
use crate::error::{Error, Result};
use crate::handlers::{HandlerConfig, HandlerKind, ThresholdPolicy};
use crate::kinematics::{KinematicParams, LeaderBrakeParams};
use crate::scenario::ScenarioConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KinematicsConfig {
    /// Follower acceleration during the reaction time, m/s^2.
    pub max_accel: f64,
    pub gravity: f64,
    /// Follower braking deceleration, m/s^2. When absent it is calibrated
    /// against the worst-case distance target.
    pub min_brake: Option<f64>,
}

impl Default for KinematicsConfig {
    fn default() -> Self {
        Self {
            max_accel: 2.0,
            gravity: 9.81,
            min_brake: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeaderConfig {
    pub mass_kg: f64,
    /// Brake system force limit in newtons; absent means no cap.
    pub brake_force_limit_n: Option<f64>,
}

impl Default for LeaderConfig {
    fn default() -> Self {
        Self {
            mass_kg: 40_000.0,
            brake_force_limit_n: None,
        }
    }
}

/// Worst-case distance anchor used to resolve the follower braking constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CalibrationConfig {
    pub target_distance_m: f64,
    /// Label of the use case the target refers to.
    pub use_case: String,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            target_distance_m: 14.670,
            use_case: "A".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub kinematics: KinematicsConfig,
    pub leader: LeaderConfig,
    pub calibration: CalibrationConfig,
    pub use_cases: Vec<UseCase>,
    pub margin_search: MarginGrid,
    /// Handlers to evaluate, in report order.
    pub handlers: Vec<HandlerKind>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            kinematics: KinematicsConfig::default(),
            leader: LeaderConfig::default(),
            calibration: CalibrationConfig::default(),
            use_cases: vec![UseCase::new("A", 0.1), UseCase::new("B", 0.8)],
            margin_search: MarginGrid::default(),
            handlers: HandlerKind::ALL.to_vec(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: RunConfig = toml::from_str(&text)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.use_cases.is_empty() {
            return Err(Error::invalid("use_cases must not be empty"));
        }
        for uc in &self.use_cases {
            uc.validate()?;
        }
        if self.handlers.is_empty() {
            return Err(Error::invalid("handlers must not be empty"));
        }
        if !(self.kinematics.max_accel > 0.0) {
            return Err(Error::invalid("kinematics.max_accel must be > 0"));
        }
        if !(self.kinematics.gravity > 0.0) {
            return Err(Error::invalid("kinematics.gravity must be > 0"));
        }
        if let Some(b) = self.kinematics.min_brake {
            if !(b > 0.0) {
                return Err(Error::invalid("kinematics.min_brake must be > 0"));
            }
        }
        if !(self.calibration.target_distance_m > 0.0) {
            return Err(Error::invalid("calibration.target_distance_m must be > 0"));
        }
        if !self
            .use_cases
            .iter()
            .any(|uc| uc.label == self.calibration.use_case)
        {
            return Err(Error::invalid(format!(
                "calibration.use_case '{}' is not among the configured use_cases",
                self.calibration.use_case
            )));
        }
        self.leader_params().validate()?;
        self.margin_search.values()?;
        Ok(())
    }

    pub fn leader_params(&self) -> LeaderBrakeParams {
        LeaderBrakeParams {
            mass: self.leader.mass_kg,
            brake_force_limit: self.leader.brake_force_limit_n,
            gravity: self.kinematics.gravity,
        }
    }

    /// Kinematic constants with the resolved follower braking deceleration.
    /// The reaction time is a placeholder; evaluation substitutes each use
    /// case's value.
    pub fn kinematic_params(&self, min_brake: f64) -> KinematicParams {
        KinematicParams {
            reaction_time: self.use_cases[0].reaction_time,
            max_accel: self.kinematics.max_accel,
            min_brake,
            gravity: self.kinematics.gravity,
        }
    }

    pub fn calibration_use_case(&self) -> &UseCase {
        self.use_cases
            .iter()
            .find(|uc| uc.label == self.calibration.use_case)
            .expect("validated: calibration use case exists")
    }

    /// Strictest acceptable-uncertainty threshold over both contexts.
    pub fn strictest_threshold(&self) -> f64 {
        self.scenario
            .threshold_supervised
            .min(self.scenario.threshold_unsupervised)
    }

    /// Handler skeleton for a kind: margins and the static value are resolved
    /// later by the study pipeline. Constant-threshold handlers use the
    /// strictest adaptive threshold, so adaptive rows are a pure relaxation.
    pub fn handler_config(&self, kind: HandlerKind) -> HandlerConfig {
        let policy = if kind.is_adaptive() {
            ThresholdPolicy::Adaptive {
                supervised: self.scenario.threshold_supervised,
                unsupervised: self.scenario.threshold_unsupervised,
            }
        } else {
            ThresholdPolicy::Fixed {
                u_acceptable: self.strictest_threshold(),
            }
        };
        HandlerConfig::new(kind, policy, self.scenario.mu_bounds.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_reproduce_study_shape() {
        let config = RunConfig::default();
        config.validate().unwrap();
        assert_eq!(config.use_cases.len(), 2);
        assert_eq!(config.handlers.len(), 6);
        assert_eq!(config.strictest_threshold(), 1e-6);
    }

    #[test]
    fn empty_toml_equals_defaults() {
        let parsed: RunConfig = toml::from_str("").unwrap();
        assert_eq!(parsed, RunConfig::default());
    }

    #[test]
    fn partial_override_keeps_other_defaults() {
        let parsed: RunConfig = toml::from_str(
            r#"
            [scenario]
            supervision_probability = 0.25

            [kinematics]
            min_brake = 6.41
            "#,
        )
        .unwrap();
        assert_eq!(parsed.scenario.supervision_probability, 0.25);
        assert_eq!(parsed.scenario.velocities_kmh.len(), 5);
        assert_eq!(parsed.kinematics.min_brake, Some(6.41));
    }

    #[test]
    fn validation_names_offending_field() {
        let parsed: RunConfig = toml::from_str("[scenario]\nsupervision_probability = 2.0\n").unwrap();
        let err = parsed.validate().unwrap_err().to_string();
        assert!(err.contains("supervision_probability"), "{err}");
    }

    #[test]
    fn adaptive_kinds_get_adaptive_policy() {
        let config = RunConfig::default();
        let sup = config.handler_config(HandlerKind::Supervisor);
        assert_eq!(sup.policy, ThresholdPolicy::Fixed { u_acceptable: 1e-6 });
        let ad = config.handler_config(HandlerKind::AdaptiveSupervisor);
        assert_eq!(
            ad.policy,
            ThresholdPolicy::Adaptive {
                supervised: 1e-5,
                unsupervised: 1e-6
            }
        );
    }
}
