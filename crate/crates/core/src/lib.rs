//! Quantitative evaluation of runtime uncertainty handlers for data-driven
//! friction estimates in a vehicle-platooning safe-distance function.
//!
//! The crate evaluates six handling strategies — a worst-case baseline, a
//! design-time static estimate, and four runtime patterns (uncertainty
//! supervisor, adaptive uncertainty supervisor, safety margin selector,
//! adaptive safety margin selector) — over a discrete weighted situation
//! space of weather-driven friction conditions, speeds, and supervision
//! states. For each handler it reports the expected required safe distance
//! and the expected assumed friction, plus sensitivity sweeps over the
//! accepted uncertainty threshold and the estimator dispersion.

pub mod config;
pub mod engine;
pub mod error;
pub mod handlers;
pub mod kinematics;
pub mod report;
pub mod scenario;
pub mod study;
pub mod truncnorm;

pub use config::RunConfig;
pub use engine::{EvaluationResult, MarginGrid, SweepPoint, UseCase};
pub use error::{Error, Result};
pub use handlers::{HandlerConfig, HandlerKind, SupervisorMargin, ThresholdPolicy};
pub use kinematics::{KinematicParams, LeaderBrakeParams, SpeedPair};
pub use scenario::{ScenarioConfig, Situation, SituationSpace};
pub use truncnorm::{FrictionEstimate, TruncatedNormal};
