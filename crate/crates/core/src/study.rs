//! End-to-end study pipeline: calibration, static-value derivation, margin
//! optimization, and evaluation of every (handler, use case) pair.

use crate::config::RunConfig;
use crate::engine::{
    calibrate_follower_brake, design_time_static_value, evaluate, optimize_delta_mu,
    EvaluationResult,
};
use crate::error::Result;
use crate::handlers::{HandlerConfig, HandlerKind, SupervisorMargin};
use crate::kinematics::KinematicParams;
use crate::scenario::{build_situations, SituationSpace};

/// Fully resolved study inputs: situation space, calibrated kinematics, and
/// per-handler configurations with margins and static values filled in.
#[derive(Debug, Clone)]
pub struct PreparedStudy {
    pub space: SituationSpace,
    pub kin: KinematicParams,
    /// True when `min_brake` was calibrated rather than configured.
    pub calibrated: bool,
    pub static_value: Option<f64>,
    pub handlers: Vec<HandlerConfig>,
}

impl PreparedStudy {
    pub fn margins(&self) -> Vec<(HandlerKind, SupervisorMargin)> {
        self.handlers
            .iter()
            .filter(|h| h.kind.is_supervisor())
            .map(|h| (h.kind, h.margin))
            .collect()
    }
}

/// Resolve every derived quantity the evaluation needs.
///
/// The safety-margin optimum does not depend on the reaction time (the
/// friction-dependent term of the distance formula is reaction-free), so
/// margins are optimized once under the calibration use case and shared by
/// all use-case rows.
pub fn prepare(config: &RunConfig) -> Result<PreparedStudy> {
    config.validate()?;
    let space = build_situations(&config.scenario)?;
    let leader = config.leader_params();
    let calibration_uc = config.calibration_use_case();

    let (min_brake, calibrated) = match config.kinematics.min_brake {
        Some(value) => (value, false),
        None => {
            // Calibrate against a provisional value; the worst-case expected
            // distance only depends on min_brake through the formula itself.
            let kin = config.kinematic_params(1.0);
            (
                calibrate_follower_brake(
                    config.calibration.target_distance_m,
                    calibration_uc,
                    &space,
                    &kin,
                    &leader,
                )?,
                true,
            )
        }
    };
    let kin = config.kinematic_params(min_brake);

    let needs_static = config.handlers.contains(&HandlerKind::StaticDesignTime);
    let static_value = if needs_static {
        Some(design_time_static_value(&space, config.strictest_threshold())?)
    } else {
        None
    };

    let mut handlers = Vec::with_capacity(config.handlers.len());
    for &kind in &config.handlers {
        let mut cfg = config.handler_config(kind);
        if kind == HandlerKind::StaticDesignTime {
            cfg = cfg.with_static_value(static_value.expect("computed above"));
        }
        if kind.is_supervisor() {
            let margin = optimize_delta_mu(
                &cfg,
                &config.margin_search,
                &space,
                calibration_uc,
                &kin,
                &leader,
            )?;
            cfg = cfg.with_margin(margin);
        }
        handlers.push(cfg);
    }

    Ok(PreparedStudy {
        space,
        kin,
        calibrated,
        static_value,
        handlers,
    })
}

/// Evaluate every (use case, handler) pair, ordered by use case first and
/// handler declaration order second.
pub fn run(config: &RunConfig) -> Result<(PreparedStudy, Vec<EvaluationResult>)> {
    let prepared = prepare(config)?;
    let leader = config.leader_params();
    let mut results = Vec::with_capacity(config.use_cases.len() * prepared.handlers.len());
    for use_case in &config.use_cases {
        for handler in &prepared.handlers {
            results.push(evaluate(
                handler,
                &prepared.space,
                use_case,
                &prepared.kin,
                &leader,
            )?);
        }
    }
    Ok((prepared, results))
}
