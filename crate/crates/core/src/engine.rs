//! Exact discrete-expectation evaluation of handlers over the situation
//! space, safety-margin grid search, follower-brake calibration, and
//! sensitivity sweeps.
//!
//! Everything here is deterministic: expectations are weighted sums taken in
//! situation-index order, so repeated runs produce bit-identical results.

use crate::error::{Error, Result};
use crate::handlers::{self, HandlerConfig, HandlerKind, SupervisorMargin, ThresholdPolicy};
use crate::kinematics::{
    leader_brake_decel, safe_distance_unclamped, KinematicParams, LeaderBrakeParams, SpeedPair,
};
use crate::scenario::{Situation, SituationSpace};
use crate::truncnorm::TruncatedNormal;
use serde::{Deserialize, Serialize};

/// Reaction-time profile under which the study is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCase {
    pub label: String,
    /// Reaction time rho in seconds.
    pub reaction_time: f64,
}

impl UseCase {
    pub fn new(label: impl Into<String>, reaction_time: f64) -> Self {
        Self {
            label: label.into(),
            reaction_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reaction_time > 0.0) {
            return Err(Error::invalid(format!(
                "use case '{}': reaction_time must be > 0",
                self.label
            )));
        }
        Ok(())
    }
}

/// Per-situation outcome of one handler evaluation.
///
/// `distance` is the signed safe-distance bracket; a negative value means the
/// follower out-brakes the leader and no gap is needed. The expectation is
/// taken over the signed value so that the use-case gap stays independent of
/// the assumed friction (the friction term carries no reaction-time
/// dependence); clamping per situation before averaging would break that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SituationOutcome {
    pub situation: Situation,
    pub mu_safe: f64,
    pub distance: f64,
    /// True when the bracket was negative, i.e. a point query through the
    /// distance formula would clamp to zero here.
    pub clamped: bool,
}

/// Expected safe distance and assumed friction for one (handler, use case).
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub handler: HandlerKind,
    pub use_case: String,
    pub expected_distance: f64,
    pub expected_mu: f64,
    pub rows: Vec<SituationOutcome>,
}

impl EvaluationResult {
    /// Whether the clamp fired in any situation (gap-constancy caveat).
    pub fn any_clamped(&self) -> bool {
        self.rows.iter().any(|r| r.clamped)
    }
}

/// Evaluate one handler over the whole situation space.
pub fn evaluate(
    handler: &HandlerConfig,
    space: &SituationSpace,
    use_case: &UseCase,
    kin: &KinematicParams,
    leader: &LeaderBrakeParams,
) -> Result<EvaluationResult> {
    handler.validate()?;
    use_case.validate()?;
    let total = space.total_weight();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "situation weights must sum to 1, got {total}"
        )));
    }
    let kin = kin.with_reaction_time(use_case.reaction_time);
    let mut rows = Vec::with_capacity(space.situations.len());
    let mut expected_distance = 0.0;
    let mut expected_mu = 0.0;
    for situation in &space.situations {
        let dist = space.distribution(situation)?;
        let mu_safe = handlers::handle(handler, &dist, situation.supervised)?;
        let decel = leader_brake_decel(mu_safe, leader)?;
        let raw = safe_distance_unclamped(&SpeedPair::equal(situation.speed), &kin, decel)?;
        expected_distance += situation.weight * raw;
        expected_mu += situation.weight * mu_safe;
        rows.push(SituationOutcome {
            situation: *situation,
            mu_safe,
            distance: raw,
            clamped: raw < 0.0,
        });
    }
    Ok(EvaluationResult {
        handler: handler.kind,
        use_case: use_case.label.clone(),
        expected_distance,
        expected_mu,
        rows,
    })
}

/// Search grid for the supervisor safety margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MarginGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for MarginGrid {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 0.60,
            step: 0.005,
        }
    }
}

impl MarginGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || self.max < self.min {
            return Err(Error::invalid(
                "margin grid requires step > 0 and max >= min",
            ));
        }
        let n = ((self.max - self.min) / self.step).round() as usize;
        Ok((0..=n).map(|i| self.min + i as f64 * self.step).collect())
    }
}

/// Grid-search the safety margin minimizing the expected safe distance.
///
/// Fixed-threshold supervisors share one margin across contexts. The adaptive
/// supervisor tunes the margin per supervision context; the contexts partition
/// the situation space, so the two one-dimensional searches are independent.
/// Ties break toward the smallest margin.
pub fn optimize_delta_mu(
    handler: &HandlerConfig,
    grid: &MarginGrid,
    space: &SituationSpace,
    use_case: &UseCase,
    kin: &KinematicParams,
    leader: &LeaderBrakeParams,
) -> Result<SupervisorMargin> {
    if !handler.kind.is_supervisor() {
        return Err(Error::invalid(format!(
            "margin optimization applies to supervisor handlers, not {}",
            handler.kind.label()
        )));
    }
    let deltas = grid.values()?;
    let objective = |margin: SupervisorMargin, context: Option<bool>| -> Result<f64> {
        let cfg = handler.with_margin(margin);
        let result = evaluate(&cfg, space, use_case, kin, leader)?;
        Ok(match context {
            None => result.expected_distance,
            Some(supervised) => result
                .rows
                .iter()
                .filter(|r| r.situation.supervised == supervised)
                .map(|r| r.situation.weight * r.distance)
                .sum(),
        })
    };
    let search = |context: Option<bool>| -> Result<f64> {
        let mut best = (deltas[0], f64::INFINITY);
        for &delta in &deltas {
            let value = objective(SupervisorMargin::uniform(delta), context)?;
            if value < best.1 {
                best = (delta, value);
            }
        }
        Ok(best.0)
    };
    match handler.policy {
        ThresholdPolicy::Fixed { .. } => Ok(SupervisorMargin::uniform(search(None)?)),
        ThresholdPolicy::Adaptive { .. } => Ok(SupervisorMargin {
            supervised: search(Some(true))?,
            unsupervised: search(Some(false))?,
        }),
    }
}

/// Solve for the follower braking deceleration that puts the worst-case
/// handler's expected distance at `target` for the given use case.
///
/// The expected distance is strictly decreasing in the braking deceleration,
/// so bisection applies; this also stays correct if the clamp fires.
pub fn calibrate_follower_brake(
    target: f64,
    use_case: &UseCase,
    space: &SituationSpace,
    kin: &KinematicParams,
    leader: &LeaderBrakeParams,
) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::invalid(format!(
            "calibration target must be > 0, got {target}"
        )));
    }
    let worst_case = HandlerConfig::new(
        HandlerKind::WorstCase,
        ThresholdPolicy::Fixed { u_acceptable: 1.0 },
        space.mu_bounds.1,
    );
    let expected_at = |min_brake: f64| -> Result<f64> {
        let kin = KinematicParams { min_brake, ..*kin };
        Ok(evaluate(&worst_case, space, use_case, &kin, leader)?.expected_distance)
    };
    let (mut lo, mut hi) = (1e-6, 1e6);
    if expected_at(hi)? > target {
        return Err(Error::numerical(format!(
            "calibration target {target} m is below the distance floor reachable \
             by any follower braking capability"
        )));
    }
    if expected_at(lo)? < target {
        return Err(Error::numerical(format!(
            "calibration target {target} m exceeds the distance at negligible \
             follower braking capability"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if expected_at(mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Derive the design-time static assumed friction.
///
/// A design-time estimator cannot observe the situational dispersion, so it
/// must budget for the worst dispersion in the operational profile: the value
/// is the exceedance quantile, at the strictest configured threshold, of a
/// distribution centered on the marginal mean friction with the maximum
/// situational dispersion.
pub fn design_time_static_value(space: &SituationSpace, threshold: f64) -> Result<f64> {
    if space.situations.is_empty() {
        return Err(Error::invalid("situation space is empty"));
    }
    let mean: f64 = space
        .situations
        .iter()
        .map(|s| s.weight * s.friction_mean)
        .sum();
    let sigma = space
        .situations
        .iter()
        .map(|s| s.sigma)
        .fold(f64::MIN, f64::max);
    TruncatedNormal::new(mean, sigma, space.mu_bounds.0, space.mu_bounds.1)?
        .exceedance_quantile(threshold)
}

/// One evaluated cell of the sensitivity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub handler: HandlerKind,
    pub mu: f64,
    pub sigma: f64,
    pub u_acceptable: f64,
    pub mu_safe: f64,
    pub distance: f64,
}

/// Evaluate handlers over a grid of (mu, sigma, u_acceptable) at a fixed
/// speed. Output ordering is (handler, mu, sigma, u), all ascending in their
/// input order.
#[allow(clippy::too_many_arguments)]
pub fn sensitivity_sweep(
    handlers_cfg: &[HandlerConfig],
    u_values: &[f64],
    sigma_set: &[f64],
    mu_set: &[f64],
    speed: f64,
    mu_bounds: (f64, f64),
    kin: &KinematicParams,
    leader: &LeaderBrakeParams,
) -> Result<Vec<SweepPoint>> {
    for &u in u_values {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::invalid(format!(
                "sweep threshold must be in (0, 1], got {u}"
            )));
        }
    }
    for &s in sigma_set {
        if !(s > 0.0) {
            return Err(Error::invalid(format!("sweep sigma must be > 0, got {s}")));
        }
    }
    let mut points = Vec::new();
    for cfg in handlers_cfg {
        for &mu in mu_set {
            for &sigma in sigma_set {
                let dist = TruncatedNormal::new(mu, sigma, mu_bounds.0, mu_bounds.1)?;
                for &u in u_values {
                    let swept = HandlerConfig {
                        policy: ThresholdPolicy::Fixed { u_acceptable: u },
                        ..*cfg
                    };
                    let mu_safe = handlers::handle(&swept, &dist, false)?;
                    let decel = leader_brake_decel(mu_safe, leader)?;
                    let distance =
                        safe_distance_unclamped(&SpeedPair::equal(speed), kin, decel)?.max(0.0);
                    points.push(SweepPoint {
                        handler: cfg.kind,
                        mu,
                        sigma,
                        u_acceptable: u,
                        mu_safe,
                        distance,
                    });
                }
            }
        }
    }
    Ok(points)
}

/// Log-spaced thresholds from `u_min` to `u_max`, endpoints included.
pub fn log_spaced(u_min: f64, u_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(u_min > 0.0 && u_min < u_max && u_max <= 1.0) {
        return Err(Error::invalid(format!(
            "sweep range requires 0 < u_min < u_max <= 1, got [{u_min}, {u_max}]"
        )));
    }
    if points < 2 {
        return Err(Error::invalid("sweep requires at least 2 points"));
    }
    let (a, b) = (u_min.ln(), u_max.ln());
    Ok((0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect())
}
