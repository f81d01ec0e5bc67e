//! RSS longitudinal safe-distance formula and friction-limited leader deceleration.
//!
//! The follower's stopping distance (reaction, acceleration during reaction,
//! braking) minus the leader's braking distance, clamped at zero. The leader's
//! deceleration is bounded by the traction limit `g * mu` and optionally by the
//! brake system's force limit.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Follower-side constants of the safe-distance formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicParams {
    /// Reaction time rho in seconds.
    pub reaction_time: f64,
    /// Maximum follower acceleration during the reaction time, m/s^2.
    pub max_accel: f64,
    /// Minimum guaranteed follower braking deceleration, m/s^2.
    pub min_brake: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
}

impl KinematicParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.reaction_time > 0.0 && self.reaction_time < 10.0) {
            return Err(Error::invalid(format!(
                "kinematics.reaction_time must be in (0, 10) s, got {}",
                self.reaction_time
            )));
        }
        if !(self.max_accel > 0.0) {
            return Err(Error::invalid("kinematics.max_accel must be > 0"));
        }
        if !(self.min_brake > 0.0) {
            return Err(Error::invalid("kinematics.min_brake must be > 0"));
        }
        if !(self.gravity > 0.0) {
            return Err(Error::invalid("kinematics.gravity must be > 0"));
        }
        Ok(())
    }

    /// Same parameters with a different reaction time.
    pub fn with_reaction_time(&self, reaction_time: f64) -> Self {
        Self {
            reaction_time,
            ..*self
        }
    }
}

/// Leader-side braking limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeaderBrakeParams {
    /// Leader mass in kg.
    pub mass: f64,
    /// Brake system force limit in newtons; `None` means no cap.
    pub brake_force_limit: Option<f64>,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
}

impl LeaderBrakeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::invalid("leader.mass must be > 0"));
        }
        if let Some(f) = self.brake_force_limit {
            if !(f > 0.0) {
                return Err(Error::invalid("leader.brake_force_limit must be > 0"));
            }
        }
        if !(self.gravity > 0.0) {
            return Err(Error::invalid("leader.gravity must be > 0"));
        }
        Ok(())
    }
}

/// Follower and leader speeds in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPair {
    pub follower: f64,
    pub leader: f64,
}

impl SpeedPair {
    /// Both vehicles at the same speed (established platoon).
    pub fn equal(speed: f64) -> Self {
        Self {
            follower: speed,
            leader: speed,
        }
    }
}

/// Effective leader deceleration for friction `mu`: `min(g * mu, F_limit / m)`.
pub fn leader_brake_decel(mu: f64, params: &LeaderBrakeParams) -> Result<f64> {
    params.validate()?;
    if !(mu > 0.0 && mu <= 2.0) {
        return Err(Error::invalid(format!(
            "friction coefficient must be in (0, 2], got {mu}"
        )));
    }
    let traction_limit = params.gravity * mu;
    Ok(match params.brake_force_limit {
        Some(force) => traction_limit.min(force / params.mass),
        None => traction_limit,
    })
}

/// The safe-distance bracket before the non-negativity clamp. Negative values
/// mean the leader's braking distance exceeds the follower's stopping distance.
pub fn safe_distance_unclamped(
    speeds: &SpeedPair,
    kin: &KinematicParams,
    leader_brake: f64,
) -> Result<f64> {
    kin.validate()?;
    if !(leader_brake > 0.0) {
        return Err(Error::invalid(format!(
            "leader braking deceleration must be > 0, got {leader_brake}"
        )));
    }
    if speeds.follower < 0.0 || speeds.leader < 0.0 {
        return Err(Error::invalid("speeds must be non-negative"));
    }
    let rho = kin.reaction_time;
    let reaction = speeds.follower * rho;
    let accel = 0.5 * kin.max_accel * rho * rho;
    let v_after_reaction = speeds.follower + rho * kin.max_accel;
    let follower_braking = v_after_reaction * v_after_reaction / (2.0 * kin.min_brake);
    let leader_braking = speeds.leader * speeds.leader / (2.0 * leader_brake);
    Ok(reaction + accel + follower_braking - leader_braking)
}

/// RSS safe distance in meters, clamped at zero.
///
/// `leader_brake` is the effective leader deceleration, typically from
/// [`leader_brake_decel`].
pub fn safe_distance(speeds: &SpeedPair, kin: &KinematicParams, leader_brake: f64) -> Result<f64> {
    Ok(safe_distance_unclamped(speeds, kin, leader_brake)?.max(0.0))
}
