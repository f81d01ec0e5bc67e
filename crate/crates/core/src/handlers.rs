//! Uncertainty handlers: the four runtime patterns plus two static baselines.
//!
//! Each handler maps a situational friction estimate and a threshold policy to
//! a single assumed friction `mu_safe` that downstream kinematics may rely on.
//! Supervisor kinds consume a point estimate (prediction plus exceedance
//! uncertainty) and overwrite it with a worst-case default when the
//! uncertainty is not acceptable. Margin-selector kinds consume the full
//! distribution and pick the least conservative value whose exceedance stays
//! within the threshold.

use crate::error::{Error, Result};
use crate::truncnorm::{FrictionEstimate, TruncatedNormal};
use serde::{Deserialize, Serialize};

/// Acceptable-uncertainty threshold, fixed or adapted to supervision context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdPolicy {
    Fixed { u_acceptable: f64 },
    Adaptive { supervised: f64, unsupervised: f64 },
}

impl ThresholdPolicy {
    /// Threshold for the given supervision context.
    pub fn resolve(&self, supervised: bool) -> f64 {
        match *self {
            ThresholdPolicy::Fixed { u_acceptable } => u_acceptable,
            ThresholdPolicy::Adaptive {
                supervised: s,
                unsupervised: u,
            } => {
                if supervised {
                    s
                } else {
                    u
                }
            }
        }
    }

    /// Strictest threshold over all contexts.
    pub fn strictest(&self) -> f64 {
        match *self {
            ThresholdPolicy::Fixed { u_acceptable } => u_acceptable,
            ThresholdPolicy::Adaptive {
                supervised,
                unsupervised,
            } => supervised.min(unsupervised),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, u: f64| {
            if u > 0.0 && u <= 1.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!(
                    "threshold {name} must be in (0, 1], got {u}"
                )))
            }
        };
        match *self {
            ThresholdPolicy::Fixed { u_acceptable } => check("u_acceptable", u_acceptable),
            ThresholdPolicy::Adaptive {
                supervised,
                unsupervised,
            } => {
                check("supervised", supervised)?;
                check("unsupervised", unsupervised)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandlerKind {
    WorstCase,
    StaticDesignTime,
    Supervisor,
    AdaptiveSupervisor,
    MarginSelector,
    AdaptiveMarginSelector,
}

impl HandlerKind {
    pub const ALL: [HandlerKind; 6] = [
        HandlerKind::WorstCase,
        HandlerKind::StaticDesignTime,
        HandlerKind::Supervisor,
        HandlerKind::AdaptiveSupervisor,
        HandlerKind::MarginSelector,
        HandlerKind::AdaptiveMarginSelector,
    ];

    pub fn is_supervisor(&self) -> bool {
        matches!(self, HandlerKind::Supervisor | HandlerKind::AdaptiveSupervisor)
    }

    pub fn is_margin_selector(&self) -> bool {
        matches!(
            self,
            HandlerKind::MarginSelector | HandlerKind::AdaptiveMarginSelector
        )
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            HandlerKind::AdaptiveSupervisor | HandlerKind::AdaptiveMarginSelector
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            HandlerKind::WorstCase => "worst_case",
            HandlerKind::StaticDesignTime => "static_design_time",
            HandlerKind::Supervisor => "supervisor",
            HandlerKind::AdaptiveSupervisor => "adaptive_supervisor",
            HandlerKind::MarginSelector => "margin_selector",
            HandlerKind::AdaptiveMarginSelector => "adaptive_margin_selector",
        }
    }
}

/// Safety margin added to the point prediction before supervision, per
/// supervision context. Fixed-threshold supervisors use the same value in both
/// contexts; the adaptive supervisor may tune them independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupervisorMargin {
    pub supervised: f64,
    pub unsupervised: f64,
}

impl SupervisorMargin {
    pub fn uniform(delta_mu: f64) -> Self {
        Self {
            supervised: delta_mu,
            unsupervised: delta_mu,
        }
    }

    pub fn resolve(&self, supervised: bool) -> f64 {
        if supervised {
            self.supervised
        } else {
            self.unsupervised
        }
    }
}

/// Full configuration of one handler instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandlerConfig {
    pub kind: HandlerKind,
    pub policy: ThresholdPolicy,
    /// Worst-case default, equal to the scenario's upper friction bound.
    pub default_value: f64,
    /// Safety margin, supervisor kinds only.
    pub margin: SupervisorMargin,
    /// Design-time constant, `StaticDesignTime` only.
    pub static_value: Option<f64>,
}

impl HandlerConfig {
    pub fn new(kind: HandlerKind, policy: ThresholdPolicy, default_value: f64) -> Self {
        Self {
            kind,
            policy,
            default_value,
            margin: SupervisorMargin::uniform(0.0),
            static_value: None,
        }
    }

    pub fn with_margin(mut self, margin: SupervisorMargin) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_static_value(mut self, value: f64) -> Self {
        self.static_value = Some(value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        if !(self.default_value > 0.0) {
            return Err(Error::invalid("handler default_value must be > 0"));
        }
        if self.margin.supervised < 0.0 || self.margin.unsupervised < 0.0 {
            return Err(Error::invalid("handler margin must be >= 0"));
        }
        let adaptive_policy = matches!(self.policy, ThresholdPolicy::Adaptive { .. });
        if self.kind.is_adaptive() != adaptive_policy
            && !matches!(self.kind, HandlerKind::WorstCase | HandlerKind::StaticDesignTime)
        {
            return Err(Error::invalid(format!(
                "handler {}: threshold policy does not match handler kind",
                self.kind.label()
            )));
        }
        Ok(())
    }
}

/// Uncertainty supervisor: pass the point estimate through when its
/// uncertainty is acceptable (`u <= threshold`), otherwise substitute the
/// worst-case default.
pub fn handle_supervisor(estimate: &FrictionEstimate, threshold: f64, default: f64) -> Result<f64> {
    let FrictionEstimate::Point { value, uncertainty } = *estimate else {
        return Err(Error::invalid(
            "supervisor handlers require a point estimate",
        ));
    };
    if !(0.0..=1.0).contains(&uncertainty) {
        return Err(Error::invalid(format!(
            "point-estimate uncertainty must be in [0, 1], got {uncertainty}"
        )));
    }
    Ok(if uncertainty <= threshold {
        value
    } else {
        default
    })
}

/// Safety margin selector: least conservative value meeting the threshold.
pub fn handle_margin_selector(estimate: &FrictionEstimate, threshold: f64) -> Result<f64> {
    let FrictionEstimate::Distribution(dist) = estimate else {
        return Err(Error::invalid(
            "margin-selector handlers require a distribution estimate",
        ));
    };
    dist.exceedance_quantile(threshold)
}

/// Apply a configured handler to one situation.
///
/// The simulated estimator predicts the situational mean; supervisor kinds add
/// their safety margin (capped at the support's upper bound) and attach the
/// exceedance uncertainty of the resulting report.
pub fn handle(config: &HandlerConfig, dist: &TruncatedNormal, supervised: bool) -> Result<f64> {
    match config.kind {
        HandlerKind::WorstCase => Ok(config.default_value),
        HandlerKind::StaticDesignTime => config.static_value.ok_or_else(|| {
            Error::invalid("static_design_time handler has no static_value configured")
        }),
        HandlerKind::Supervisor | HandlerKind::AdaptiveSupervisor => {
            let value = (dist.mean() + config.margin.resolve(supervised)).min(dist.upper());
            let estimate = FrictionEstimate::Point {
                value,
                uncertainty: dist.exceedance(value),
            };
            handle_supervisor(
                &estimate,
                config.policy.resolve(supervised),
                config.default_value,
            )
        }
        HandlerKind::MarginSelector | HandlerKind::AdaptiveMarginSelector => {
            let estimate = FrictionEstimate::Distribution(*dist);
            handle_margin_selector(&estimate, config.policy.resolve(supervised))
        }
    }
}
