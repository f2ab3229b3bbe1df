use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The agent's private productivity type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AgentType {
    #[cfg_attr(feature = "serde", serde(rename = "H"))]
    High,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    Low,
}

impl AgentType {
    pub const BOTH: [AgentType; 2] = [AgentType::High, AgentType::Low];

    pub fn other(self) -> AgentType {
        match self {
            AgentType::High => AgentType::Low,
            AgentType::Low => AgentType::High,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AgentType::High => "H",
            AgentType::Low => "L",
        }
    }
}

/// Economy parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ModelParams {
    /// Output drift per unit effort of the low type.
    pub theta_l: f64,
    /// Output drift per unit effort of the high type; must exceed `theta_l`.
    pub theta_h: f64,
    /// CARA coefficient.
    pub rho: f64,
    /// Output volatility.
    pub sigma: f64,
    /// Probability of the high type.
    pub alpha: f64,
    /// Reservation certainty equivalent of the low type.
    pub w_l: f64,
    /// Reservation certainty equivalent of the high type.
    pub w_h: f64,
    /// Upper end of every effort bracket.
    pub mu_max: f64,
}

impl ModelParams {
    pub fn theta(&self, agent: AgentType) -> f64 {
        match agent {
            AgentType::High => self.theta_h,
            AgentType::Low => self.theta_l,
        }
    }

    pub fn reservation(&self, agent: AgentType) -> f64 {
        match agent {
            AgentType::High => self.w_h,
            AgentType::Low => self.w_l,
        }
    }

    /// Probability weight of a type in the principal's objective.
    pub fn weight(&self, agent: AgentType) -> f64 {
        match agent {
            AgentType::High => self.alpha,
            AgentType::Low => 1.0 - self.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some(err) => Err(err),
            None => Ok(()),
        }
    }

    /// Every invariant violation, not just the first.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        let mut bad = |field, reason| out.push(Error::InvalidParameter { field, reason });
        let positive = |x: f64| x.is_finite() && x > 0.0;

        if !positive(self.theta_l) {
            bad("theta_l", "must be finite and positive");
        }
        if !self.theta_h.is_finite() {
            bad("theta_h", "must be finite");
        } else if !(self.theta_h > self.theta_l) {
            bad("theta_h", "must exceed theta_l");
        }
        if !positive(self.rho) {
            bad("rho", "must be finite and positive");
        }
        if !positive(self.sigma) {
            bad("sigma", "must be finite and positive");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            bad("alpha", "must lie strictly between 0 and 1");
        }
        if !self.w_l.is_finite() {
            bad("w_l", "must be finite");
        }
        if !self.w_h.is_finite() {
            bad("w_h", "must be finite");
        }
        if !positive(self.mu_max) {
            bad("mu_max", "must be finite and positive");
        }
        out
    }
}
