//! Discrete-time best response by backward induction.
//!
//! The state is the agent's accumulated net pay `x` (payment accrued so far
//! minus effort cost). With CARA utility the disutility `E[e^{−ρX₁}]` is
//! log-affine in `x`, so the value function is stored as `ln E[e^{−ρX₁} | x]`
//! on a small state grid and interpolated linearly in `x`. Each step
//! minimises that quantity over an effort grid; the Gaussian increment is
//! integrated by Gauss–Hermite quadrature, so the risk premium is recomputed
//! rather than taken from the closed form.

use alloc::vec::Vec;

use crate::agent::LinearContract;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{AgentType, ModelParams};
use crate::verify::quadrature::gauss_hermite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DpSettings {
    pub n_steps: usize,
    /// Points on `[0, mu_max]`, endpoints included.
    pub effort_points: usize,
    pub state_points: usize,
    pub quadrature_nodes: usize,
}

impl Default for DpSettings {
    fn default() -> Self {
        DpSettings {
            n_steps: 50,
            effort_points: 5001,
            state_points: 5,
            quadrature_nodes: 10,
        }
    }
}

impl DpSettings {
    /// Settings whose effort grid has (at most) the given spacing.
    pub fn with_spacing(mu_max: f64, spacing: f64) -> DpSettings {
        let cells = libm::ceil(mu_max / spacing - 1e-9).max(1.0) as usize;
        DpSettings {
            effort_points: cells + 1,
            ..DpSettings::default()
        }
    }

    pub fn spacing(&self, mu_max: f64) -> f64 {
        mu_max / (self.effort_points - 1) as f64
    }
}

/// Effort chosen at every (time step, state node).
#[derive(Debug, Clone, PartialEq)]
pub struct EffortPolicy {
    pub n_steps: usize,
    pub states: Vec<f64>,
    /// Row-major by time step.
    pub efforts: Vec<f64>,
}

impl EffortPolicy {
    pub fn effort(&self, step: usize, state: usize) -> f64 {
        self.efforts[step * self.states.len() + state]
    }

    /// Effort at time zero on the initial state.
    pub fn initial(&self) -> f64 {
        self.effort(0, self.states.len() / 2)
    }

    /// Largest minus smallest effort over all nodes.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .efforts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        hi - lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DpResult {
    pub policy: EffortPolicy,
    pub value_ce: f64,
    pub effort_spacing: f64,
    pub dt: f64,
}

fn interpolate(states: &[f64], values: &[f64], x: f64) -> f64 {
    let n = states.len();
    if n == 1 {
        return values[0];
    }
    let h = states[1] - states[0];
    let pos = (x - states[0]) / h;
    let i = (libm::floor(pos) as isize).clamp(0, n as isize - 2) as usize;
    let t = pos - i as f64;
    values[i] + t * (values[i + 1] - values[i])
}

fn log_sum_exp_weighted(terms: &[f64], weights: &[f64]) -> f64 {
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms
        .iter()
        .zip(weights)
        .map(|(t, w)| w * libm::exp(t - top))
        .sum();
    top + libm::log(sum)
}

/// Optimal effort policy of `agent` under `contract` over all adapted
/// effort choices on the grid, and its certainty equivalent.
pub fn dp_best_response(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
    settings: &DpSettings,
) -> Result<DpResult> {
    if settings.n_steps == 0
        || settings.effort_points < 2
        || settings.state_points == 0
        || settings.quadrature_nodes == 0
    {
        return Err(Error::Domain {
            what: "DP grid sizes",
            requirement: "non-empty (at least 2 effort points)",
            value: 0.0,
        });
    }
    let rho = params.rho;
    let dt = 1.0 / settings.n_steps as f64;
    let spacing = settings.spacing(params.mu_max);
    let (nodes, weights) = gauss_hermite(settings.quadrature_nodes);
    let shock = contract.slope * params.sigma * libm::sqrt(dt);
    let theta = params.theta(agent);

    let efforts: Vec<f64> = (0..settings.effort_points)
        .map(|i| i as f64 * spacing)
        .collect();
    let step_gain: Vec<f64> = efforts
        .iter()
        .map(|&mu| Ok((contract.slope * theta * mu - model.cost(mu)?) * dt))
        .collect::<Result<_>>()?;

    let half = (settings.state_points / 2) as f64;
    let width = 0.5 * (1.0 + shock.abs());
    let states: Vec<f64> = (0..settings.state_points)
        .map(|j| contract.intercept + (j as f64 - half) * width)
        .collect();

    // ln E[exp(−ρ X₁) | state] at the terminal date.
    let mut next: Vec<f64> = states.iter().map(|x| -rho * x).collect();
    let mut policy = alloc::vec![0.0; settings.n_steps * states.len()];
    let mut terms = alloc::vec![0.0; nodes.len()];

    for step in (0..settings.n_steps).rev() {
        let mut current = alloc::vec![0.0; states.len()];
        for (j, &x) in states.iter().enumerate() {
            let mut best = (f64::INFINITY, 0.0);
            for (&mu, &gain) in efforts.iter().zip(&step_gain) {
                for (t, &xi) in terms.iter_mut().zip(&nodes) {
                    *t = interpolate(&states, &next, x + gain + shock * xi);
                }
                let value = log_sum_exp_weighted(&terms, &weights);
                if value < best.0 {
                    best = (value, mu);
                }
            }
            current[j] = best.0;
            policy[step * states.len() + j] = best.1;
        }
        next = current;
    }

    let start = states.len() / 2;
    let value_ce = -next[start] / rho;
    if !value_ce.is_finite() {
        return Err(Error::Numeric("DP value not finite"));
    }
    Ok(DpResult {
        policy: EffortPolicy {
            n_steps: settings.n_steps,
            states,
            efforts: policy,
        },
        value_ce,
        effort_spacing: spacing,
        dt,
    })
}
