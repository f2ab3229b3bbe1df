//! The agent's side of the model: best responses to linear contracts,
//! imitation of the other type, the information rent, and the affine
//! sharing rule that implements a constant effort at a given certainty
//! equivalent.

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{AgentType, ModelParams};

/// Terminal payment `S(Z₁) = intercept + slope·Z₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct LinearContract {
    pub slope: f64,
    pub intercept: f64,
    pub designed_for: AgentType,
}

impl LinearContract {
    pub fn payment(&self, terminal_output: f64) -> f64 {
        self.intercept + self.slope * terminal_output
    }

    /// CARA risk premium `(ρ/2)β²σ²` borne by the agent.
    pub fn risk_premium(&self, params: &ModelParams) -> f64 {
        0.5 * params.rho * self.slope * self.slope * params.sigma * params.sigma
    }
}

/// Money-metric value of a (type, contract) pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertaintyEquivalent {
    pub value: f64,
    pub agent: AgentType,
    pub contract: AgentType,
    /// Effort the agent chooses under the contract.
    pub effort: f64,
}

fn bounded(what: &'static str, effort: f64, params: &ModelParams) -> Result<f64> {
    if effort > params.mu_max {
        Err(Error::BracketExceeded {
            what,
            effort,
            bound: params.mu_max,
        })
    } else {
        Ok(effort)
    }
}

/// Constant effort maximizing `βθμ − c(μ)`, i.e. `(c′)⁻¹(βθ)`.
pub fn best_response_effort(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
) -> Result<f64> {
    if !(contract.slope >= 0.0) {
        return Err(Error::Domain {
            what: "contract slope",
            requirement: "non-negative",
            value: contract.slope,
        });
    }
    let effort = model.marginal_cost_inverse(contract.slope * params.theta(agent))?;
    bounded("best response", effort, params)
}

/// Effort of type `k` on the contract designed to implement `effort_m` for
/// type `m`: `c′(μ^{k,m}) = (θ_k/θ_m)·c′(μ^m)`.
pub fn imitation_effort(
    model: &CostModel,
    params: &ModelParams,
    effort_m: f64,
    k: AgentType,
    m: AgentType,
) -> Result<f64> {
    let effort = imitation_effort_unbounded(model, params, effort_m, k, m)?;
    bounded("imitation effort", effort, params)
}

/// [`imitation_effort`] without the `mu_max` check, for residuals evaluated
/// across a whole bracket.
pub(crate) fn imitation_effort_unbounded(
    model: &CostModel,
    params: &ModelParams,
    effort_m: f64,
    k: AgentType,
    m: AgentType,
) -> Result<f64> {
    let marginal = model.marginal_cost(effort_m)?;
    if k == m {
        return Ok(effort_m);
    }
    model.marginal_cost_inverse(params.theta(k) / params.theta(m) * marginal)
}

/// Information rent of the high type over `w_L` when the low type's
/// contract implements constant effort `effort_l`:
/// `[c′(μ^{H,L})μ^{H,L} − c(μ^{H,L})] − [c′(μ_L)μ_L − c(μ_L)]`.
pub fn rent_integrand(model: &CostModel, params: &ModelParams, effort_l: f64) -> Result<f64> {
    let imitation = imitation_effort(model, params, effort_l, AgentType::High, AgentType::Low)?;
    Ok(model.surplus(imitation)? - model.surplus(effort_l)?)
}

pub(crate) fn rent_unbounded(
    model: &CostModel,
    params: &ModelParams,
    effort_l: f64,
) -> Result<f64> {
    let imitation =
        imitation_effort_unbounded(model, params, effort_l, AgentType::High, AgentType::Low)?;
    Ok(model.surplus(imitation)? - model.surplus(effort_l)?)
}

/// Affine sharing rule under which a type-`agent` agent optimally exerts
/// `effort` and obtains certainty equivalent `ce`.
///
/// Slope `c′(μ)/θ`; intercept `w + c(μ) − c′(μ)μ + (ρ/2)(c′(μ)/θ)²σ²`.
pub fn build_contract(
    model: &CostModel,
    params: &ModelParams,
    effort: f64,
    ce: f64,
    agent: AgentType,
) -> Result<LinearContract> {
    if !(effort >= 0.0) {
        return Err(Error::Domain {
            what: "effort",
            requirement: "non-negative",
            value: effort,
        });
    }
    bounded("contract effort", effort, params)?;
    let marginal = model.marginal_cost(effort)?;
    let slope = marginal / params.theta(agent);
    let mut contract = LinearContract {
        slope,
        intercept: 0.0,
        designed_for: agent,
    };
    contract.intercept =
        ce + model.cost(effort)? - marginal * effort + contract.risk_premium(params);
    Ok(contract)
}

/// Closed-form CARA certainty equivalent of `agent` under `contract`,
/// `γ + βθμ* − c(μ*) − (ρ/2)β²σ²` at the best response `μ*`.
pub fn certainty_equivalent(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
) -> Result<CertaintyEquivalent> {
    let effort = best_response_effort(model, params, contract, agent)?;
    let value = ce_at_effort(model, params, contract, agent, effort)?;
    Ok(CertaintyEquivalent {
        value,
        agent,
        contract: contract.designed_for,
        effort,
    })
}

/// Certainty equivalent of exerting a given constant effort under `contract`.
pub fn ce_at_effort(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
    effort: f64,
) -> Result<f64> {
    Ok(
        contract.intercept + contract.slope * params.theta(agent) * effort
            - model.cost(effort)?
            - contract.risk_premium(params),
    )
}
