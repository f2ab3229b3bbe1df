//! The principal's problem when the high type is the one tempted to
//! imitate.
//!
//! The low type's participation constraint and the high type's incentive
//! constraint bind. The high type gets second-best effort; the low type's
//! effort is distorted downward, either by the interior first-order
//! condition (high type's participation slack) or by the binding
//! participation constraint of the high type.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::agent::{self, LinearContract};
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{AgentType, ModelParams};
use crate::root::{brent, Root, Tolerance};

use AgentType::{High, Low};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SolverSettings {
    pub root: Tolerance,
    /// Slack magnitude treated as a binding constraint.
    pub binding: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            root: Tolerance::default(),
            binding: 1e-8,
        }
    }
}

/// Which constraints shape the low type's contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Regime {
    /// High type's participation constraint is slack; interior FOC.
    PchSlack,
    /// High type's participation constraint binds.
    PchBinding,
    /// Only the high type is contracted.
    LTypeExcluded,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::PchSlack => "pch_slack",
            Regime::PchBinding => "pch_binding",
            Regime::LTypeExcluded => "l_type_excluded",
        }
    }
}

/// The optimal pair of contracts with everything needed to audit it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ContractMenu {
    pub contract_h: LinearContract,
    /// `None` when the low type is excluded.
    pub contract_l: Option<LinearContract>,
    pub mu_h_star: f64,
    pub mu_l_star: f64,
    /// High type's effort on the low type's contract.
    pub mu_hl_star: f64,
    pub ce_h_offered: f64,
    pub ce_l_offered: f64,
    pub regime: Regime,
    pub icc_h_slack: f64,
    pub icc_l_slack: f64,
    pub pc_h_slack: f64,
    pub pc_l_slack: f64,
}

impl ContractMenu {
    pub fn contract(&self, designed_for: AgentType) -> Option<&LinearContract> {
        match designed_for {
            High => Some(&self.contract_h),
            Low => self.contract_l.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SecondBest {
    pub h: f64,
    pub l: f64,
}

/// Absolute first-order-condition residuals at the returned roots.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Residuals {
    pub second_best_h: f64,
    pub second_best_l: f64,
    pub effort_l: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SolveReport {
    pub menu: ContractMenu,
    pub principal_profit: f64,
    /// High type's certainty equivalent above `w_L`.
    pub rent: f64,
    pub second_best_efforts: SecondBest,
    pub residuals: Residuals,
    pub notes: Vec<String>,
}

fn second_best_residual(
    model: &CostModel,
    params: &ModelParams,
    agent: AgentType,
    mu: f64,
) -> Result<f64> {
    let theta = params.theta(agent);
    let risk = params.rho * params.sigma * params.sigma / (theta * theta);
    Ok(model.marginal_cost(mu)? * (1.0 + risk * model.second_derivative(mu)?) - theta)
}

fn second_best_root(
    model: &CostModel,
    params: &ModelParams,
    agent: AgentType,
    tol: &Tolerance,
) -> Result<Root> {
    brent(
        "second-best effort",
        |mu| second_best_residual(model, params, agent, mu),
        0.0,
        params.mu_max,
        tol,
    )
}

/// Effort maximizing `μθ − c(μ) − (ρ/2)(c′(μ)/θ)²σ²`: moral hazard without
/// screening.
pub fn second_best_effort(
    model: &CostModel,
    params: &ModelParams,
    agent: AgentType,
) -> Result<f64> {
    Ok(second_best_root(model, params, agent, &Tolerance::default())?.x)
}

/// Derivative of the rent in the low type's effort, written through
/// `c″(μ^{H,L})·∂μ^{H,L}/∂μ_L = (θ_H/θ_L)c″(μ_L)`.
fn rent_slope(model: &CostModel, params: &ModelParams, mu: f64) -> Result<f64> {
    let ratio = params.theta_h / params.theta_l;
    let imitation = agent::imitation_effort_unbounded(model, params, mu, High, Low)?;
    Ok(model.second_derivative(mu)? * (ratio * imitation - mu))
}

/// The bracketed numerator `θ_L − α/(1−α)·{…}` of the interior FOC.
fn slack_numerator(model: &CostModel, params: &ModelParams, mu: f64) -> Result<f64> {
    let odds = params.alpha / (1.0 - params.alpha);
    Ok(params.theta_l - odds * rent_slope(model, params, mu)?)
}

/// Residual of the low type's interior FOC; increasing in `μ`.
pub fn slack_residual(model: &CostModel, params: &ModelParams, mu: f64) -> Result<f64> {
    let risk = params.rho * params.sigma * params.sigma / (params.theta_l * params.theta_l);
    let lhs = model.marginal_cost(mu)? * (1.0 + risk * model.second_derivative(mu)?);
    Ok(lhs - slack_numerator(model, params, mu)?)
}

fn slack_root(model: &CostModel, params: &ModelParams, tol: &Tolerance) -> Result<Option<Root>> {
    let top = slack_residual(model, params, params.mu_max)?;
    if top < 0.0 && slack_numerator(model, params, params.mu_max)? < 0.0 {
        return Ok(None);
    }
    brent(
        "low-type FOC (PCH slack)",
        |mu| slack_residual(model, params, mu),
        0.0,
        params.mu_max,
        tol,
    )
    .map(Some)
}

/// Low type's effort when the high type's participation is slack.
///
/// `None` means the FOC numerator turned negative before a root was found:
/// the low type is not worth contracting.
pub fn effort_l_pch_slack(model: &CostModel, params: &ModelParams) -> Result<Option<f64>> {
    Ok(slack_root(model, params, &Tolerance::default())?.map(|r| r.x))
}

fn binding_root(model: &CostModel, params: &ModelParams, tol: &Tolerance) -> Result<Root> {
    let gap = params.w_h - params.w_l;
    if gap == 0.0 {
        return Ok(Root {
            x: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    if !(gap > 0.0) {
        return Err(Error::Domain {
            what: "w_h - w_l",
            requirement: "non-negative when PCH binds",
            value: gap,
        });
    }
    brent(
        "low-type effort (PCH binding)",
        |mu| Ok(agent::rent_unbounded(model, params, mu)? - gap),
        0.0,
        params.mu_max,
        tol,
    )
}

/// Low type's effort when the high type's participation binds: the rent
/// equals `w_H − w_L`.
pub fn effort_l_pch_binding(model: &CostModel, params: &ModelParams) -> Result<f64> {
    Ok(binding_root(model, params, &Tolerance::default())?.x)
}

/// Expected profit `Σ weight·(E[Z₁] − E[S(Z₁)])` of the contracts actually
/// offered, with each type at its best response to its own contract.
pub fn principal_profit(
    model: &CostModel,
    params: &ModelParams,
    contract_h: &LinearContract,
    contract_l: Option<&LinearContract>,
) -> Result<f64> {
    let mut total = 0.0;
    for (agent, contract) in [(High, Some(contract_h)), (Low, contract_l)] {
        let Some(contract) = contract else { continue };
        let effort = agent::best_response_effort(model, params, contract, agent)?;
        let drift = params.theta(agent) * effort;
        total += params.weight(agent) * (drift - contract.payment(drift));
    }
    Ok(total)
}

/// Profit of the menu that implements `mu_h` and `mu_l` with the low
/// type's participation and the high type's incentive constraint binding.
pub fn profit_with_binding_icch(
    model: &CostModel,
    params: &ModelParams,
    mu_h: f64,
    mu_l: f64,
) -> Result<f64> {
    let ce_h = params.w_l + agent::rent_integrand(model, params, mu_l)?;
    let contract_l = agent::build_contract(model, params, mu_l, params.w_l, Low)?;
    let contract_h = agent::build_contract(model, params, mu_h, ce_h, High)?;
    principal_profit(model, params, &contract_h, Some(&contract_l))
}

fn ce(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
) -> Result<f64> {
    Ok(agent::certainty_equivalent(model, params, contract, agent)?.value)
}

fn two_contract_menu(
    model: &CostModel,
    params: &ModelParams,
    regime: Regime,
    mu_h: f64,
    mu_l: f64,
    ce_h: f64,
) -> Result<ContractMenu> {
    let contract_l = agent::build_contract(model, params, mu_l, params.w_l, Low)?;
    let contract_h = agent::build_contract(model, params, mu_h, ce_h, High)?;
    let mu_hl = agent::best_response_effort(model, params, &contract_l, High)?;
    let hh = ce(model, params, &contract_h, High)?;
    let hl = ce(model, params, &contract_l, High)?;
    let ll = ce(model, params, &contract_l, Low)?;
    let lh = ce(model, params, &contract_h, Low)?;
    Ok(ContractMenu {
        contract_h,
        contract_l: Some(contract_l),
        mu_h_star: mu_h,
        mu_l_star: mu_l,
        mu_hl_star: mu_hl,
        ce_h_offered: ce_h,
        ce_l_offered: params.w_l,
        regime,
        icc_h_slack: hh - hl,
        icc_l_slack: ll - lh,
        pc_h_slack: hh - params.w_h,
        pc_l_slack: ll - params.w_l,
    })
}

fn excluded_menu(model: &CostModel, params: &ModelParams, mu_h: f64) -> Result<ContractMenu> {
    let contract_h = agent::build_contract(model, params, mu_h, params.w_h, High)?;
    let hh = ce(model, params, &contract_h, High)?;
    let lh = ce(model, params, &contract_h, Low)?;
    Ok(ContractMenu {
        contract_h,
        contract_l: None,
        mu_h_star: mu_h,
        mu_l_star: 0.0,
        mu_hl_star: 0.0,
        ce_h_offered: params.w_h,
        ce_l_offered: params.w_l,
        regime: Regime::LTypeExcluded,
        icc_h_slack: 0.0,
        icc_l_slack: params.w_l - lh,
        pc_h_slack: hh - params.w_h,
        pc_l_slack: 0.0,
    })
}

/// Solves the principal's problem with default tolerances.
pub fn solve(model: &CostModel, params: &ModelParams) -> Result<SolveReport> {
    solve_with(model, params, &SolverSettings::default())
}

pub fn solve_with(
    model: &CostModel,
    params: &ModelParams,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    model.validate()?;
    params.validate()?;
    let tol = &settings.root;
    let mut notes = Vec::new();

    let sb_h = second_best_root(model, params, High, tol)?;
    let sb_l = second_best_root(model, params, Low, tol)?;
    let mu_h = sb_h.x;
    let mut residuals = Residuals {
        second_best_h: sb_h.residual.abs(),
        second_best_l: sb_l.residual.abs(),
        effort_l: 0.0,
    };

    let menu = match slack_root(model, params, tol)? {
        None => {
            notes.push(String::from(
                "low-type FOC numerator negative on the effort bracket; low type excluded",
            ));
            excluded_menu(model, params, mu_h)?
        }
        Some(slack) => {
            let slack_rent = agent::rent_integrand(model, params, slack.x)?;
            let menu = if params.w_l + slack_rent >= params.w_h {
                residuals.effort_l = slack.residual.abs();
                two_contract_menu(
                    model,
                    params,
                    Regime::PchSlack,
                    mu_h,
                    slack.x,
                    params.w_l + slack_rent,
                )?
            } else {
                let bind = binding_root(model, params, tol)?;
                residuals.effort_l = bind.residual.abs();
                if bind.x > sb_l.x {
                    notes.push(format!(
                        "binding-PCH effort {:.6} exceeds the low type's second-best {:.6}; \
                         a menu with slack ICCH at second best earns more",
                        bind.x, sb_l.x
                    ));
                }
                two_contract_menu(model, params, Regime::PchBinding, mu_h, bind.x, params.w_h)?
            };

            let excluded = excluded_menu(model, params, mu_h)?;
            let with_l =
                principal_profit(model, params, &menu.contract_h, menu.contract_l.as_ref())?;
            let without_l = principal_profit(model, params, &excluded.contract_h, None)?;
            if without_l > with_l {
                notes.push(format!(
                    "contracting the low type lowers profit ({with_l:.6} < {without_l:.6}); low type excluded"
                ));
                residuals.effort_l = 0.0;
                excluded
            } else {
                menu
            }
        }
    };

    if menu.icc_l_slack < -settings.binding {
        return Err(Error::RegimeUnsupported {
            imitator: Low,
            slack: menu.icc_l_slack,
        });
    }
    let principal_profit =
        principal_profit(model, params, &menu.contract_h, menu.contract_l.as_ref())?;
    let rent = match menu.regime {
        Regime::LTypeExcluded => 0.0,
        _ => menu.ce_h_offered - params.w_l,
    };
    Ok(SolveReport {
        menu,
        principal_profit,
        rent,
        second_best_efforts: SecondBest { h: mu_h, l: sb_l.x },
        residuals,
        notes,
    })
}
