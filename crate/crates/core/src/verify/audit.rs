use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::agent::{self, LinearContract};
use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{AgentType, ModelParams};
use crate::solver::ContractMenu;
use crate::verify::dp::{dp_best_response, DpSettings};
use crate::verify::sim::{simulate_ce, McSettings, PathExecutor};

use AgentType::{High, Low};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct AuditSettings {
    pub mc: McSettings,
    pub dp: DpSettings,
    /// Largest `|slack|` accepted for a binding constraint.
    pub binding: f64,
    /// Monte Carlo acceptance band in standard errors.
    pub mc_sigmas: f64,
    /// DP value tolerance as a multiple of `Δt + effort spacing`.
    pub dp_factor: f64,
}

impl Default for AuditSettings {
    fn default() -> Self {
        AuditSettings {
            mc: McSettings::default(),
            dp: DpSettings::default(),
            binding: 1e-8,
            mc_sigmas: 3.0,
            dp_factor: 5.0,
        }
    }
}

/// One agent type evaluated on one contract, three ways.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairAudit {
    pub agent: AgentType,
    pub contract: AgentType,
    pub closed_form_ce: f64,
    pub closed_form_effort: f64,
    pub mc_ce: f64,
    pub mc_std_error: f64,
    pub dp_ce: f64,
    pub dp_effort: f64,
    pub dp_policy_spread: f64,
}

/// Constraint slacks recomputed from closed-form certainty equivalents.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlackTable {
    pub icc_h: f64,
    pub icc_l: f64,
    pub pc_h: f64,
    pub pc_l: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditReport {
    pub pairs: Vec<PairAudit>,
    pub slacks: SlackTable,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn pair(&self, agent: AgentType, contract: AgentType) -> Option<&PairAudit> {
        self.pairs
            .iter()
            .find(|p| p.agent == agent && p.contract == contract)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    /// Passes when `value <= tolerance`.
    fn at_most(&mut self, name: String, value: f64, tolerance: f64) {
        let passed = value <= tolerance;
        self.0.push(Check {
            name,
            value,
            tolerance,
            passed,
        });
    }

    /// Passes when `value >= -tolerance`.
    fn at_least(&mut self, name: String, value: f64, tolerance: f64) {
        let passed = value >= -tolerance;
        self.0.push(Check {
            name,
            value,
            tolerance,
            passed,
        });
    }
}

fn pair_label(agent: AgentType, contract: AgentType) -> String {
    format!("{} on {}", agent.label(), contract.label())
}

#[allow(clippy::too_many_arguments)]
fn audit_pair<E: PathExecutor + ?Sized>(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    slot: AgentType,
    agent: AgentType,
    settings: &AuditSettings,
    executor: &E,
    checks: &mut Checks,
) -> Result<Option<PairAudit>> {
    let label = pair_label(agent, slot);
    let cf = match agent::certainty_equivalent(model, params, contract, agent) {
        Ok(cf) => cf,
        Err(_) => {
            checks.0.push(Check {
                name: format!("closed form [{label}]"),
                value: f64::NAN,
                tolerance: 0.0,
                passed: false,
            });
            return Ok(None);
        }
    };
    let mc = simulate_ce(
        model,
        params,
        contract,
        agent,
        cf.effort,
        &settings.mc,
        executor,
    )?;
    let dp = dp_best_response(model, params, contract, agent, &settings.dp)?;

    let cell = dp.effort_spacing;
    let mc_band = (settings.mc_sigmas * mc.std_error).max(1e-12);
    checks.at_most(
        format!("monte carlo [{label}]"),
        (mc.ce - cf.value).abs(),
        mc_band,
    );
    checks.at_most(
        format!("dp value [{label}]"),
        (dp.value_ce - cf.value).abs(),
        settings.dp_factor * (dp.dt + cell),
    );
    checks.at_most(
        format!("dp effort [{label}]"),
        (dp.policy.initial() - cf.effort).abs(),
        cell * (1.0 + 1e-9),
    );
    checks.at_most(
        format!("dp policy constant [{label}]"),
        dp.policy.spread(),
        cell * (1.0 + 1e-9),
    );

    Ok(Some(PairAudit {
        agent,
        contract: slot,
        closed_form_ce: cf.value,
        closed_form_effort: cf.effort,
        mc_ce: mc.ce,
        mc_std_error: mc.std_error,
        dp_ce: dp.value_ce,
        dp_effort: dp.policy.initial(),
        dp_policy_spread: dp.policy.spread(),
    }))
}

/// Audits a menu: every offered contract is evaluated for both types in
/// closed form, by Monte Carlo and by the DP oracle, and the incentive and
/// participation constraints are recomputed from the closed forms.
///
/// Failures are recorded as report entries, not errors; `Err` is reserved
/// for invalid oracle settings.
pub fn audit_menu<E: PathExecutor + ?Sized>(
    model: &CostModel,
    params: &ModelParams,
    menu: &ContractMenu,
    settings: &AuditSettings,
    executor: &E,
) -> Result<AuditReport> {
    let mut checks = Checks(Vec::new());
    let mut pairs = Vec::new();
    for designed_for in [High, Low] {
        let Some(contract) = menu.contract(designed_for) else {
            continue;
        };
        for agent in [High, Low] {
            if let Some(pair) = audit_pair(
                model,
                params,
                contract,
                designed_for,
                agent,
                settings,
                executor,
                &mut checks,
            )? {
                pairs.push(pair);
            }
        }
    }

    let ce = |agent: AgentType, contract: AgentType| {
        pairs
            .iter()
            .find(|p: &&PairAudit| p.agent == agent && p.contract == contract)
            .map(|p| p.closed_form_ce)
            .unwrap_or(f64::NAN)
    };
    let tol = settings.binding;
    let slacks = match menu.contract_l {
        Some(_) => SlackTable {
            icc_h: ce(High, High) - ce(High, Low),
            icc_l: ce(Low, Low) - ce(Low, High),
            pc_h: ce(High, High) - params.w_h,
            pc_l: ce(Low, Low) - params.w_l,
        },
        None => SlackTable {
            icc_h: 0.0,
            icc_l: params.w_l - ce(Low, High),
            pc_h: ce(High, High) - params.w_h,
            pc_l: 0.0,
        },
    };
    if menu.contract_l.is_some() {
        checks.at_most(String::from("pc_l binding"), slacks.pc_l.abs(), tol);
        checks.at_most(String::from("icc_h binding"), slacks.icc_h.abs(), tol);
    }
    checks.at_least(String::from("icc_l"), slacks.icc_l, tol);
    checks.at_least(String::from("pc_h"), slacks.pc_h, tol);

    if menu.contract_l.is_some() {
        // The high type gains exactly the rent over the low type on the
        // low type's contract.
        let low = pairs.iter().find(|p| p.agent == Low && p.contract == Low);
        let gap = ce(High, Low) - ce(Low, Low);
        let consistent = match low {
            Some(low) => agent::rent_integrand(model, params, low.closed_form_effort)
                .map(|rent| (rent - gap).abs() <= 1e-10 && gap >= -1e-12)
                .unwrap_or(false),
            None => false,
        };
        checks.0.push(Check {
            name: String::from("rent ordering [H over L on L]"),
            value: gap,
            tolerance: 1e-10,
            passed: consistent,
        });
    }

    let checks = checks.0;
    let passed = checks.iter().all(|c| c.passed);
    Ok(AuditReport {
        pairs,
        slacks,
        checks,
        passed,
    })
}
