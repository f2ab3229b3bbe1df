//! Command-line front end for the contract menu solver: configuration
//! files, report formats, parameter sweeps and the audit driver.

pub mod config;
pub mod error;
pub mod exec;
pub mod report;
pub mod sweep;

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use contract_menu_core::agent::{ce_at_effort, certainty_equivalent};
use contract_menu_core::solver::solve_with;
use contract_menu_core::verify::{audit_menu, simulate_ce, AuditReport, AuditSettings};
use contract_menu_core::{AgentType, ContractMenu, ModelParams, SolveReport};

pub use config::{parse_config, RunConfig};
pub use error::CliError;

use config::{ConfigErrors, FieldError};
use exec::Rayon;
use report::{write_json, SolveFile, VerifyFile};

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ConfigErrors(vec![FieldError {
            field: "file".into(),
            message: format!("{}: {e}", path.display()),
        }])
    })?;
    Ok(parse_config(&text)?)
}

/// Formats with six significant digits for the human-readable tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn io_err(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.into(),
        source,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err("<stdout>"))
}

pub fn render_solve(params: &ModelParams, report: &SolveReport) -> String {
    let m = &report.menu;
    let mut s = String::new();
    let _ = writeln!(s, "regime            {}", m.regime.label());
    let _ = writeln!(s, "mu_H*             {}", sig6(m.mu_h_star));
    let _ = writeln!(s, "mu_L*             {}", sig6(m.mu_l_star));
    let _ = writeln!(s, "mu_HL*            {}", sig6(m.mu_hl_star));
    let _ = writeln!(
        s,
        "second best H/L   {} / {}",
        sig6(report.second_best_efforts.h),
        sig6(report.second_best_efforts.l)
    );
    let _ = writeln!(s, "rent              {}", sig6(report.rent));
    let _ = writeln!(s, "principal profit  {}", sig6(report.principal_profit));
    let _ = writeln!(s);
    let _ = writeln!(s, "contract  slope         intercept     offered CE");
    let _ = writeln!(
        s,
        "H         {:<13} {:<13} {}",
        sig6(m.contract_h.slope),
        sig6(m.contract_h.intercept),
        sig6(m.ce_h_offered)
    );
    match &m.contract_l {
        Some(c) => {
            let _ = writeln!(
                s,
                "L         {:<13} {:<13} {}",
                sig6(c.slope),
                sig6(c.intercept),
                sig6(m.ce_l_offered)
            );
        }
        None => {
            let _ = writeln!(
                s,
                "L         (not contracted; outside option {})",
                sig6(params.w_l)
            );
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "slack     pc_L {}  icc_H {}  icc_L {}  pc_H {}",
        sig6(m.pc_l_slack),
        sig6(m.icc_h_slack),
        sig6(m.icc_l_slack),
        sig6(m.pc_h_slack)
    );
    for note in &report.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

/// `solve`: prints the menu and optionally writes the JSON report.
pub fn cmd_solve(
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<SolveReport, CliError> {
    let params = config.params();
    let report = solve_with(&config.cost, &params, &config.solver_settings())?;
    emit(stdout, &render_solve(&params, &report))?;
    if let Some(path) = out {
        let file = SolveFile {
            params,
            cost: config.cost,
            report: report.clone(),
        };
        write_json(path, &file)?;
    }
    Ok(report)
}

/// `sweep`: one solve per grid point, written as CSV.
pub fn cmd_sweep(
    config: &RunConfig,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<Vec<sweep::SweepRow>, CliError> {
    let grid = config.sweep.ok_or(CliError::MissingSweep)?;
    let rows = sweep::run_sweep(config)?;
    sweep::write_csv_file(out, grid.parameter, &rows)?;
    let failed = rows.iter().filter(|r| r.report().is_none()).count();
    emit(
        stdout,
        &format!(
            "{} points over {} in [{}, {}]; {} failed; written to {}\n",
            rows.len(),
            grid.parameter.name(),
            sig6(grid.from),
            sig6(grid.to),
            failed,
            out.display()
        ),
    )?;
    Ok(rows)
}

/// Command-line overrides of the `verify` config section.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOverrides {
    pub paths: Option<usize>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
}

impl VerifyOverrides {
    pub fn apply(&self, config: &RunConfig) -> Result<AuditSettings, CliError> {
        let mut config = *config;
        if let Some(n) = self.paths {
            config.verify.n_paths = n;
        }
        if let Some(n) = self.steps {
            config.verify.n_steps = n;
        }
        if let Some(s) = self.seed {
            config.verify.seed = s;
        }
        let mut errors = Vec::new();
        if config.verify.n_paths == 0 {
            errors.push(FieldError {
                field: "--paths".into(),
                message: "must be at least 1".into(),
            });
        }
        if config.verify.n_steps == 0 {
            errors.push(FieldError {
                field: "--steps".into(),
                message: "must be at least 1".into(),
            });
        }
        if !errors.is_empty() {
            return Err(ConfigErrors(errors).into());
        }
        Ok(config.audit_settings())
    }
}

pub fn render_audit(audit: &AuditReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "pair      closed form   monte carlo (SE)            dp value      dp effort"
    );
    for p in &audit.pairs {
        let _ = writeln!(
            s,
            "{} on {}    {:<13} {:<13} ({:<11}) {:<13} {}",
            p.agent.label(),
            p.contract.label(),
            sig6(p.closed_form_ce),
            sig6(p.mc_ce),
            sig6(p.mc_std_error),
            sig6(p.dp_ce),
            sig6(p.dp_effort)
        );
    }
    let _ = writeln!(s);
    for c in &audit.checks {
        let _ = writeln!(
            s,
            "{}  {:<36} value {:<13} tol {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            sig6(c.value),
            sig6(c.tolerance)
        );
    }
    let _ = writeln!(
        s,
        "audit {}",
        if audit.passed { "passed" } else { "FAILED" }
    );
    s
}

/// `verify`: solves (or reads a menu from a solve report), audits the menu
/// against both oracles and fails if any check fails. The report file is
/// written before the failure is returned.
pub fn cmd_verify(
    config: &RunConfig,
    overrides: &VerifyOverrides,
    menu_file: Option<&Path>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<VerifyFile, CliError> {
    let params = config.params();
    let settings = overrides.apply(config)?;
    let (solve, menu): (Option<SolveReport>, ContractMenu) = match menu_file {
        Some(path) => (None, report::read_solve_file(path)?.report.menu),
        None => {
            let report = solve_with(&config.cost, &params, &config.solver_settings())?;
            let menu = report.menu.clone();
            (Some(report), menu)
        }
    };
    let audit = audit_menu(&config.cost, &params, &menu, &settings, &Rayon)?;
    emit(stdout, &render_audit(&audit))?;
    let file = VerifyFile {
        params,
        cost: config.cost,
        settings,
        solve,
        menu,
        audit,
    };
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    if !file.audit.passed {
        return Err(CliError::AuditFailed(file.audit.failures().count()));
    }
    Ok(file)
}

/// `simulate`: Monte Carlo certainty equivalent of one type on one contract
/// of the solved menu, next to the closed form.
pub fn cmd_simulate(
    config: &RunConfig,
    overrides: &VerifyOverrides,
    agent: AgentType,
    slot: AgentType,
    effort: Option<f64>,
    stdout: &mut dyn Write,
) -> Result<(f64, f64), CliError> {
    let params = config.params();
    let settings = overrides.apply(config)?;
    let report = solve_with(&config.cost, &params, &config.solver_settings())?;
    let Some(contract) = report.menu.contract(slot) else {
        return Err(ConfigErrors(vec![FieldError {
            field: "--contract".into(),
            message: "the low type is excluded; the menu has no L contract".into(),
        }])
        .into());
    };
    let (effort, closed) = match effort {
        Some(mu) => {
            if !(mu >= 0.0 && mu <= params.mu_max) {
                return Err(ConfigErrors(vec![FieldError {
                    field: "--effort".into(),
                    message: format!("must lie in [0, {}]", params.mu_max),
                }])
                .into());
            }
            (
                mu,
                ce_at_effort(&config.cost, &params, contract, agent, mu)?,
            )
        }
        None => {
            let cf = certainty_equivalent(&config.cost, &params, contract, agent)?;
            (cf.effort, cf.value)
        }
    };
    let est = simulate_ce(
        &config.cost,
        &params,
        contract,
        agent,
        effort,
        &settings.mc,
        &Rayon,
    )?;
    emit(
        stdout,
        &format!(
            "{} on {} at effort {}: CE {} +/- {} (closed form {}; {} paths, {} steps, seed {})\n",
            agent.label(),
            slot.label(),
            sig6(effort),
            sig6(est.ce),
            sig6(est.std_error),
            sig6(closed),
            settings.mc.n_paths,
            settings.mc.n_steps,
            settings.mc.seed
        ),
    )?;
    Ok((est.ce, est.std_error))
}
