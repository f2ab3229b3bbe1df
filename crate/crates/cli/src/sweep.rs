//! One-dimensional parameter sweeps.

use std::path::Path;

use contract_menu_core::solver::solve_with;
use contract_menu_core::{Error as CoreError, ModelParams, Regime, SolveReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::format_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "w_h")]
    WH,
    #[serde(rename = "w_l")]
    WL,
    #[serde(rename = "theta_h")]
    ThetaH,
    #[serde(rename = "sigma")]
    Sigma,
    #[serde(rename = "rho")]
    Rho,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::WH => "w_h",
            SweepParameter::WL => "w_l",
            SweepParameter::ThetaH => "theta_h",
            SweepParameter::Sigma => "sigma",
            SweepParameter::Rho => "rho",
        }
    }

    pub fn apply(self, params: &ModelParams, value: f64) -> ModelParams {
        let mut p = *params;
        match self {
            SweepParameter::Alpha => p.alpha = value,
            SweepParameter::WH => p.w_h = value,
            SweepParameter::WL => p.w_l = value,
            SweepParameter::ThetaH => p.theta_h = value,
            SweepParameter::Sigma => p.sigma = value,
            SweepParameter::Rho => p.rho = value,
        }
        p
    }
}

/// Outcome at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome {
    Solved(Box<SolveReport>),
    Failed(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub outcome: SweepOutcome,
}

impl SweepRow {
    pub fn report(&self) -> Option<&SolveReport> {
        match &self.outcome {
            SweepOutcome::Solved(r) => Some(r),
            SweepOutcome::Failed(_) => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match &self.outcome {
            SweepOutcome::Solved(_) => "ok",
            SweepOutcome::Failed(tag) => tag,
        }
    }

    pub fn regime(&self) -> Option<Regime> {
        self.report().map(|r| r.menu.regime)
    }
}

fn failure_tag(err: &CoreError) -> &'static str {
    match err {
        CoreError::RegimeUnsupported { .. } => "regime_unsupported",
        CoreError::InvalidParameter { .. } => "invalid_params",
        _ => "numeric_failure",
    }
}

/// Solves at every grid point. Points run on the current rayon pool; rows
/// come back in grid order.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    let sweep = config.sweep.ok_or(CliError::MissingSweep)?;
    let base = config.params();
    let settings = config.solver_settings();
    let rows = sweep
        .values()
        .into_par_iter()
        .enumerate()
        .map(|(index, value)| {
            let params = sweep.parameter.apply(&base, value);
            let outcome = match solve_with(&config.cost, &params, &settings) {
                Ok(report) => SweepOutcome::Solved(Box::new(report)),
                Err(e) => SweepOutcome::Failed(failure_tag(&e)),
            };
            SweepRow {
                index,
                value,
                outcome,
            }
        })
        .collect();
    Ok(rows)
}

pub const CSV_COLUMNS: [&str; 13] = [
    "index",
    "value",
    "status",
    "regime",
    "mu_l",
    "mu_h",
    "mu_hl",
    "rent",
    "profit",
    "pc_l_slack",
    "icc_h_slack",
    "icc_l_slack",
    "pc_h_slack",
];

/// Writes the sweep table; the `value` column is named after the swept
/// parameter. Failed points keep their row with empty numeric fields.
pub fn write_csv<W: std::io::Write>(
    writer: W,
    parameter: SweepParameter,
    rows: &[SweepRow],
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = CSV_COLUMNS.to_vec();
    header[1] = parameter.name();
    out.write_record(&header)?;
    for row in rows {
        let mut record = vec![
            row.index.to_string(),
            format_f64(row.value),
            row.status().to_string(),
        ];
        match row.report() {
            Some(r) => {
                let m = &r.menu;
                record.push(m.regime.label().to_string());
                record.extend(
                    [
                        m.mu_l_star,
                        m.mu_h_star,
                        m.mu_hl_star,
                        r.rent,
                        r.principal_profit,
                        m.pc_l_slack,
                        m.icc_h_slack,
                        m.icc_l_slack,
                        m.pc_h_slack,
                    ]
                    .map(format_f64),
                );
            }
            None => record.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 3)),
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv_file(
    path: &Path,
    parameter: SweepParameter,
    rows: &[SweepRow],
) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(file, parameter, rows).map_err(|e| CliError::Csv(e.to_string()))
}
