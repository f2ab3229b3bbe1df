//! JSON run configuration.
//!
//! ```json
//! {
//!   "model":  { "theta_l": 1.0, "theta_h": 1.2, "rho": 1.0, "sigma": 1.0,
//!               "alpha": 0.5, "w_l": 0.0, "w_h": 0.0 },
//!   "cost":   { "family": "quadratic", "kappa": 1.0 },
//!   "solver": { "mu_max": 5.0, "tolerances": { "x_abs": 1e-12, "residual": 1e-9, "binding": 1e-8 } },
//!   "verify": { "n_paths": 100000, "n_steps": 50, "effort_grid": 5001, "seed": 1 },
//!   "sweep":  { "parameter": "w_h", "from": 0.0, "to": 0.1, "steps": 21 }
//! }
//! ```
//!
//! Only `model` and `cost` are required. Unknown fields are rejected.

use std::fmt;

use contract_menu_core::root::Tolerance;
use contract_menu_core::verify::{AuditSettings, DpSettings, McSettings};
use contract_menu_core::{CostModel, Error as CoreError, ModelParams, SolverSettings};
use serde::{Deserialize, Serialize};

use crate::sweep::SweepParameter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyConfig {
    pub theta_l: f64,
    pub theta_h: f64,
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub w_l: f64,
    pub w_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub x_abs: f64,
    pub residual: f64,
    pub binding: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let def = SolverSettings::default();
        Tolerances {
            x_abs: def.root.x_abs,
            residual: def.root.residual,
            binding: def.binding,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub mu_max: f64,
    pub tolerances: Tolerances,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mu_max: 5.0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    /// Effort grid points on `[0, mu_max]`; defaults to a spacing of 1e-3.
    pub effort_grid: Option<usize>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let mc = McSettings::default();
        VerifyConfig {
            n_paths: mc.n_paths,
            n_steps: mc.n_steps,
            effort_grid: None,
            seed: mc.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            1 => vec![self.from],
            n => (0..n)
                .map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: EconomyConfig,
    pub cost: CostModel,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        ModelParams {
            theta_l: m.theta_l,
            theta_h: m.theta_h,
            rho: m.rho,
            sigma: m.sigma,
            alpha: m.alpha,
            w_l: m.w_l,
            w_h: m.w_h,
            mu_max: self.solver.mu_max,
        }
    }

    pub fn solver_settings(&self) -> SolverSettings {
        let t = &self.solver.tolerances;
        SolverSettings {
            root: Tolerance {
                x_abs: t.x_abs,
                residual: t.residual,
                ..Tolerance::default()
            },
            binding: t.binding,
        }
    }

    pub fn audit_settings(&self) -> AuditSettings {
        let v = &self.verify;
        let mut dp = DpSettings::with_spacing(self.solver.mu_max, 1e-3);
        dp.n_steps = v.n_steps;
        if let Some(points) = v.effort_grid {
            dp.effort_points = points;
        }
        AuditSettings {
            mc: McSettings {
                n_paths: v.n_paths,
                n_steps: v.n_steps,
                seed: v.seed,
            },
            dp,
            binding: self.solver.tolerances.binding,
            ..AuditSettings::default()
        }
    }

    fn validation_errors(&self) -> Vec<FieldError> {
        let mut errors: Vec<FieldError> = self
            .params()
            .violations()
            .into_iter()
            .map(|e| FieldError::from_core(&e))
            .collect();
        if let Err(e) = self.cost.validate() {
            errors.push(FieldError::from_core(&e).prefixed("cost"));
        }
        let t = &self.solver.tolerances;
        for (field, value) in [
            ("x_abs", t.x_abs),
            ("residual", t.residual),
            ("binding", t.binding),
        ] {
            if !(value.is_finite() && value > 0.0) {
                errors.push(FieldError::new(
                    format!("solver.tolerances.{field}"),
                    "must be finite and positive",
                ));
            }
        }
        let v = &self.verify;
        if v.n_paths == 0 {
            errors.push(FieldError::new("verify.n_paths", "must be at least 1"));
        }
        if v.n_steps == 0 {
            errors.push(FieldError::new("verify.n_steps", "must be at least 1"));
        }
        if matches!(v.effort_grid, Some(n) if n < 2) {
            errors.push(FieldError::new("verify.effort_grid", "must be at least 2"));
        }
        if let Some(s) = &self.sweep {
            if !(s.from.is_finite() && s.to.is_finite()) {
                errors.push(FieldError::new("sweep.from/sweep.to", "must be finite"));
            }
            if s.steps == 0 {
                errors.push(FieldError::new("sweep.steps", "must be at least 1"));
            }
            if s.steps > 1 && s.from == s.to {
                errors.push(FieldError::new("sweep.to", "must differ from sweep.from"));
            }
        }
        errors
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }

    fn from_core(err: &CoreError) -> Self {
        match err {
            CoreError::InvalidParameter { field, reason } => {
                let section = if *field == "mu_max" {
                    "solver"
                } else {
                    "model"
                };
                FieldError::new(format!("{section}.{field}"), *reason)
            }
            other => FieldError::new("config", other.to_string()),
        }
    }

    fn prefixed(mut self, section: &str) -> Self {
        if let Some(rest) = self.field.strip_prefix("model.") {
            self.field = format!("{section}.{rest}");
        }
        self
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Everything wrong with a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<FieldError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for e in &self.0 {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Parses and validates a configuration, reporting every violation.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let config: RunConfig = serde_json::from_str(text)
        .map_err(|e| ConfigErrors(vec![FieldError::new("syntax", e.to_string())]))?;
    match config.validation_errors() {
        errors if errors.is_empty() => Ok(config),
        errors => Err(ConfigErrors(errors)),
    }
}
