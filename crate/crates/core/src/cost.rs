//! Effort cost families.
//!
//! Every family satisfies `c(0) = 0`, `c′ > 0` and `c″ > 0` on `(0, ∞)`,
//! and `c‴ ≥ 0`. The power exponent is restricted to `{2} ∪ [3, ∞)` so that
//! `c‴` stays finite at zero effort.

use crate::error::{Error, Result};

/// An effort cost function `c(μ)` in utility units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum CostModel {
    /// `c(μ) = κμ²/2`.
    Quadratic { kappa: f64 },
    /// `c(μ) = κμ^p/p`.
    Power {
        kappa: f64,
        #[cfg_attr(feature = "serde", serde(alias = "p"))]
        exponent: f64,
    },
}

impl CostModel {
    pub fn quadratic(kappa: f64) -> Result<Self> {
        let model = CostModel::Quadratic { kappa };
        model.validate()?;
        Ok(model)
    }

    pub fn power(kappa: f64, exponent: f64) -> Result<Self> {
        let model = CostModel::Power { kappa, exponent };
        model.validate()?;
        Ok(model)
    }

    /// Checks the family's parameter constraints.
    pub fn validate(&self) -> Result<()> {
        let kappa = self.kappa();
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                field: "kappa",
                reason: "must be finite and positive",
            });
        }
        if let CostModel::Power { exponent, .. } = *self {
            if !exponent.is_finite() || !(exponent == 2.0 || exponent >= 3.0) {
                return Err(Error::InvalidParameter {
                    field: "exponent",
                    reason: "must be 2 or at least 3",
                });
            }
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        match *self {
            CostModel::Quadratic { kappa } | CostModel::Power { kappa, .. } => kappa,
        }
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            CostModel::Quadratic { .. } => 2.0,
            CostModel::Power { exponent, .. } => exponent,
        }
    }

    /// `c(μ)`.
    pub fn cost(&self, effort: f64) -> Result<f64> {
        check_effort(effort)?;
        Ok(match *self {
            CostModel::Quadratic { kappa } => 0.5 * kappa * effort * effort,
            CostModel::Power { kappa, exponent } => kappa * libm::pow(effort, exponent) / exponent,
        })
    }

    /// `c′(μ)`.
    pub fn marginal_cost(&self, effort: f64) -> Result<f64> {
        check_effort(effort)?;
        Ok(match *self {
            CostModel::Quadratic { kappa } => kappa * effort,
            CostModel::Power { kappa, exponent } => kappa * libm::pow(effort, exponent - 1.0),
        })
    }

    /// `(c′)⁻¹(y)`, exact for both families.
    pub fn marginal_cost_inverse(&self, marginal: f64) -> Result<f64> {
        if !(marginal >= 0.0) {
            return Err(Error::Domain {
                what: "marginal cost",
                requirement: "non-negative",
                value: marginal,
            });
        }
        Ok(match *self {
            CostModel::Quadratic { kappa } => marginal / kappa,
            CostModel::Power { kappa, exponent } => {
                libm::pow(marginal / kappa, 1.0 / (exponent - 1.0))
            }
        })
    }

    /// `c″(μ)`.
    pub fn second_derivative(&self, effort: f64) -> Result<f64> {
        check_effort(effort)?;
        Ok(match *self {
            CostModel::Quadratic { kappa } => kappa,
            CostModel::Power { kappa, exponent } => {
                kappa * (exponent - 1.0) * libm::pow(effort, exponent - 2.0)
            }
        })
    }

    /// `c‴(μ)`.
    pub fn third_derivative(&self, effort: f64) -> Result<f64> {
        check_effort(effort)?;
        Ok(match *self {
            CostModel::Quadratic { .. } => 0.0,
            CostModel::Power { kappa, exponent } => {
                if exponent == 2.0 {
                    0.0
                } else if exponent < 3.0 && effort == 0.0 {
                    // Unreachable for validated models.
                    return Err(Error::Domain {
                        what: "effort for c'''",
                        requirement: "positive when 2 < p < 3",
                        value: effort,
                    });
                } else {
                    kappa * (exponent - 1.0) * (exponent - 2.0) * libm::pow(effort, exponent - 3.0)
                }
            }
        })
    }

    /// `c′(μ)μ − c(μ)`, the agent's surplus term that enters the rent.
    pub fn surplus(&self, effort: f64) -> Result<f64> {
        Ok(self.marginal_cost(effort)? * effort - self.cost(effort)?)
    }
}

fn check_effort(effort: f64) -> Result<()> {
    if effort >= 0.0 && effort.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "effort",
            requirement: "finite and non-negative",
            value: effort,
        })
    }
}
