//! Optimal menus of linear contracts for a principal facing a privately
//! informed agent (two productivity types) whose effort is unobservable.
//!
//! Output follows `dZ = μθ dt + σ dW` on `[0, 1]`, the agent has CARA
//! utility `U(x) = 1 − e^{−ρx}` and type-dependent reservation certainty
//! equivalents. Optimal efforts are constant and optimal sharing rules are
//! affine in terminal output, so everything here works with
//! [`LinearContract`]s and constant efforts.
//!
//! The crate is `no_std` (with `alloc`). Enable the `std` feature for
//! `std::error::Error` integration and `serde` for (de)serialization.
//!
//! Layout:
//! - [`cost`]: effort cost families and their derivatives.
//! - [`agent`]: best responses, imitation, information rent, contract
//!   construction and certainty equivalents.
//! - [`solver`]: the principal's problem and regime selection.
//! - [`verify`]: Monte Carlo, dynamic-programming and constraint audits.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod agent;
pub mod cost;
mod error;
pub mod model;
pub mod root;
pub mod solver;
pub mod verify;

pub use agent::{CertaintyEquivalent, LinearContract};
pub use cost::CostModel;
pub use error::{Error, Result};
pub use model::{AgentType, ModelParams};
pub use solver::{ContractMenu, Regime, SolveReport, SolverSettings};
