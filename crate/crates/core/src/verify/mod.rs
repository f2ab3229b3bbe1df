//! Independent checks of solver output.
//!
//! - [`sim`]: Monte Carlo simulation of terminal pay under a contract.
//! - [`dp`]: backward induction over arbitrary effort grids, the discrete
//!   counterpart of the agent's HJB equation.
//! - [`audit`]: all four (type, contract) pairings computed three ways,
//!   plus the incentive and participation constraints.

pub mod audit;
pub mod dp;
mod quadrature;
pub mod sim;

pub use audit::{audit_menu, AuditReport, AuditSettings, Check, PairAudit, SlackTable};
pub use dp::{dp_best_response, DpResult, DpSettings, EffortPolicy};
pub use quadrature::gauss_hermite;
pub use sim::{
    simulate_ce, simulate_path, ChunkStats, McEstimate, McSettings, PathExecutor, Sequential,
    SimPath, CHUNK_PATHS,
};
