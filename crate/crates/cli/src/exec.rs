use contract_menu_core::verify::{ChunkStats, PathExecutor};
use contract_menu_core::Result;
use rayon::prelude::*;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "CONTRACT_MENU_WORKERS";

/// Runs Monte Carlo chunks on the current rayon pool. Results come back in
/// chunk order, so estimates match [`contract_menu_core::verify::Sequential`]
/// bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl PathExecutor for Rayon {
    fn run_chunks(
        &self,
        n_chunks: usize,
        job: &(dyn Fn(usize) -> Result<ChunkStats> + Sync),
    ) -> Result<Vec<ChunkStats>> {
        (0..n_chunks).into_par_iter().map(job).collect()
    }
}

/// Worker count from the environment; `None` lets rayon decide.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `f` inside a pool sized from the environment.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers_from_env() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
