//! Monte Carlo certainty equivalents.
//!
//! Paths are generated in fixed chunks of [`CHUNK_PATHS`]; chunk `i` draws
//! from its own ChaCha stream keyed by `(seed, i)`. Chunk statistics are
//! merged in chunk order, so any [`PathExecutor`] (serial or parallel)
//! produces bit-identical estimates.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::agent::LinearContract;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{AgentType, ModelParams};

pub const CHUNK_PATHS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct McSettings {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            n_paths: 100_000,
            n_steps: 50,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub ce: f64,
    /// Delta-method standard error of `ce`.
    pub std_error: f64,
}

/// One simulated output path on an equidistant grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPath {
    pub seed: u64,
    pub stream: u64,
    /// Brownian increments, each with variance `1/n_steps`.
    pub dw: Vec<f64>,
    /// Output `Z` at times `0, Δt, …, 1`; `z[0] = 0`.
    pub z: Vec<f64>,
}

impl SimPath {
    pub fn n_steps(&self) -> usize {
        self.dw.len()
    }

    pub fn terminal(&self) -> f64 {
        *self.z.last().unwrap_or(&0.0)
    }
}

/// Running mean and sum of squared deviations of a batch of samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChunkStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl ChunkStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise merge.
    pub fn merge(&self, other: &ChunkStats) -> ChunkStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        ChunkStats {
            count: self.count + other.count,
            mean: self.mean + delta * other.count as f64 / n,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * other.count as f64 / n,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Runs independent chunk jobs and returns their results in index order.
pub trait PathExecutor {
    fn run_chunks(
        &self,
        n_chunks: usize,
        job: &(dyn Fn(usize) -> Result<ChunkStats> + Sync),
    ) -> Result<Vec<ChunkStats>>;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PathExecutor for Sequential {
    fn run_chunks(
        &self,
        n_chunks: usize,
        job: &(dyn Fn(usize) -> Result<ChunkStats> + Sync),
    ) -> Result<Vec<ChunkStats>> {
        (0..n_chunks).map(job).collect()
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulates `dZ = μθ dt + σ dW` with constant effort; Euler steps are
/// exact here because the drift does not depend on the state.
pub fn simulate_path(
    params: &ModelParams,
    agent: AgentType,
    effort: f64,
    n_steps: usize,
    seed: u64,
    stream: u64,
) -> SimPath {
    let mut rng = stream_rng(seed, stream);
    let dt = 1.0 / n_steps as f64;
    let sqrt_dt = libm::sqrt(dt);
    let drift = effort * params.theta(agent) * dt;
    let mut z = Vec::with_capacity(n_steps + 1);
    let mut dw = Vec::with_capacity(n_steps);
    let mut level = 0.0;
    z.push(level);
    for _ in 0..n_steps {
        let step: f64 = StandardNormal.sample(&mut rng);
        let inc = sqrt_dt * step;
        level += drift + params.sigma * inc;
        dw.push(inc);
        z.push(level);
    }
    SimPath {
        seed,
        stream,
        dw,
        z,
    }
}

/// Estimates the certainty equivalent of `agent` exerting constant `effort`
/// under `contract`: `−ln(E[e^{−ρX}])/ρ` with `X = γ + βZ₁ − c(μ)`.
///
/// Samples are centred at the deterministic part of `X` before
/// exponentiation; the identity is unchanged.
pub fn simulate_ce<E: PathExecutor + ?Sized>(
    model: &CostModel,
    params: &ModelParams,
    contract: &LinearContract,
    agent: AgentType,
    effort: f64,
    settings: &McSettings,
    executor: &E,
) -> Result<McEstimate> {
    if settings.n_paths == 0 || settings.n_steps == 0 {
        return Err(Error::Domain {
            what: "n_paths and n_steps",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let theta = params.theta(agent);
    let reference = contract.intercept + contract.slope * theta * effort - model.cost(effort)?;
    let n_steps = settings.n_steps;
    let dt = 1.0 / n_steps as f64;
    let sqrt_dt = libm::sqrt(dt);
    let drift = effort * theta * dt;
    let rho = params.rho;
    let n_paths = settings.n_paths;
    let n_chunks = n_paths.div_ceil(CHUNK_PATHS);

    let job = |chunk: usize| -> Result<ChunkStats> {
        let mut rng = stream_rng(settings.seed, chunk as u64);
        let first = chunk * CHUNK_PATHS;
        let count = CHUNK_PATHS.min(n_paths - first);
        let mut stats = ChunkStats::default();
        for _ in 0..count {
            let mut z = 0.0;
            for _ in 0..n_steps {
                let step: f64 = StandardNormal.sample(&mut rng);
                z += drift + params.sigma * sqrt_dt * step;
            }
            let centred = contract.slope * (z - theta * effort);
            stats.push(libm::exp(-rho * centred));
        }
        Ok(stats)
    };

    let chunks = executor.run_chunks(n_chunks, &job)?;
    let total = chunks
        .iter()
        .fold(ChunkStats::default(), |acc, c| acc.merge(c));
    if !(total.mean.is_finite() && total.mean > 0.0) {
        return Err(Error::Numeric("mean disutility outside (0, inf)"));
    }
    let ce = reference - libm::log(total.mean) / rho;
    let std_error = libm::sqrt(total.variance() / total.count as f64) / (rho * total.mean);
    Ok(McEstimate { ce, std_error })
}
