//! Thread-pool drivers. Each splits its work into pieces fixed by the
//! input alone and combines them with an order-independent reduction
//! (integer sums, or a maximum with an index tie break), so the result is
//! the same for every thread count.

use cube_constants_core::projection::{
    check_squarefree_args, squarefree_report, ExactSweep, McEstimate, McPartial, McSampler,
    SquarefreeReport, SquarefreeSampler, MIN_MC_SAMPLES,
};
use cube_constants_core::sidon::{SidonProblem, SidonResult};
use cube_constants_core::{Error, ExactRational, SupportFamily};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::CliError;

pub const THREADS_ENV: &str = "CUBE_CONSTANTS_THREADS";
/// Monte Carlo samples per work item.
pub const MC_CHUNK: u64 = 1 << 14;

/// `--threads`, else `CUBE_CONSTANTS_THREADS`, else the available cores.
pub fn thread_count(requested: Option<usize>) -> Result<usize, CliError> {
    if let Some(t) = requested {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        return Ok(t);
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer"))),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn pool(threads: usize) -> Result<ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Sub-cube split used for the exact sweep of an `N`-dimensional cube.
fn split_for(n: usize) -> usize {
    if n > 12 {
        8.min(n - 12)
    } else {
        0
    }
}

/// Exact `λ` by Gray-code sweeps of `2^split` sub-cubes.
pub fn lambda_exact(family: &SupportFamily, pool: &ThreadPool) -> Result<ExactRational, CliError> {
    let sweep = ExactSweep::new(family)?;
    let split = split_for(sweep.dim());
    let total = pool.install(|| {
        (0..1u64 << split)
            .into_par_iter()
            .map(|b| sweep.block_sum(split, b))
            .try_reduce(|| 0u128, |a, b| Ok(a + b))
    })?;
    Ok(sweep.finish(total))
}

fn mc_partial(
    samples: u64,
    pool: &ThreadPool,
    partial: impl Fn(std::ops::Range<u64>) -> McPartial + Sync,
) -> McPartial {
    let chunks = samples.div_ceil(MC_CHUNK);
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| partial(c * MC_CHUNK..((c + 1) * MC_CHUNK).min(samples)))
            .reduce(McPartial::default, McPartial::merge)
    })
}

pub fn lambda_mc(
    family: &SupportFamily,
    samples: u64,
    seed: u64,
    pool: &ThreadPool,
) -> Result<McEstimate, CliError> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::Domain(format!("at least {MIN_MC_SAMPLES} samples are required")).into());
    }
    let sampler = McSampler::new(family, seed);
    Ok(mc_partial(samples, pool, |r| sampler.partial(r)).finish(seed)?)
}

pub fn squarefree_mc(
    n: usize,
    samples: u64,
    seed: u64,
    pool: &ThreadPool,
) -> Result<SquarefreeReport, CliError> {
    check_squarefree_args(n, samples)?;
    let sampler = SquarefreeSampler::new(n, seed);
    let estimate = mc_partial(samples, pool, |r| sampler.partial(r)).finish(seed)?;
    Ok(squarefree_report(n, estimate)?)
}

/// Sidon constant with the orbit chunks spread over the pool.
pub fn sidon(
    family: &SupportFamily,
    tol: f64,
    max_orthants: u64,
    pool: &ThreadPool,
) -> Result<(SidonResult, SidonProblem), CliError> {
    let problem = SidonProblem::new(family, max_orthants)?;
    let chunks = pool.install(|| {
        (0..problem.chunk_count())
            .into_par_iter()
            .map(|k| problem.solve_chunk(k, tol))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let result = problem.finish(chunks, tol)?;
    Ok((result, problem))
}
