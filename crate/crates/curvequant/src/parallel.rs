//! Restarts spread over a rayon pool sized by `CURVEQUANT_THREADS`.

use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::ThreadPool;

use curvequant_core::solver::{lloyd_run, select_best};
use curvequant_core::{CurveDistribution, QuantizationResult, SolverConfig};

pub const THREADS_VAR: &str = "CURVEQUANT_THREADS";

fn thread_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => cap.min(available),
        _ => available,
    }
}

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count())
            .build()
            .expect("thread pool")
    })
}

/// Same result as `lloyd_solve`: restarts are independent streams and the winner is
/// picked by distortion, then restart index.
pub fn solve(dist: &CurveDistribution, cfg: &SolverConfig) -> curvequant_core::Result<QuantizationResult> {
    cfg.validate()?;
    let runs: Vec<_> = pool().install(|| {
        (0..cfg.effective_restarts())
            .into_par_iter()
            .map(|r| lloyd_run(dist, cfg, r))
            .collect()
    });
    let runs = runs.into_iter().collect::<curvequant_core::Result<Vec<_>>>()?;
    Ok(select_best(runs).expect("at least one restart"))
}

/// Maps `f` over `items` on the pool, keeping input order.
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    pool().install(|| items.par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvequant_core::curve::make_unit_triangle_boundary;
    use curvequant_core::solver::lloyd_solve;

    #[test]
    fn matches_sequential_solver() {
        let dist = make_unit_triangle_boundary().with_resolution(20_000).unwrap();
        let cfg = SolverConfig::new(4).with_restarts(6).with_seed(11);
        assert_eq!(solve(&dist, &cfg).unwrap(), lloyd_solve(&dist, &cfg).unwrap());
    }
}
