//! Lloyd iteration with seeded restarts.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::assign::{assign, cell_sums, direct_distortion};
use super::init;
use super::{Init, QuantizationResult, SolverConfig};
use crate::codebook::Codebook;
use crate::curve::CurveDistribution;
use crate::error::{domain, Result};
use crate::geom::Point;

fn check(dist: &CurveDistribution, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.n > dist.node_count() {
        return Err(domain(alloc::format!(
            "n = {} exceeds the {} quadrature nodes",
            cfg.n,
            dist.node_count()
        )));
    }
    Ok(())
}

/// One restart of the solver. Restart `r` draws from stream `r` of a ChaCha8 generator
/// seeded with `cfg.seed`, so restarts can run in any order or in parallel.
pub fn lloyd_run(dist: &CurveDistribution, cfg: &SolverConfig, restart: usize) -> Result<QuantizationResult> {
    check(dist, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut points = match &cfg.init {
        Init::KMeansPlusPlus => init::kmeans_plus_plus(dist, cfg.n, &mut rng),
        Init::CurveUniform => init::curve_uniform(dist, cfg.n, &mut rng),
        Init::Codebook(cb) => cb.points().to_vec(),
    };
    let origin = dist.table().origin;

    let mut repairs = 0;
    let mut asg = assign(dist, &points);
    let mut sums = cell_sums(dist, &asg);
    let moved = init::repair_empty(dist, &mut points, &sums.mass);
    if moved > 0 {
        repairs += moved;
        asg = assign(dist, &points);
        sums = cell_sums(dist, &asg);
    }
    let mut current = sums.distortion(&points, origin);
    let mut history = alloc::vec![current];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        let mut next: Vec<Point> = (0..points.len())
            .map(|c| sums.centroid(c, origin).unwrap_or(points[c]))
            .collect();
        let mut next_asg = assign(dist, &next);
        let mut next_sums = cell_sums(dist, &next_asg);
        let moved = init::repair_empty(dist, &mut next, &next_sums.mass);
        if moved > 0 {
            repairs += moved;
            next_asg = assign(dist, &next);
            next_sums = cell_sums(dist, &next_asg);
        }
        let value = next_sums.distortion(&next, origin);
        iterations += 1;
        history.push(value);
        let drop = current - value;
        points = next;
        asg = next_asg;
        sums = next_sums;
        current = value;
        if drop <= cfg.rel_tol * history[history.len() - 2] {
            converged = true;
            break;
        }
    }

    let centroid_residual = (0..points.len())
        .map(|c| sums.centroid(c, origin).map_or(f64::INFINITY, |m| m.dist(points[c])))
        .fold(0.0, f64::max);
    Ok(QuantizationResult {
        distortion: direct_distortion(dist, &asg, &points),
        codebook: Codebook::from_points_unchecked(points),
        cell_masses: sums.mass,
        iterations,
        converged,
        centroid_residual,
        history,
        restart,
        repairs,
    })
}

/// Lowest distortion, then lowest restart index.
pub fn select_best(results: impl IntoIterator<Item = QuantizationResult>) -> Option<QuantizationResult> {
    results.into_iter().reduce(|best, r| {
        if r.distortion < best.distortion || (r.distortion == best.distortion && r.restart < best.restart) {
            r
        } else {
            best
        }
    })
}

/// Best result over `cfg.effective_restarts()` sequential restarts.
pub fn lloyd_solve(dist: &CurveDistribution, cfg: &SolverConfig) -> Result<QuantizationResult> {
    check(dist, cfg)?;
    let mut best: Option<QuantizationResult> = None;
    for r in 0..cfg.effective_restarts() {
        let run = lloyd_run(dist, cfg, r)?;
        best = select_best(best.into_iter().chain(core::iter::once(run)));
    }
    Ok(best.expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform;
    use crate::curve::{make_segment, make_unit_circle, make_unit_triangle_boundary};
    use core::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn segment_four_means() {
        let dist = make_segment(0.0, 1.0).unwrap();
        let res = lloyd_solve(&dist, &SolverConfig::new(4).with_restarts(4).with_seed(1)).unwrap();
        assert!(rel(res.distortion, 1.0 / 192.0) < 1e-6, "{}", res.distortion);
        let mut xs: Vec<f64> = res.codebook.iter().map(|p| p.x).collect();
        xs.sort_by(f64::total_cmp);
        for (x, want) in xs.iter().zip([0.125, 0.375, 0.625, 0.875]) {
            assert!((x - want).abs() < 1e-4);
        }
    }

    #[test]
    fn circle_three_means() {
        let dist = make_unit_circle();
        let res = lloyd_solve(&dist, &SolverConfig::new(3).with_restarts(4).with_seed(2)).unwrap();
        let s = libm::sin(PI / 3.0);
        assert!(rel(res.distortion, 1.0 - 9.0 / (PI * PI) * s * s) < 1e-6);
    }

    #[test]
    fn triangle_four_means() {
        let dist = make_unit_triangle_boundary();
        let res = lloyd_solve(&dist, &SolverConfig::new(4).with_restarts(16).with_seed(7)).unwrap();
        assert!((res.distortion - 0.028269).abs() < 1e-4, "{}", res.distortion);
        let table = closedform::triangle_tabulated(4).unwrap();
        let center = Point::new(0.5, 3f64.sqrt() / 6.0);
        let matched = (0..3).any(|k| {
            let rot = closedform::AffineMap::rotation_about(center, 2.0 * PI * k as f64 / 3.0);
            let image = rot.apply_codebook(&table).unwrap();
            image.matching_distance(&res.codebook).unwrap() < 1e-4
        });
        assert!(matched, "{:?}", res.codebook);
    }

    #[test]
    fn history_is_monotone_and_masses_sum_to_one() {
        let dist = make_unit_triangle_boundary();
        for seed in 0..4 {
            let res = lloyd_run(&dist, &SolverConfig::new(5).with_seed(seed), 0).unwrap();
            for w in res.history.windows(2) {
                assert!(w[1] <= w[0] + 1e-14);
            }
            assert!((res.cell_masses.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(res.cell_masses.iter().all(|&m| m > 0.0));
        }
    }

    #[test]
    fn closed_forms_are_fixed_points() {
        let dist = make_unit_circle();
        let cb = closedform::circle_codebook(6).unwrap().codebook;
        let res = lloyd_solve(&dist, &SolverConfig::new(6).with_init(Init::Codebook(cb))).unwrap();
        assert!(res.iterations <= 2 && res.converged);
        assert!(res.centroid_residual < 1e-7);
    }

    #[test]
    fn too_many_points_is_an_error() {
        let dist = make_segment(0.0, 1.0).unwrap().with_resolution(10).unwrap();
        assert!(lloyd_solve(&dist, &SolverConfig::new(11)).is_err());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let dist = make_unit_triangle_boundary().with_resolution(20_000).unwrap();
        let cfg = SolverConfig::new(5).with_restarts(3).with_seed(11);
        assert_eq!(lloyd_solve(&dist, &cfg).unwrap(), lloyd_solve(&dist, &cfg).unwrap());
    }
}
