//! Independent reference solutions for the segment and the circle.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::QuantizationResult;
use crate::codebook::Codebook;
use crate::error::{domain, Error, Result};
use crate::fmath;
use crate::geom::Point;

/// Offsets scanned by [`oracle_circle_offset`].
pub const OFFSET_SCAN: usize = 32;
/// Largest spread of distortions across offsets the circle oracle tolerates.
pub const OFFSET_SPREAD_TOL: f64 = 1e-10;

/// Optimal partition of `[a, b]` into `n` intervals with breakpoints on a uniform grid
/// of `grid` cells, by dynamic programming. Each interval costs the second moment of
/// the uniform measure on it about its own mean.
pub fn oracle_segment_dp(a: f64, b: f64, n: usize, grid: usize) -> Result<QuantizationResult> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if !(a < b) {
        return Err(domain(alloc::format!("segment needs a < b, got a = {a}, b = {b}")));
    }
    if grid < 10 * n {
        return Err(domain(alloc::format!("grid must be at least 10·n = {}, got {grid}", 10 * n)));
    }
    let h = (b - a) / grid as f64;
    let cost = |i: usize, j: usize| {
        let len = (j - i) as f64 * h;
        len * len * len / (12.0 * (b - a))
    };
    let cuts = partition(grid, n, &cost);
    let mut points = Vec::with_capacity(n);
    let mut masses = Vec::with_capacity(n);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (a + w[0] as f64 * h, a + w[1] as f64 * h);
        points.push(Point::new(0.5 * (x0 + x1), 0.0));
        masses.push((w[1] - w[0]) as f64 / grid as f64);
        total += cost(w[0], w[1]);
    }
    Ok(QuantizationResult {
        codebook: Codebook::new(points)?,
        distortion: total,
        cell_masses: masses,
        iterations: 0,
        converged: true,
        centroid_residual: 0.0,
        history: alloc::vec![total],
        restart: 0,
        repairs: 0,
    })
}

/// Breakpoints `0 = c_0 < c_1 < … < c_n = grid` minimizing `Σ cost(c_{i−1}, c_i)`.
/// The cost satisfies the quadrangle inequality, so optimal split points are monotone
/// and each layer is filled by divide and conquer.
fn partition(grid: usize, n: usize, cost: &impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut prev: Vec<f64> = (0..=grid).map(|j| if j == 0 { 0.0 } else { cost(0, j) }).collect();
    let mut choice: Vec<Vec<usize>> = Vec::with_capacity(n);
    choice.push(alloc::vec![0; grid + 1]);
    for layer in 1..n {
        let mut cur = alloc::vec![f64::INFINITY; grid + 1];
        let mut arg = alloc::vec![0; grid + 1];
        fill(layer + 1, grid, layer, grid - 1, &prev, cost, &mut cur, &mut arg);
        prev = cur;
        choice.push(arg);
    }
    let mut cuts = alloc::vec![grid];
    let mut j = grid;
    for layer in (1..n).rev() {
        j = choice[layer][j];
        cuts.push(j);
    }
    cuts.push(0);
    cuts.reverse();
    cuts
}

/// For `j` in `lo..=hi` sets `cur[j] = min_{k in klo..=min(khi, j−1)} prev[k] + cost(k, j)`.
#[allow(clippy::too_many_arguments)]
#[allow(clippy::needless_range_loop)]
fn fill(
    lo: usize,
    hi: usize,
    klo: usize,
    khi: usize,
    prev: &[f64],
    cost: &impl Fn(usize, usize) -> f64,
    cur: &mut [f64],
    arg: &mut [usize],
) {
    if lo > hi {
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let mut best = (f64::INFINITY, klo);
    for k in klo..=khi.min(mid - 1) {
        let v = prev[k] + cost(k, mid);
        if v < best.0 {
            best = (v, k);
        }
    }
    cur[mid] = best.0;
    arg[mid] = best.1;
    if mid > lo {
        fill(lo, mid - 1, klo, best.1, prev, cost, cur, arg);
    }
    fill(mid + 1, hi, best.1, khi, prev, cost, cur, arg);
}

const GAUSS_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];
const PANELS: usize = 16;

/// `(1/2π) ∫_{t0}^{t1} |(cos θ, sin θ) − a|² dθ` by composite Gauss–Legendre.
fn arc_cost(t0: f64, t1: f64, a: Point) -> f64 {
    let h = (t1 - t0) / PANELS as f64;
    let mut total = 0.0;
    for p in 0..PANELS {
        let mid = t0 + (p as f64 + 0.5) * h;
        for (x, w) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
            let th = mid + 0.5 * h * x;
            total += w * Point::polar(th).dist_sq(a);
        }
    }
    total * 0.5 * h / TAU
}

/// Uniform measure on the unit circle cut into `n` equal arcs, each quantized by its
/// own centroid. The arcs are rotated through [`OFFSET_SCAN`] offsets; the distortions
/// must agree to [`OFFSET_SPREAD_TOL`] and the best offset is returned.
pub fn oracle_circle_offset(n: usize) -> Result<QuantizationResult> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    let width = TAU / n as f64;
    let mut best: Option<(f64, Vec<Point>)> = None;
    let (mut lowest, mut highest) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..OFFSET_SCAN {
        let phi = width * k as f64 / OFFSET_SCAN as f64;
        let mut total = 0.0;
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let t0 = phi + width * i as f64;
            let t1 = t0 + width;
            let a = Point::new(
                fmath::sin(t1) - fmath::sin(t0),
                fmath::cos(t0) - fmath::cos(t1),
            ) / width;
            total += arc_cost(t0, t1, a);
            points.push(a);
        }
        lowest = lowest.min(total);
        highest = highest.max(total);
        if best.as_ref().map_or(true, |(v, _)| total < *v) {
            best = Some((total, points));
        }
    }
    if highest - lowest > OFFSET_SPREAD_TOL {
        return Err(Error::OracleInconsistent(alloc::format!(
            "circle offsets disagree by {:e} for n = {n}",
            highest - lowest
        )));
    }
    let (value, points) = best.expect("offsets scanned");
    Ok(QuantizationResult {
        codebook: Codebook::from_points_unchecked(points),
        distortion: value,
        cell_masses: alloc::vec![1.0 / n as f64; n],
        iterations: 0,
        converged: true,
        centroid_residual: 0.0,
        history: alloc::vec![value],
        restart: 0,
        repairs: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[allow(clippy::needless_range_loop)]
    fn naive_partition(grid: usize, n: usize, cost: &impl Fn(usize, usize) -> f64) -> f64 {
        let mut best = alloc::vec![f64::INFINITY; grid + 1];
        best[0] = 0.0;
        for _ in 0..n {
            let mut next = alloc::vec![f64::INFINITY; grid + 1];
            for j in 1..=grid {
                for k in 0..j {
                    next[j] = next[j].min(best[k] + cost(k, j));
                }
            }
            best = next;
        }
        best[grid]
    }

    #[test]
    fn divide_and_conquer_matches_naive() {
        let weights = [1.0, 3.0, 0.5, 2.0, 2.0, 0.1, 4.0, 1.0, 1.0, 0.7, 2.5, 1.5, 0.2, 3.0];
        let mut pre = alloc::vec![(0.0, 0.0, 0.0)];
        for (i, w) in weights.iter().enumerate() {
            let x = i as f64 + 0.5;
            let &(m, s, q) = pre.last().unwrap();
            pre.push((m + w, s + w * x, q + w * x * x));
        }
        let cost = |i: usize, j: usize| {
            let (m, s, q) = (pre[j].0 - pre[i].0, pre[j].1 - pre[i].1, pre[j].2 - pre[i].2);
            q - s * s / m
        };
        let g = weights.len();
        for n in 1..=5 {
            let cuts = partition(g, n, &cost);
            let got: f64 = cuts.windows(2).map(|w| cost(w[0], w[1])).sum();
            assert!((got - naive_partition(g, n, &cost)).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn segment_examples() {
        let r = oracle_segment_dp(0.0, 1.0, 2, 10_000).unwrap();
        assert!((r.distortion - 1.0 / 48.0).abs() < 1e-6);
        assert!((r.codebook[0].x - 0.25).abs() < 1e-3 && (r.codebook[1].x - 0.75).abs() < 1e-3);
        let r = oracle_segment_dp(0.0, 1.0, 1, 100).unwrap();
        assert!((r.distortion - 1.0 / 12.0).abs() < 1e-15);
        let r = oracle_segment_dp(0.0, 1.0, 3, 10_000).unwrap();
        assert!((r.distortion - 1.0 / 108.0).abs() < 1e-6);
        assert!(oracle_segment_dp(0.0, 1.0, 3, 29).is_err());
    }

    #[test]
    fn circle_examples() {
        let r = oracle_circle_offset(1).unwrap();
        assert!((r.distortion - 1.0).abs() < 1e-14);
        let r = oracle_circle_offset(2).unwrap();
        assert!((r.distortion - (1.0 - 4.0 / (PI * PI))).abs() < 1e-14);
        let r = oracle_circle_offset(6).unwrap();
        let s = libm::sin(PI / 6.0);
        assert!((r.distortion - (1.0 - 36.0 / (PI * PI) * s * s)).abs() < 1e-14);
        assert!(oracle_circle_offset(0).is_err());
    }
}
