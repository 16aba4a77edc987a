//! Starting codebooks and empty-cell repair.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::codebook::nearest_in;
use crate::curve::CurveDistribution;
use crate::geom::Point;

/// D²-weighted seeding over the quadrature nodes. Nodes already chosen have zero
/// weight, so the points are distinct whenever `n` does not exceed the node count.
pub(crate) fn kmeans_plus_plus(dist: &CurveDistribution, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let pos = dist.node_positions();
    let mass = dist.node_masses();
    let mut points = Vec::with_capacity(n);
    let first = sample(mass.iter().copied(), mass.iter().sum(), rng);
    points.push(pos[first]);
    let mut d2: Vec<f64> = pos.iter().map(|p| p.dist_sq(pos[first])).collect();
    while points.len() < n {
        let total: f64 = mass.iter().zip(&d2).map(|(m, d)| m * d).sum();
        let pick = if total > 0.0 {
            sample(mass.iter().zip(&d2).map(|(m, d)| m * d), total, rng)
        } else {
            // every remaining node coincides with a chosen one
            d2.iter().position(|&d| d > 0.0).unwrap_or(0)
        };
        let p = pos[pick];
        points.push(p);
        for (d, q) in d2.iter_mut().zip(pos) {
            *d = d.min(q.dist_sq(p));
        }
    }
    points
}

/// Index drawn with probability proportional to `weights`.
fn sample(weights: impl Iterator<Item = f64>, total: f64, rng: &mut ChaCha8Rng) -> usize {
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last = i;
            acc += w;
            if acc > target {
                return i;
            }
        }
    }
    last
}

/// Nodes at probability levels `(i + u)/n`, `u` uniform in `[0, 1)` per restart.
pub(crate) fn curve_uniform(dist: &CurveDistribution, n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let pos = dist.node_positions();
    let mass = dist.node_masses();
    let total: f64 = mass.iter().sum();
    let shift = rng.random::<f64>();
    let mut points = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut node = 0;
    let mut taken: Option<usize> = None;
    for i in 0..n {
        let target = (i as f64 + shift) / n as f64 * total;
        while node + 1 < pos.len() && acc + mass[node] <= target {
            acc += mass[node];
            node += 1;
        }
        // keep the points distinct when several levels land on one node
        let pick = match taken {
            Some(t) if t >= node => (t + 1).min(pos.len() - 1),
            _ => node,
        };
        taken = Some(pick);
        points.push(pos[pick]);
    }
    points
}

/// Moves the codepoint of every empty cell to the node contributing most to the
/// current distortion. Returns how many points were moved.
pub(crate) fn repair_empty(dist: &CurveDistribution, points: &mut [Point], masses: &[f64]) -> usize {
    let pos = dist.node_positions();
    let mass = dist.node_masses();
    let mut moved = 0;
    for c in 0..points.len() {
        if masses[c] > 0.0 {
            continue;
        }
        let mut best = (0, f64::NEG_INFINITY);
        for (m, (&p, &w)) in pos.iter().zip(mass).enumerate() {
            let score = w * nearest_in(points, p).1;
            if score > best.1 {
                best = (m, score);
            }
        }
        points[c] = pos[best.0];
        moved += 1;
    }
    moved
}
