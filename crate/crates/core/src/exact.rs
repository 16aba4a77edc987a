//! Quadrature-free evaluation for the uniform distribution on polygonal curves.
//!
//! Along a line piece `x(t) = p0 + t·u` the squared distance to a codepoint is
//! `t² + m_i t + c_i`, so the nearest codepoint is given by the lower envelope of the
//! lines `m_i t + c_i`. The envelope yields the Voronoi sub-segments exactly, and
//! masses, centroids and distortion follow in closed form.

use alloc::vec::Vec;

use crate::codebook::Codebook;
use crate::curve::{ParametricCurve, Piece};
use crate::error::{domain, Result};
use crate::geom::Point;

/// A maximal sub-segment of one line piece whose nearest codepoint is `cell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRun {
    pub cell: usize,
    pub piece: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactEvaluation {
    pub runs: Vec<ExactRun>,
    pub masses: Vec<f64>,
    /// Conditional means of the cells; `None` for empty cells.
    pub centroids: Vec<Option<Point>>,
    pub distortion: f64,
}

impl ExactEvaluation {
    /// Largest distance between a codepoint and the centroid of its own cell.
    pub fn centroid_residual(&self, cb: &Codebook) -> f64 {
        self.centroids
            .iter()
            .zip(cb.iter())
            .map(|(c, p)| c.map_or(f64::INFINITY, |c| c.dist(*p)))
            .fold(0.0, f64::max)
    }
}

/// Voronoi cells, masses, centroids and distortion of `cb` under the uniform
/// distribution on `curve`. Every piece must be a line.
pub fn evaluate(curve: &ParametricCurve, cb: &Codebook) -> Result<ExactEvaluation> {
    let total = curve.length();
    let n = cb.len();
    let mut runs = Vec::new();
    for (k, piece) in curve.pieces().iter().enumerate() {
        let Piece::Line { p0, p1 } = *piece else {
            return Err(domain("exact evaluation supports line pieces only"));
        };
        envelope(k, p0, p1, cb.points(), &mut runs);
    }
    let mut masses = alloc::vec![0.0; n];
    let mut moments = alloc::vec![Point::ORIGIN; n];
    let mut distortion = 0.0;
    for r in &runs {
        let len = r.from.dist(r.to);
        let mid = r.from.lerp(r.to, 0.5);
        masses[r.cell] += len;
        moments[r.cell] += mid * len;
        distortion += len * (mid.dist_sq(cb[r.cell]) + len * len / 12.0);
    }
    let centroids = masses
        .iter()
        .zip(&moments)
        .map(|(&m, &mom)| (m > 0.0).then(|| mom / m))
        .collect();
    masses.iter_mut().for_each(|m| *m /= total);
    Ok(ExactEvaluation {
        runs,
        masses,
        centroids,
        distortion: distortion / total,
    })
}

fn envelope(piece: usize, p0: Point, p1: Point, points: &[Point], out: &mut Vec<ExactRun>) {
    let len = p0.dist(p1);
    let u = (p1 - p0) / len;
    let slope: Vec<f64> = points.iter().map(|a| -2.0 * u.dot(*a - p0)).collect();
    let icept: Vec<f64> = points.iter().map(|a| (p0 - *a).norm_sq()).collect();

    // argmin at t = 0 with ties resolved by the steeper descent, then by index
    let mut cur = 0;
    for j in 1..points.len() {
        let better = icept[j] < icept[cur] || (icept[j] == icept[cur] && slope[j] < slope[cur]);
        if better {
            cur = j;
        }
    }
    let mut t = 0.0;
    loop {
        // the envelope's slope strictly decreases, so this runs at most n times
        let mut next: Option<(usize, f64)> = None;
        for j in 0..points.len() {
            if slope[j] < slope[cur] {
                let tj = ((icept[j] - icept[cur]) / (slope[cur] - slope[j])).max(t);
                let take = match next {
                    None => true,
                    Some((bj, bt)) => tj < bt || (tj == bt && slope[j] < slope[bj]),
                };
                if take {
                    next = Some((j, tj));
                }
            }
        }
        match next {
            Some((j, tj)) if tj < len => {
                if tj > t {
                    out.push(ExactRun {
                        cell: cur,
                        piece,
                        from: p0 + u * t,
                        to: p0 + u * tj,
                    });
                }
                t = tj;
                cur = j;
            }
            _ => {
                out.push(ExactRun {
                    cell: cur,
                    piece,
                    from: p0 + u * t,
                    to: p1,
                });
                return;
            }
        }
    }
}

/// Lloyd iteration with exact cells. Stops once no codepoint moves by more than
/// `tol`, or after `max_iters` updates.
pub fn lloyd(
    curve: &ParametricCurve,
    init: &Codebook,
    max_iters: usize,
    tol: f64,
) -> Result<(Codebook, ExactEvaluation)> {
    let mut cb = init.clone();
    let mut eval = evaluate(curve, &cb)?;
    for _ in 0..max_iters {
        let mut next = Vec::with_capacity(cb.len());
        for (i, c) in eval.centroids.iter().enumerate() {
            match c {
                Some(p) => next.push(*p),
                None => return Err(domain(alloc::format!("cell {i} became empty"))),
            }
        }
        let moved = next
            .iter()
            .zip(cb.iter())
            .map(|(a, b)| a.dist(*b))
            .fold(0.0, f64::max);
        cb = Codebook::from_points_unchecked(next);
        eval = evaluate(curve, &cb)?;
        if moved <= tol {
            break;
        }
    }
    Ok((cb, eval))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::unit_triangle_curve;
    use alloc::vec;

    #[test]
    fn segment_two_means() {
        let curve = ParametricCurve::new(vec![Piece::Line {
            p0: Point::new(0.0, 0.0),
            p1: Point::new(1.0, 0.0),
        }])
        .unwrap();
        let cb = Codebook::new(vec![Point::new(0.25, 0.0), Point::new(0.75, 0.0)]).unwrap();
        let e = evaluate(&curve, &cb).unwrap();
        assert_eq!(e.runs.len(), 2);
        assert!((e.distortion - 1.0 / 48.0).abs() < 1e-16);
        assert!((e.masses[0] - 0.5).abs() < 1e-16);
        assert!(e.centroid_residual(&cb) < 1e-16);
    }

    #[test]
    fn triangle_three_means_is_seven_over_192() {
        let s3 = 3f64.sqrt();
        let cb = Codebook::new(vec![
            Point::new(13.0 / 16.0, s3 / 16.0),
            Point::new(0.5, 3.0 * s3 / 8.0),
            Point::new(3.0 / 16.0, s3 / 16.0),
        ])
        .unwrap();
        let e = evaluate(&unit_triangle_curve(), &cb).unwrap();
        assert!((e.distortion - 7.0 / 192.0).abs() < 1e-15);
        assert!(e.centroid_residual(&cb) < 1e-15);
        assert!(e.masses.iter().all(|m| (m - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn far_codepoint_gets_empty_cell() {
        let cb = Codebook::new(vec![Point::new(0.5, 0.3), Point::new(50.0, 50.0)]).unwrap();
        let e = evaluate(&unit_triangle_curve(), &cb).unwrap();
        assert_eq!(e.centroids[1], None);
        assert_eq!(e.masses[1], 0.0);
        assert!((e.distortion - (1.0 / 6.0 + Point::new(0.5, 3f64.sqrt() / 6.0).dist_sq(cb[0]) )).abs() < 1e-14);
    }
}
