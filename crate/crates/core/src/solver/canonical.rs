//! Equidistance residuals at the points where the nearest codepoint changes.

use alloc::vec::Vec;

use super::assign::assign;
use crate::codebook::Codebook;
use crate::curve::CurveDistribution;
use crate::error::{domain, Result};
use crate::geom::Point;

/// One switch between Voronoi-adjacent cells along the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalResidual {
    /// Cell before and after the switch, in curve order.
    pub cells: (usize, usize),
    /// Arc length of the switch point.
    pub s: f64,
    pub point: Point,
    /// `|ρ(p, d) − ρ(q, d)|` with `ρ` the squared Euclidean distance.
    pub residual: f64,
}

/// Residual of the equation `ρ(p, d) = ρ(q, d)` at every point `d` where the assignment
/// switches from `p` to `q`, including the wrap-around of a closed curve.
pub fn canonical_residuals(dist: &CurveDistribution, cb: &Codebook) -> Result<Vec<CanonicalResidual>> {
    if cb.len() < 2 {
        return Err(domain("canonical residuals need at least two codepoints"));
    }
    let curve = dist.curve();
    let asg = assign(dist, cb.points());
    let ivs = asg.intervals();
    let mut out = Vec::new();
    let mut push = |s: f64, d: Point, p: usize, q: usize| {
        out.push(CanonicalResidual {
            cells: (p, q),
            s,
            point: d,
            residual: (d.dist_sq(cb[p]) - d.dist_sq(cb[q])).abs(),
        });
    };
    for w in ivs.windows(2) {
        if w[0].cell != w[1].cell {
            let d = curve.pieces()[w[0].piece].point_at_local(w[0].to);
            push(curve.piece_start(w[0].piece) + w[0].to, d, w[0].cell, w[1].cell);
        }
    }
    if curve.is_closed() {
        let (first, last) = (ivs[0], ivs[ivs.len() - 1]);
        if first.cell != last.cell {
            push(curve.length(), curve.pieces()[0].start_point(), last.cell, first.cell);
        }
    }
    Ok(out)
}
