//! Nearest-codepoint assignment along the curve.
//!
//! Each piece is probed at its start point, at every quadrature node and at its end
//! point. Labels are found by recursive bisection over probe ranges: a range whose two
//! ends share a label is accepted whole when the cell is certified to cover everything
//! in between (always true on a line, where Voronoi cells cut convex intervals; on an
//! arc each competitor's worst case is checked). Between probes with different labels
//! the switch point is solved on the continuous curve, and the node whose interval
//! contains it has its mass split between the two cells.

use alloc::vec::Vec;
use core::ops::Range;

use crate::codebook::nearest_in;
use crate::curve::{CurveDistribution, NodeTable, Piece, PieceGeom};
use crate::fmath;
use crate::geom::Point;

/// A maximal stretch `[from, to]` of piece `piece` (local arc length) whose points
/// are nearest to codepoint `cell`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellInterval {
    pub cell: usize,
    pub piece: usize,
    pub from: f64,
    pub to: f64,
}

/// Nearest-codepoint assignment of a distribution's quadrature nodes, together with
/// the exact cell intervals along the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    n: usize,
    node_count: usize,
    node_runs: Vec<(Range<usize>, usize)>,
    intervals: Vec<CellInterval>,
}

impl Assignment {
    /// Codebook size the assignment was made for.
    pub fn cells(&self) -> usize {
        self.n
    }

    /// Cell index of every quadrature node.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.node_count];
        for (range, cell) in &self.node_runs {
            out[range.clone()].iter_mut().for_each(|l| *l = *cell);
        }
        out
    }

    /// Maximal runs of consecutive nodes sharing a cell, in node order.
    pub fn node_runs(&self) -> &[(Range<usize>, usize)] {
        &self.node_runs
    }

    /// Cell intervals in curve order.
    pub fn intervals(&self) -> &[CellInterval] {
        &self.intervals
    }
}

/// Per-cell mass and moments taken about the table origin.
#[derive(Debug, Clone)]
pub(crate) struct CellSums {
    pub(crate) mass: Vec<f64>,
    pub(crate) mx: Vec<f64>,
    pub(crate) my: Vec<f64>,
    pub(crate) m2: Vec<f64>,
}

impl CellSums {
    fn new(n: usize) -> Self {
        CellSums {
            mass: alloc::vec![0.0; n],
            mx: alloc::vec![0.0; n],
            my: alloc::vec![0.0; n],
            m2: alloc::vec![0.0; n],
        }
    }

    fn add_point(&mut self, cell: usize, w: f64, q: Point) {
        self.mass[cell] += w;
        self.mx[cell] += w * q.x;
        self.my[cell] += w * q.y;
        self.m2[cell] += w * q.norm_sq();
    }

    pub(crate) fn centroid(&self, cell: usize, origin: Point) -> Option<Point> {
        let m = self.mass[cell];
        (m > 0.0).then(|| origin + Point::new(self.mx[cell] / m, self.my[cell] / m))
    }

    /// `Σ_cells ∫ |x − a_cell|²` from the moments.
    pub(crate) fn distortion(&self, points: &[Point], origin: Point) -> f64 {
        points
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let d = a - origin;
                self.m2[i] - 2.0 * (d.x * self.mx[i] + d.y * self.my[i]) + self.mass[i] * d.norm_sq()
            })
            .sum::<f64>()
            .max(0.0)
    }
}

/// Worst-case data for competitor `j` against a fixed cell on a circle.
#[derive(Clone, Copy)]
struct ArcCompetitor {
    peak_angle: f64,
    margin: f64,
}

struct ArcCache<'a> {
    points: &'a [Point],
    center: Point,
    radius: f64,
    rows: Vec<Option<Vec<ArcCompetitor>>>,
}

impl<'a> ArcCache<'a> {
    fn new(points: &'a [Point], center: Point, radius: f64) -> Self {
        ArcCache {
            points,
            center,
            radius,
            rows: alloc::vec![None; points.len()],
        }
    }

    fn row(&mut self, c: usize) -> &[ArcCompetitor] {
        let (points, center, radius) = (self.points, self.center, self.radius);
        self.rows[c].get_or_insert_with(|| {
            let ac = points[c];
            points
                .iter()
                .map(|&aj| {
                    let d = aj - ac;
                    ArcCompetitor {
                        peak_angle: fmath::atan2(d.y, d.x),
                        margin: center.dist_sq(aj) - center.dist_sq(ac) - 2.0 * radius * d.norm(),
                    }
                })
                .collect()
        })
    }
}

/// Probe geometry of one piece: probe `i` sits at local arc length `t_i`, with
/// `t_0 = 0`, `t_i = (i − ½)h` for the nodes and `t_{cnt+1} = len`.
struct ProbePiece<'t> {
    piece: Piece,
    geom: PieceGeom,
    nodes: &'t [Point],
    len: f64,
    h: f64,
}

impl ProbePiece<'_> {
    fn count(&self) -> usize {
        self.nodes.len() + 2
    }

    fn t(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else if i > self.nodes.len() {
            self.len
        } else {
            (i as f64 - 0.5) * self.h
        }
    }

    fn pos(&self, i: usize) -> Point {
        if i == 0 {
            self.piece.start_point()
        } else if i > self.nodes.len() {
            self.piece.end_point()
        } else {
            self.nodes[i - 1]
        }
    }

    fn angle(&self, t: f64) -> f64 {
        match self.piece {
            Piece::Arc { start, end, .. } => start + (end - start) * (t / self.len),
            Piece::Line { .. } => 0.0,
        }
    }
}

struct Scan<'a, 'b, 't> {
    points: &'a [Point],
    probe: &'b ProbePiece<'t>,
    arc: Option<ArcCache<'a>>,
    runs: Vec<(usize, usize, usize)>,
}

impl Scan<'_, '_, '_> {
    fn label(&self, i: usize) -> usize {
        nearest_in(self.points, self.probe.pos(i)).0
    }

    fn emit(&mut self, lo: usize, hi: usize, cell: usize) {
        match self.runs.last_mut() {
            Some(last) if last.2 == cell && last.1 == lo => last.1 = hi,
            _ => self.runs.push((lo, hi, cell)),
        }
    }

    /// Whether every probe between `lo` and `hi` (both labelled `c`) is labelled `c`.
    fn certified(&mut self, lo: usize, hi: usize, c: usize) -> bool {
        let Some(cache) = self.arc.as_mut() else {
            return true;
        };
        let a0 = self.probe.angle(self.probe.t(lo));
        let a1 = self.probe.angle(self.probe.t(hi));
        let (from, sweep) = if a1 >= a0 { (a0, a1 - a0) } else { (a1, a0 - a1) };
        cache.row(c).iter().enumerate().all(|(j, comp)| {
            j == c || comp.margin > 0.0 || fmath::wrap_angle(comp.peak_angle - from) > sweep
        })
    }

    /// Labels probes `lo..hi`, given the labels at `lo` and `hi`.
    fn scan(&mut self, lo: usize, hi: usize, c_lo: usize, c_hi: usize) {
        if hi - lo == 1 {
            self.emit(lo, hi, c_lo);
            return;
        }
        if c_lo == c_hi && self.certified(lo, hi, c_lo) {
            self.emit(lo, hi, c_lo);
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let c_mid = self.label(mid);
        self.scan(lo, mid, c_lo, c_mid);
        self.scan(mid, hi, c_mid, c_hi);
    }
}

/// Local arc length in `[t0, t1]` where the nearest codepoint switches from `p` to `q`.
fn switch_point(piece: &Piece, t0: f64, t1: f64, p: Point, q: Point) -> f64 {
    match *piece {
        Piece::Line { p0, p1 } => {
            let u = (p1 - p0) / p0.dist(p1);
            let d = q - p;
            let den = 2.0 * u.dot(d);
            let t = (q.norm_sq() - p.norm_sq() - 2.0 * p0.dot(d)) / den;
            if t.is_finite() {
                t.clamp(t0, t1)
            } else {
                0.5 * (t0 + t1)
            }
        }
        Piece::Arc { .. } => {
            let (mut lo, mut hi) = (t0, t1);
            let gap = |t: f64| {
                let x = piece.point_at_local(t);
                x.dist_sq(p) - x.dist_sq(q)
            };
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if gap(mid) <= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }
}

pub(crate) fn assign(dist: &CurveDistribution, points: &[Point]) -> Assignment {
    let table = dist.table();
    let pieces = dist.curve().pieces();
    let mut node_runs: Vec<(Range<usize>, usize)> = Vec::new();
    let mut intervals = Vec::new();
    for (k, (range, geom)) in table.pieces.iter().enumerate() {
        let piece = pieces[k];
        let len = piece.length();
        let probe = ProbePiece {
            piece,
            geom: *geom,
            nodes: &table.pos[range.clone()],
            len,
            h: len / range.len() as f64,
        };
        let arc = match probe.geom {
            PieceGeom::Arc { center, radius, .. } => Some(ArcCache::new(points, center, radius)),
            PieceGeom::Line => None,
        };
        let mut scan = Scan {
            points,
            probe: &probe,
            arc,
            runs: Vec::new(),
        };
        let last = probe.count() - 1;
        let (c0, c1) = (scan.label(0), scan.label(last));
        scan.scan(0, last, c0, c1);
        scan.emit(last, last + 1, c1);

        let mut from = 0.0;
        for (r, &(lo, hi, cell)) in scan.runs.iter().enumerate() {
            let to = match scan.runs.get(r + 1) {
                Some(&(_, _, next)) => {
                    switch_point(&piece, probe.t(hi - 1), probe.t(hi), points[cell], points[next])
                }
                None => len,
            };
            intervals.push(CellInterval {
                cell,
                piece: k,
                from,
                to,
            });
            from = to;
            // probes 1..=cnt are the nodes of this piece
            let nlo = lo.max(1) - 1;
            let nhi = hi.min(probe.count() - 1) - 1;
            if nlo < nhi {
                let nodes = range.start + nlo..range.start + nhi;
                match node_runs.last_mut() {
                    Some((prev, c)) if *c == cell && prev.end == nodes.start => prev.end = nodes.end,
                    _ => node_runs.push((nodes, cell)),
                }
            }
        }
    }
    Assignment {
        n: points.len(),
        node_count: table.pos.len(),
        node_runs,
        intervals,
    }
}

/// Walks the part of each interval covered by whole nodes and the fractional nodes at
/// its ends. `whole(cell, nodes)` receives global node ranges, `part(cell, w, x)` a
/// fraction of a node's mass and the midpoint of the covered piece.
fn for_each_share(
    dist: &CurveDistribution,
    asg: &Assignment,
    mut whole: impl FnMut(usize, Range<usize>),
    mut part: impl FnMut(usize, f64, Point),
) {
    let table: &NodeTable = dist.table();
    let pieces = dist.curve().pieces();
    for iv in &asg.intervals {
        let (range, _) = &table.pieces[iv.piece];
        let piece = &pieces[iv.piece];
        let cnt = range.len();
        let h = piece.length() / cnt as f64;
        let (u0, u1) = (iv.from, iv.to);
        if !(u1 > u0) {
            continue;
        }
        let jl = (fmath::ceil(u0 / h) as usize).min(cnt);
        let jr = (fmath::floor(u1 / h) as usize).min(cnt);
        let mut share = |j: usize, a: f64, b: f64| {
            let frac = ((b - a) / h).clamp(0.0, 1.0);
            if frac > 0.0 {
                let w = table.mass[range.start + j] * frac;
                part(iv.cell, w, piece.point_at_local(0.5 * (a + b)));
            }
        };
        if jl <= jr {
            if jl < jr {
                whole(iv.cell, range.start + jl..range.start + jr);
            }
            if jl > 0 && u0 < jl as f64 * h {
                share(jl - 1, u0, jl as f64 * h);
            }
            if jr < cnt && u1 > jr as f64 * h {
                share(jr, jr as f64 * h, u1);
            }
        } else {
            share(jr, u0, u1);
        }
    }
}

/// Per-cell sums using prefix tables for whole nodes.
pub(crate) fn cell_sums(dist: &CurveDistribution, asg: &Assignment) -> CellSums {
    let table = dist.table();
    let origin = table.origin;
    let mut sums = CellSums::new(asg.n);
    let mut parts = CellSums::new(asg.n);
    for_each_share(
        dist,
        asg,
        |c, r| {
            sums.mass[c] += table.sum_m.range(r.start, r.end);
            sums.mx[c] += table.sum_mx.range(r.start, r.end);
            sums.my[c] += table.sum_my.range(r.start, r.end);
            sums.m2[c] += table.sum_m2.range(r.start, r.end);
        },
        |c, w, x| parts.add_point(c, w, x - origin),
    );
    for c in 0..asg.n {
        sums.mass[c] += parts.mass[c];
        sums.mx[c] += parts.mx[c];
        sums.my[c] += parts.my[c];
        sums.m2[c] += parts.m2[c];
    }
    sums
}

/// Distortion summed node by node, without moment cancellation.
pub(crate) fn direct_distortion(dist: &CurveDistribution, asg: &Assignment, points: &[Point]) -> f64 {
    let table = dist.table();
    let (mut whole, mut parts) = (fmath::Sum::default(), fmath::Sum::default());
    for_each_share(
        dist,
        asg,
        |c, r| {
            let a = points[c];
            r.for_each(|m| whole.add(table.mass[m] * table.pos[m].dist_sq(a)));
        },
        |c, w, x| parts.add(w * x.dist_sq(points[c])),
    );
    whole.value() + parts.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_segment, make_unit_circle, make_unit_triangle_boundary};

    fn brute_labels(dist: &CurveDistribution, points: &[Point]) -> Vec<usize> {
        dist.node_positions()
            .iter()
            .map(|&p| nearest_in(points, p).0)
            .collect()
    }

    #[test]
    fn labels_match_brute_force() {
        let pts = [
            Point::new(0.3, 0.2),
            Point::new(-0.5, 0.1),
            Point::new(0.1, -0.7),
            Point::new(0.9, 0.9),
            Point::new(0.0, 0.0),
            Point::new(2.0, -2.0),
        ];
        for dist in [
            make_unit_circle().with_resolution(5_000).unwrap(),
            make_unit_triangle_boundary().with_resolution(5_001).unwrap(),
            make_segment(-1.0, 1.5).unwrap().with_resolution(997).unwrap(),
        ] {
            for n in 1..=pts.len() {
                let asg = assign(&dist, &pts[..n]);
                assert_eq!(asg.labels(), brute_labels(&dist, &pts[..n]), "n = {n}");
            }
        }
    }

    #[test]
    fn intervals_tile_each_piece() {
        let dist = make_unit_triangle_boundary();
        let pts = [Point::new(0.2, 0.1), Point::new(0.8, 0.1), Point::new(0.5, 0.7)];
        let asg = assign(&dist, &pts);
        for k in 0..3 {
            let ivs: Vec<_> = asg.intervals().iter().filter(|iv| iv.piece == k).collect();
            assert_eq!(ivs[0].from, 0.0);
            assert_eq!(ivs.last().unwrap().to, dist.curve().pieces()[k].length());
            for w in ivs.windows(2) {
                assert_eq!(w[0].to, w[1].from);
            }
        }
        let sums = cell_sums(&dist, &asg);
        let total: f64 = sums.mass.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn semicircles_split_at_the_axis() {
        let dist = make_unit_circle();
        let pts = [Point::new(0.0, 0.6), Point::new(0.0, -0.6)];
        let asg = assign(&dist, &pts);
        let ivs = asg.intervals();
        assert_eq!(ivs[0].cell, 0);
        assert!((ivs[0].to - core::f64::consts::PI).abs() < 1e-12);
        let sums = cell_sums(&dist, &asg);
        assert!((sums.mass[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn split_nodes_give_exact_centroids_on_lines() {
        let dist = make_segment(0.0, 1.0).unwrap().with_resolution(1000).unwrap();
        // boundary at 1/3, strictly inside a node interval
        let pts = [Point::new(1.0 / 6.0, 0.0), Point::new(0.5, 0.0)];
        let asg = assign(&dist, &pts);
        let sums = cell_sums(&dist, &asg);
        let c0 = sums.centroid(0, dist.table().origin).unwrap();
        assert!((c0.x - 1.0 / 6.0).abs() < 1e-14);
        assert!((sums.mass[0] - 1.0 / 3.0).abs() < 1e-14);
    }
}
