//! Planar curves parametrized by arc length, and probability measures on them.
//!
//! A [`ParametricCurve`] is an ordered chain of line and circular-arc [`Piece`]s. Arcs
//! keep their center, radius and angles, so [`ParametricCurve::point_at`] is exact to
//! machine precision. A [`CurveDistribution`] attaches a density over arc length and a
//! composite midpoint quadrature to a curve; every integral against the measure in
//! this crate goes through its nodes.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;
use core::ops::Range;

use crate::error::{domain, Error, Result};
use crate::fmath;
use crate::geom::Point;

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 100_000;

/// Absolute tolerance for closure and continuity checks.
pub const CONTINUITY_TOL: f64 = 1e-12;

/// One piece of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Line {
        p0: Point,
        p1: Point,
    },
    /// Circular arc swept from `start` to `end` (radians). `end > start` runs
    /// counterclockwise, `end < start` clockwise.
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl Piece {
    pub fn line(p0: Point, p1: Point) -> Result<Piece> {
        let piece = Piece::Line { p0, p1 };
        piece.validate()?;
        Ok(piece)
    }

    pub fn arc(center: Point, radius: f64, start: f64, end: f64) -> Result<Piece> {
        let piece = Piece::Arc {
            center,
            radius,
            start,
            end,
        };
        piece.validate()?;
        Ok(piece)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Piece::Line { p0, p1 } => {
                if !p0.is_finite() || !p1.is_finite() {
                    return Err(Error::InvalidCurve("non-finite line endpoint".into()));
                }
            }
            Piece::Arc {
                center,
                radius,
                start,
                end,
            } => {
                if !center.is_finite() || !start.is_finite() || !end.is_finite() {
                    return Err(Error::InvalidCurve("non-finite arc parameter".into()));
                }
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidCurve(alloc::format!(
                        "arc radius must be positive, got {radius}"
                    )));
                }
            }
        }
        if !(self.length() > 0.0) {
            return Err(Error::InvalidCurve("piece has zero length".into()));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Line { p0, p1 } => p0.dist(p1),
            Piece::Arc {
                radius, start, end, ..
            } => radius * (end - start).abs(),
        }
    }

    /// Point at arc length `t` from the start of this piece, `0 <= t <= length`.
    pub fn point_at_local(&self, t: f64) -> Point {
        match *self {
            Piece::Line { p0, p1 } => p0.lerp(p1, t / p0.dist(p1)),
            Piece::Arc {
                center,
                radius,
                start,
                end,
            } => {
                let sweep = end - start;
                let theta = start + sweep * (t / (radius * sweep.abs()));
                center + Point::polar(theta) * radius
            }
        }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            Piece::Line { p0, .. } => p0,
            Piece::Arc {
                center,
                radius,
                start,
                ..
            } => center + Point::polar(start) * radius,
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            Piece::Line { p1, .. } => p1,
            Piece::Arc {
                center,
                radius,
                end,
                ..
            } => center + Point::polar(end) * radius,
        }
    }
}

/// A continuous chain of pieces with its arc-length bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricCurve {
    pieces: Vec<Piece>,
    /// `cumulative[k]` is the arc length at the end of piece `k`.
    cumulative: Vec<f64>,
    closed: bool,
}

impl ParametricCurve {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidCurve("curve has no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        for (k, pair) in pieces.windows(2).enumerate() {
            let gap = pair[0].end_point().dist(pair[1].start_point());
            if gap > CONTINUITY_TOL {
                return Err(Error::InvalidCurve(alloc::format!(
                    "pieces {k} and {} do not connect (gap {gap:e})",
                    k + 1
                )));
            }
        }
        let mut cumulative = Vec::with_capacity(pieces.len());
        let mut total = 0.0;
        for p in &pieces {
            total += p.length();
            cumulative.push(total);
        }
        let first = pieces[0].start_point();
        let last = pieces[pieces.len() - 1].end_point();
        let closed = first.dist(last) <= CONTINUITY_TOL;
        Ok(ParametricCurve {
            pieces,
            cumulative,
            closed,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        self.cumulative[self.cumulative.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Arc length at which piece `k` starts.
    pub fn piece_start(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// Index of the piece containing arc length `s` (the earlier piece at a joint).
    fn piece_index(&self, s: f64) -> usize {
        let k = self.cumulative.partition_point(|&c| c < s);
        k.min(self.pieces.len() - 1)
    }

    pub fn point_at(&self, s: f64) -> Result<Point> {
        let len = self.length();
        if !(0.0..=len).contains(&s) {
            return Err(domain(alloc::format!(
                "arc length {s} outside [0, {len}]"
            )));
        }
        Ok(self.point_at_unchecked(s))
    }

    pub(crate) fn point_at_unchecked(&self, s: f64) -> Point {
        let k = self.piece_index(s);
        let piece = &self.pieces[k];
        let local = (s - self.piece_start(k)).clamp(0.0, piece.length());
        piece.point_at_local(local)
    }

    /// Vertices of the curve when every piece is a line, in traversal order. For a
    /// closed curve the first vertex is not repeated.
    pub fn polygon_vertices(&self) -> Option<Vec<Point>> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            match *p {
                Piece::Line { p0, .. } => out.push(p0),
                Piece::Arc { .. } => return None,
            }
        }
        if !self.closed {
            out.push(self.pieces[self.pieces.len() - 1].end_point());
        }
        Some(out)
    }

    /// Polyline approximation with roughly `per_unit` vertices per unit length on arcs.
    pub fn sample_polyline(&self, per_unit: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match *p {
                Piece::Line { p0, p1 } => {
                    if out.is_empty() {
                        out.push(p0);
                    }
                    out.push(p1);
                }
                Piece::Arc { .. } => {
                    let len = p.length();
                    let steps = ((len * per_unit) as usize).max(8);
                    let begin = if out.is_empty() { 0 } else { 1 };
                    for j in begin..=steps {
                        out.push(p.point_at_local(len * j as f64 / steps as f64));
                    }
                }
            }
        }
        out
    }
}

/// Density over arc length. Non-uniform densities are normalized numerically by the
/// quadrature attached to the distribution.
#[derive(Clone)]
pub enum Density {
    Uniform,
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Uniform => f.write_str("Uniform"),
            Density::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Composite midpoint rule over arc length, nodes allotted to pieces in proportion to
/// their length.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    piece_ranges: Vec<Range<usize>>,
}

impl Quadrature {
    pub fn midpoint(curve: &ParametricCurve, total: usize) -> Result<Self> {
        let pieces = curve.pieces();
        if total < pieces.len() {
            return Err(domain(alloc::format!(
                "need at least one quadrature node per piece ({} pieces, {total} nodes)",
                pieces.len()
            )));
        }
        let counts = allot(curve, total);
        let mut nodes = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut piece_ranges = Vec::with_capacity(pieces.len());
        for (k, (piece, &count)) in pieces.iter().zip(&counts).enumerate() {
            let begin = nodes.len();
            let start = curve.piece_start(k);
            let h = piece.length() / count as f64;
            for j in 0..count {
                nodes.push(start + (j as f64 + 0.5) * h);
                weights.push(h);
            }
            piece_ranges.push(begin..nodes.len());
        }
        Ok(Quadrature {
            nodes,
            weights,
            piece_ranges,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node index range belonging to piece `k`.
    pub fn piece_range(&self, k: usize) -> Range<usize> {
        self.piece_ranges[k].clone()
    }
}

/// Largest-remainder allotment of `total` nodes, at least one per piece.
fn allot(curve: &ParametricCurve, total: usize) -> Vec<usize> {
    let len = curve.length();
    let pieces = curve.pieces();
    let spare = total - pieces.len();
    let ideal: Vec<f64> = pieces
        .iter()
        .map(|p| spare as f64 * p.length() / len)
        .collect();
    let mut counts: Vec<usize> = ideal.iter().map(|&x| fmath::floor(x) as usize).collect();
    let mut left = spare - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - counts[a] as f64;
        let rb = ideal[b] - counts[b] as f64;
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &k in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[k] += 1;
        left -= 1;
    }
    counts.iter_mut().for_each(|c| *c += 1);
    counts
}

/// Geometry of the nodes of one piece, as needed by the assignment scan.
#[derive(Debug, Clone, Copy)]
pub(crate) enum PieceGeom {
    Line,
    Arc {
        center: Point,
        radius: f64,
        /// Angle of the first node of the piece and the angular step between nodes.
        theta0: f64,
        dtheta: f64,
    },
}

/// Running sums kept as unevaluated pairs `hi + lo` so that range sums stay accurate.
#[derive(Debug, Clone)]
pub(crate) struct Prefix {
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl Prefix {
    fn build(values: impl Iterator<Item = f64>) -> Prefix {
        let mut hi = alloc::vec![0.0];
        let mut lo = alloc::vec![0.0];
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for x in values {
            let t = s + x;
            let e = if s.abs() >= x.abs() {
                (s - t) + x
            } else {
                (x - t) + s
            };
            s = t;
            c += e;
            hi.push(s);
            lo.push(c);
        }
        Prefix { hi, lo }
    }

    /// Sum over nodes `a..b`.
    #[inline]
    pub(crate) fn range(&self, a: usize, b: usize) -> f64 {
        (self.hi[b] - self.hi[a]) + (self.lo[b] - self.lo[a])
    }
}

/// Precomputed per-node data shared by every solver call on a distribution.
#[derive(Debug, Clone)]
pub(crate) struct NodeTable {
    pub(crate) pos: Vec<Point>,
    pub(crate) mass: Vec<f64>,
    /// Prefix sums are taken about this point to limit cancellation.
    pub(crate) origin: Point,
    pub(crate) sum_m: Prefix,
    pub(crate) sum_mx: Prefix,
    pub(crate) sum_my: Prefix,
    pub(crate) sum_m2: Prefix,
    pub(crate) pieces: Vec<(Range<usize>, PieceGeom)>,
}

/// A probability measure on a curve: curve, density over arc length, quadrature.
#[derive(Debug, Clone)]
pub struct CurveDistribution {
    curve: ParametricCurve,
    density: Density,
    /// Normalizing constant: `density_at(s) = raw(s) / norm`.
    norm: f64,
    quadrature: Quadrature,
    table: NodeTable,
}

impl CurveDistribution {
    pub fn new(curve: ParametricCurve, density: Density, nodes: usize) -> Result<Self> {
        let quadrature = Quadrature::midpoint(&curve, nodes)?;
        let norm = match &density {
            Density::Uniform => curve.length(),
            Density::Function(f) => {
                let mut z = 0.0;
                for (&s, &w) in quadrature.nodes().iter().zip(quadrature.weights()) {
                    let v = f(s);
                    if !(v >= 0.0) || !v.is_finite() {
                        return Err(domain(alloc::format!(
                            "density must be finite and non-negative, got {v} at s = {s}"
                        )));
                    }
                    z += w * v;
                }
                if !(z > 0.0) {
                    return Err(domain("density integrates to zero"));
                }
                z
            }
        };
        let table = build_table(&curve, &density, norm, &quadrature);
        Ok(CurveDistribution {
            curve,
            density,
            norm,
            quadrature,
            table,
        })
    }

    pub fn uniform(curve: ParametricCurve) -> Result<Self> {
        Self::new(curve, Density::Uniform, DEFAULT_NODES)
    }

    /// Same curve and density with `nodes` quadrature nodes.
    pub fn with_resolution(&self, nodes: usize) -> Result<Self> {
        Self::new(self.curve.clone(), self.density.clone(), nodes)
    }

    pub fn curve(&self) -> &ParametricCurve {
        &self.curve
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    pub fn node_count(&self) -> usize {
        self.quadrature.len()
    }

    /// Normalized density at arc length `s`.
    pub fn density_at(&self, s: f64) -> f64 {
        match &self.density {
            Density::Uniform => 1.0 / self.norm,
            Density::Function(f) => f(s) / self.norm,
        }
    }

    /// Ambient positions of the quadrature nodes.
    pub fn node_positions(&self) -> &[Point] {
        &self.table.pos
    }

    /// Probability carried by each node, `w_m · density(s_m)`.
    pub fn node_masses(&self) -> &[f64] {
        &self.table.mass
    }

    /// `Σ w_m · density(s_m)`; equals one up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.table.sum_m.range(0, self.node_count())
    }

    /// Probability of the arc-length window `[s0, s1]`.
    pub fn measure(&self, s0: f64, s1: f64) -> Result<f64> {
        let len = self.curve.length();
        if !(0.0 <= s0 && s0 <= s1 && s1 <= len) {
            return Err(domain(alloc::format!(
                "window [{s0}, {s1}] not inside [0, {len}]"
            )));
        }
        Ok(match &self.density {
            Density::Uniform => (s1 - s0) / len,
            Density::Function(f) => {
                const PANELS: usize = 4096;
                let h = (s1 - s0) / PANELS as f64;
                (0..PANELS)
                    .map(|j| f(s0 + (j as f64 + 0.5) * h) * h)
                    .sum::<f64>()
                    / self.norm
            }
        })
    }

    pub(crate) fn table(&self) -> &NodeTable {
        &self.table
    }
}

fn build_table(
    curve: &ParametricCurve,
    density: &Density,
    norm: f64,
    quadrature: &Quadrature,
) -> NodeTable {
    let m = quadrature.len();
    let mut pos = Vec::with_capacity(m);
    let mut mass = Vec::with_capacity(m);
    let mut pieces = Vec::with_capacity(curve.pieces().len());
    for (k, piece) in curve.pieces().iter().enumerate() {
        let range = quadrature.piece_range(k);
        let count = range.len();
        let geom = match *piece {
            Piece::Line { .. } => PieceGeom::Line,
            Piece::Arc {
                center,
                radius,
                start: a0,
                end: a1,
            } => PieceGeom::Arc {
                center,
                radius,
                theta0: a0 + (a1 - a0) * 0.5 / count as f64,
                dtheta: (a1 - a0) / count as f64,
            },
        };
        for (j, idx) in range.clone().enumerate() {
            let s = quadrature.nodes[idx];
            let p = match (*piece, geom) {
                (
                    _,
                    PieceGeom::Arc {
                        center,
                        radius,
                        theta0,
                        dtheta,
                    },
                ) => center + Point::polar(theta0 + dtheta * j as f64) * radius,
                (Piece::Line { p0, p1 }, _) => p0.lerp(p1, (j as f64 + 0.5) / count as f64),
                (Piece::Arc { .. }, PieceGeom::Line) => unreachable!("arc piece with line geometry"),
            };
            pos.push(p);
            let dens = match density {
                Density::Uniform => 1.0 / norm,
                Density::Function(f) => f(s) / norm,
            };
            mass.push(quadrature.weights[idx] * dens);
        }
        pieces.push((range, geom));
    }
    let (lo, hi) = pos.iter().fold(
        (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    );
    let origin = (lo + hi) * 0.5;
    let sum_m = Prefix::build(mass.iter().copied());
    let sum_mx = Prefix::build(pos.iter().zip(&mass).map(|(p, w)| w * (p.x - origin.x)));
    let sum_my = Prefix::build(pos.iter().zip(&mass).map(|(p, w)| w * (p.y - origin.y)));
    let sum_m2 = Prefix::build(
        pos.iter()
            .zip(&mass)
            .map(|(p, w)| w * (*p - origin).norm_sq()),
    );
    NodeTable {
        pos,
        mass,
        origin,
        sum_m,
        sum_mx,
        sum_my,
        sum_m2,
        pieces,
    }
}

/// Uniform distribution on the segment from `(a, 0)` to `(b, 0)`.
pub fn make_segment(a: f64, b: f64) -> Result<CurveDistribution> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(domain(alloc::format!("segment needs a < b, got a = {a}, b = {b}")));
    }
    let piece = Piece::line(Point::new(a, 0.0), Point::new(b, 0.0))?;
    CurveDistribution::uniform(ParametricCurve::new(alloc::vec![piece])?)
}

/// Uniform distribution on the unit circle, arc length measured counterclockwise
/// from `(1, 0)`.
pub fn make_unit_circle() -> CurveDistribution {
    let piece = Piece::Arc {
        center: Point::ORIGIN,
        radius: 1.0,
        start: 0.0,
        end: TAU,
    };
    CurveDistribution::uniform(ParametricCurve::new(alloc::vec![piece]).expect("unit circle"))
        .expect("unit circle")
}

/// Vertices `O`, `A`, `B` of the unit equilateral triangle.
pub const TRIANGLE_O: Point = Point::new(0.0, 0.0);
pub const TRIANGLE_A: Point = Point::new(1.0, 0.0);
pub const TRIANGLE_B: Point = Point::new(0.5, 0.866_025_403_784_438_6);

/// The boundary of the unit equilateral triangle, traversed `O → A → B → O`.
pub fn unit_triangle_curve() -> ParametricCurve {
    let (o, a, b) = (TRIANGLE_O, TRIANGLE_A, TRIANGLE_B);
    ParametricCurve::new(alloc::vec![
        Piece::Line { p0: o, p1: a },
        Piece::Line { p0: a, p1: b },
        Piece::Line { p0: b, p1: o },
    ])
    .expect("unit triangle")
}

/// Uniform distribution on the boundary of the unit equilateral triangle.
pub fn make_unit_triangle_boundary() -> CurveDistribution {
    CurveDistribution::uniform(unit_triangle_curve()).expect("unit triangle")
}

/// `(E X, E‖X − E X‖²)` under the distribution, by quadrature.
pub fn mean_and_variance(dist: &CurveDistribution) -> (Point, f64) {
    let t = dist.table();
    let m = t.pos.len();
    let total = t.sum_m.range(0, m);
    let offset = Point::new(t.sum_mx.range(0, m), t.sum_my.range(0, m)) / total;
    let var = t.sum_m2.range(0, m) / total - offset.norm_sq();
    (t.origin + offset, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use std::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn circle_basics() {
        let d = make_unit_circle();
        assert!(close(d.curve().length(), TAU, 1e-12));
        assert!(d.curve().is_closed());
        let p = d.curve().point_at(0.0).unwrap();
        assert!(close(p.x, 1.0, 1e-15) && close(p.y, 0.0, 1e-15));
        assert!(close(d.total_mass(), 1.0, 1e-10));
        // arc of central angle θ carries θ / 2π
        assert!(close(d.measure(0.3, 1.3).unwrap(), 1.0 / TAU, 1e-15));
        assert!(close(d.measure(0.0, TAU).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn triangle_landmarks() {
        let d = make_unit_triangle_boundary();
        let c = d.curve();
        assert!(close(c.length(), 3.0, 1e-12));
        assert!(c.is_closed());
        let a = c.point_at(1.0).unwrap();
        assert!(close(a.x, 1.0, 1e-15) && close(a.y, 0.0, 1e-15));
        let b = c.point_at(2.0).unwrap();
        assert!(close(b.x, 0.5, 1e-15) && close(b.y, 3f64.sqrt() / 2.0, 1e-15));
        let m = c.point_at(2.5).unwrap();
        assert!(close(m.x, 0.25, 1e-15) && close(m.y, 3f64.sqrt() / 4.0, 1e-15));
        let end = c.point_at(3.0).unwrap();
        assert!(end.dist(c.point_at(0.0).unwrap()) <= CONTINUITY_TOL);
    }

    #[test]
    fn segment_basics() {
        let d = make_segment(0.0, 1.0).unwrap();
        assert!(close(d.curve().length(), 1.0, 0.0));
        assert!(!d.curve().is_closed());
        assert!(close(d.density_at(0.3), 1.0, 0.0));
        assert!(close(d.total_mass(), 1.0, 1e-10));
        let d = make_segment(-2.0, 5.5).unwrap();
        assert!(close(d.curve().length(), 7.5, 1e-15));
        assert!(close(d.density_at(1.0), 1.0 / 7.5, 1e-15));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(make_segment(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(make_segment(2.0, 1.0), Err(Error::Domain(_))));
        let c = make_unit_circle();
        assert!(c.curve().point_at(-1e-9).is_err());
        assert!(c.curve().point_at(TAU + 1e-9).is_err());
        assert!(c.curve().point_at(f64::NAN).is_err());
    }

    #[test]
    fn rejects_broken_curves() {
        let gap = ParametricCurve::new(vec![
            Piece::Line {
                p0: Point::new(0.0, 0.0),
                p1: Point::new(1.0, 0.0),
            },
            Piece::Line {
                p0: Point::new(1.0, 1e-9),
                p1: Point::new(2.0, 0.0),
            },
        ]);
        assert!(matches!(gap, Err(Error::InvalidCurve(_))));
        assert!(Piece::line(Point::ORIGIN, Point::ORIGIN).is_err());
        assert!(Piece::arc(Point::ORIGIN, 0.0, 0.0, 1.0).is_err());
        assert!(Piece::arc(Point::ORIGIN, 1.0, 2.0, 2.0).is_err());
        assert!(ParametricCurve::new(vec![]).is_err());
    }

    #[test]
    fn allotment_is_exact_and_proportional() {
        let c = unit_triangle_curve();
        let q = Quadrature::midpoint(&c, 100_000).unwrap();
        assert_eq!(q.len(), 100_000);
        let sizes: vec::Vec<usize> = (0..3).map(|k| q.piece_range(k).len()).collect();
        assert_eq!(sizes, vec![33_334, 33_333, 33_333]);
        assert!(q.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(q.nodes().iter().all(|&s| (0.0..=3.0).contains(&s)));
    }

    #[test]
    fn clockwise_arc_and_mixed_curve() {
        // half-disc boundary: diameter, then the upper arc back to the start
        let curve = ParametricCurve::new(vec![
            Piece::line(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)).unwrap(),
            Piece::arc(Point::ORIGIN, 1.0, 0.0, PI).unwrap(),
        ])
        .unwrap();
        assert!(curve.is_closed());
        assert!(close(curve.length(), 2.0 + PI, 1e-14));
        let top = curve.point_at(2.0 + PI / 2.0).unwrap();
        assert!(close(top.x, 0.0, 1e-15) && close(top.y, 1.0, 1e-15));

        let cw = Piece::arc(Point::ORIGIN, 2.0, PI, 0.0).unwrap();
        assert!(close(cw.length(), 2.0 * PI, 1e-14));
        let q = cw.point_at_local(PI);
        assert!(close(q.x, 0.0, 1e-14) && close(q.y, 2.0, 1e-14));
    }

    #[test]
    fn function_density_is_normalized() {
        let curve = make_segment(0.0, 2.0).unwrap().curve().clone();
        let d = CurveDistribution::new(curve, Density::Function(Arc::new(|s| s)), 10_000)
            .unwrap();
        assert!(close(d.total_mass(), 1.0, 1e-12));
        assert!(close(d.density_at(1.0), 0.5, 1e-8));
        assert!(close(d.measure(0.0, 1.0).unwrap(), 0.25, 1e-8));
        let neg = CurveDistribution::new(
            d.curve().clone(),
            Density::Function(Arc::new(|s| s - 1.0)),
            100,
        );
        assert!(neg.is_err());
    }

    #[test]
    fn node_positions_match_point_at() {
        for d in [make_unit_circle(), make_unit_triangle_boundary()] {
            let d = d.with_resolution(999).unwrap();
            for (s, p) in d.quadrature().nodes().iter().zip(d.node_positions()) {
                assert!(d.curve().point_at(*s).unwrap().dist(*p) < 1e-14);
            }
        }
    }

    #[test]
    fn mean_and_variance_known_cases() {
        let (m, v) = mean_and_variance(&make_unit_triangle_boundary());
        assert!(close(m.x, 0.5, 1e-9) && close(m.y, 3f64.sqrt() / 6.0, 1e-9));
        assert!(close(v, 1.0 / 6.0, 1e-9));
        let (m, v) = mean_and_variance(&make_unit_circle());
        assert!(m.norm() < 1e-12 && close(v, 1.0, 1e-9));
        let (m, v) = mean_and_variance(&make_segment(1.0, 4.0).unwrap());
        assert!(close(m.x, 2.5, 1e-12) && close(m.y, 0.0, 0.0));
        assert!(close(v, 9.0 / 12.0, 1e-9));
    }
}
