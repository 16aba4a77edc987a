//! Numerical n-means search on any [`CurveDistribution`].
//!
//! Every integral uses the distribution's midpoint quadrature, refined at Voronoi
//! boundaries: the switch point between two cells is solved on the continuous curve
//! and the node straddling it contributes to both cells in proportion. Centroids are
//! then exact on line pieces.

mod assign;
mod canonical;
mod init;
mod lloyd;
mod oracle;

use alloc::vec::Vec;

use crate::codebook::Codebook;
use crate::curve::CurveDistribution;
use crate::error::{Error, Result};
use crate::geom::Point;

pub use assign::{Assignment, CellInterval};
pub use canonical::{canonical_residuals, CanonicalResidual};
pub use lloyd::{lloyd_run, lloyd_solve, select_best};
pub use oracle::{oracle_circle_offset, oracle_segment_dp, OFFSET_SCAN, OFFSET_SPREAD_TOL};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// How each restart picks its starting codebook.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// D²-weighted seeding over the quadrature nodes.
    #[default]
    KMeansPlusPlus,
    /// `n` points at equally spaced probability levels along the curve, randomly
    /// shifted per restart.
    CurveUniform,
    /// A fixed starting codebook; only one restart is run.
    Codebook(Codebook),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once an iteration lowers the distortion by no more than this fraction.
    pub rel_tol: f64,
    pub seed: u64,
    pub init: Init,
}

impl SolverConfig {
    pub fn new(n: usize) -> Self {
        SolverConfig {
            n,
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            rel_tol: DEFAULT_REL_TOL,
            seed: 0,
            init: Init::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    /// Number of restarts actually run: one for a user-supplied codebook.
    pub fn effective_restarts(&self) -> usize {
        match self.init {
            Init::Codebook(_) => 1,
            _ => self.restarts,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain(alloc::format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if let Init::Codebook(cb) = &self.init {
            if cb.len() != self.n {
                return Err(Error::Domain(alloc::format!(
                    "initial codebook has {} points, expected {}",
                    cb.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationResult {
    pub codebook: Codebook,
    pub distortion: f64,
    /// Probability of each Voronoi cell.
    pub cell_masses: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest distance from a codepoint to the centroid of its own cell.
    pub centroid_residual: f64,
    /// Distortion of the starting codebook followed by one entry per iteration.
    pub history: Vec<f64>,
    /// Restart that produced this result.
    pub restart: usize,
    /// Number of empty-cell respawns performed.
    pub repairs: usize,
}

/// Per-cell outcome of the centroid condition check.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidCheck {
    /// Largest `|a − E(X | X ∈ cell(a))|`; infinite if some cell is empty.
    pub residual: f64,
    pub per_cell: Vec<f64>,
    pub masses: Vec<f64>,
}

fn require_points(cb: &Codebook) -> Result<()> {
    if cb.is_empty() {
        Err(Error::EmptyCodebook)
    } else {
        Ok(())
    }
}

/// `V(P; cb) = ∫ min_a |x − a|² dP` by quadrature.
pub fn distortion(dist: &CurveDistribution, cb: &Codebook) -> Result<f64> {
    require_points(cb)?;
    let asg = assign::assign(dist, cb.points());
    Ok(assign::direct_distortion(dist, &asg, cb.points()))
}

/// Nearest-codepoint assignment of every quadrature node, ties to the lowest index.
pub fn voronoi_assign(dist: &CurveDistribution, cb: &Codebook) -> Result<Assignment> {
    require_points(cb)?;
    Ok(assign::assign(dist, cb.points()))
}

/// Conditional mean of each cell; `None` marks an empty cell.
pub fn centroids(dist: &CurveDistribution, asg: &Assignment) -> Vec<Option<Point>> {
    let sums = assign::cell_sums(dist, asg);
    let origin = dist.table().origin;
    (0..asg.cells()).map(|c| sums.centroid(c, origin)).collect()
}

/// Probability of each cell of an assignment.
pub fn cell_masses(dist: &CurveDistribution, asg: &Assignment) -> Vec<f64> {
    assign::cell_sums(dist, asg).mass
}

/// Distance of every codepoint from the centroid of its own Voronoi cell.
pub fn verify_centroid_condition(dist: &CurveDistribution, cb: &Codebook) -> Result<CentroidCheck> {
    let asg = voronoi_assign(dist, cb)?;
    let sums = assign::cell_sums(dist, &asg);
    let origin = dist.table().origin;
    let per_cell: Vec<f64> = cb
        .iter()
        .enumerate()
        .map(|(c, a)| sums.centroid(c, origin).map_or(f64::INFINITY, |m| m.dist(*a)))
        .collect();
    Ok(CentroidCheck {
        residual: per_cell.iter().copied().fold(0.0, f64::max),
        per_cell,
        masses: sums.mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform;
    use crate::curve::{make_segment, make_unit_circle, make_unit_triangle_boundary};
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn distortion_examples() {
        let circle = make_unit_circle();
        let one = Codebook::new(vec![Point::ORIGIN]).unwrap();
        assert!((distortion(&circle, &one).unwrap() - 1.0).abs() < 1e-12);
        let seg = make_segment(0.0, 1.0).unwrap();
        let two = Codebook::new(vec![Point::new(0.25, 0.0), Point::new(0.75, 0.0)]).unwrap();
        assert!((distortion(&seg, &two).unwrap() - 1.0 / 48.0).abs() < 1e-9);
        let tri = make_unit_triangle_boundary();
        let three = closedform::triangle_small_n(3).unwrap().codebook;
        assert!((distortion(&tri, &three).unwrap() - 7.0 / 192.0).abs() < 1e-8);
    }

    #[test]
    fn assignment_examples() {
        let seg = make_segment(0.0, 1.0).unwrap();
        let one = Codebook::new(vec![Point::new(3.0, 1.0)]).unwrap();
        assert!(voronoi_assign(&seg, &one).unwrap().labels().iter().all(|&l| l == 0));
        let two = Codebook::new(vec![Point::new(0.25, 0.0), Point::new(0.75, 0.0)]).unwrap();
        let labels = voronoi_assign(&seg, &two).unwrap().labels();
        for (s, l) in seg.quadrature().nodes().iter().zip(&labels) {
            assert_eq!(*l, usize::from(*s >= 0.5));
        }
        let circle = make_unit_circle();
        let cb = closedform::circle_codebook(2).unwrap().codebook;
        let labels = voronoi_assign(&circle, &cb).unwrap().labels();
        for (s, l) in circle.quadrature().nodes().iter().zip(&labels) {
            assert_eq!(*l, usize::from(*s > PI));
        }
    }

    #[test]
    fn centroid_examples() {
        let circle = make_unit_circle();
        let one = Codebook::new(vec![Point::new(0.1, 0.0)]).unwrap();
        let c = centroids(&circle, &voronoi_assign(&circle, &one).unwrap());
        assert!(c[0].unwrap().norm() < 1e-12);

        // a single cell covering the arc (0, 2π/n) has centroid (sin θ, 1 − cos θ)/θ
        let n = 5;
        let cb = closedform::circle_codebook(n).unwrap().codebook;
        let c = centroids(&circle, &voronoi_assign(&circle, &cb).unwrap());
        let th = 2.0 * PI / n as f64;
        let want = Point::new(libm::sin(th), 1.0 - libm::cos(th)) / th;
        assert!(c[0].unwrap().dist(want) < 1e-9);

        let tri = make_unit_triangle_boundary();
        let one = Codebook::new(vec![Point::new(0.5, 0.3)]).unwrap();
        let c = centroids(&tri, &voronoi_assign(&tri, &one).unwrap());
        assert!(c[0].unwrap().dist(Point::new(0.5, 3f64.sqrt() / 6.0)) < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(0).validate().is_err());
        assert!(SolverConfig::new(2).with_restarts(0).validate().is_err());
        assert!(SolverConfig::new(2).with_rel_tol(0.0).validate().is_err());
        let cb = Codebook::new(vec![Point::ORIGIN]).unwrap();
        let cfg = SolverConfig::new(2).with_init(Init::Codebook(cb));
        assert!(cfg.validate().is_err());
        assert!(SolverConfig::new(3).validate().is_ok());
    }
}
