//! Ordered sets of codepoints.

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::geom::Point;

/// Two codepoints closer than this are treated as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// An ordered list of `n >= 1` distinct points of the ambient plane. Points are free to
/// lie off the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    points: Vec<Point>,
}

impl Codebook {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCodebook);
        }
        if let Some(bad) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::Domain(alloc::format!("codepoint {bad} is not finite")));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(points[j]) <= COINCIDENCE_TOL {
                    return Err(Error::CoincidentPoints {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Codebook { points })
    }

    /// Skips the distinctness check. Used for iterates that are known to be distinct
    /// (every cell non-empty).
    pub(crate) fn from_points_unchecked(points: Vec<Point>) -> Self {
        debug_assert!(!points.is_empty());
        Codebook { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Index of the nearest codepoint and its squared distance; ties go to the lowest
    /// index.
    #[inline]
    pub fn nearest(&self, p: Point) -> (usize, f64) {
        nearest_in(&self.points, p)
    }

    /// Largest distance between `self[i]` and `other[pairing[i]]`, minimized over
    /// all pairings (brute force for small `n`, greedy otherwise). Both codebooks must
    /// have the same size.
    pub fn matching_distance(&self, other: &Codebook) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let n = self.len();
        if n <= 8 {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = f64::INFINITY;
            permute(&mut perm, 0, &mut |p| {
                let worst = p
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| self.points[i].dist(other.points[j]))
                    .fold(0.0, f64::max);
                best = best.min(worst);
            });
            Some(best)
        } else {
            let mut used = alloc::vec![false; n];
            let mut worst: f64 = 0.0;
            for a in &self.points {
                let (j, d) = other
                    .points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, b)| (j, a.dist(*b)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))?;
                used[j] = true;
                worst = worst.max(d);
            }
            Some(worst)
        }
    }
}

fn permute(perm: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

#[inline]
pub(crate) fn nearest_in(points: &[Point], p: Point) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = points[0].dist_sq(p);
    for (i, q) in points.iter().enumerate().skip(1) {
        let d = q.dist_sq(p);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    (best, best_d)
}

impl Index<usize> for Codebook {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

impl<'a> IntoIterator for &'a Codebook {
    type Item = &'a Point;
    type IntoIter = core::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl TryFrom<Vec<Point>> for Codebook {
    type Error = Error;
    fn try_from(points: Vec<Point>) -> Result<Self> {
        Codebook::new(points)
    }
}
