//! Exact optimal codebooks and quantization errors.
//!
//! * Uniform on `[a, b]`: equally spaced cell midpoints, `V_n = (b − a)² / (12 n²)`.
//! * Uniform on the unit circle: `n` points at radius `(n/π) sin(π/n)` and angles
//!   `(2j − 1)π/n`, `V_n = 1 − (n/π)² sin²(π/n)`.
//! * Uniform on the boundary of the unit equilateral triangle `O A B`: tabulated
//!   optima for `n ≤ 6` and the three-corner construction for `n = 3k + 3`.
//!
//! Everything here is a pure function of its arguments.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::codebook::Codebook;
use crate::curve::{unit_triangle_curve, TRIANGLE_A, TRIANGLE_B, TRIANGLE_O};
use crate::error::{domain, Error, Result};
use crate::exact;
use crate::fmath;
use crate::geom::Point;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT7: f64 = 2.645_751_311_064_590_7;

/// Which family a closed-form result belongs to, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormCase {
    Segment { a: f64, b: f64 },
    Circle,
    TriangleSmallN,
    /// `n = 3k + 3`; `r` is the side of the equilateral corner cells.
    Triangle3k3 { k: usize, r: f64 },
}

impl ClosedFormCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ClosedFormCase::Segment { .. } => "segment",
            ClosedFormCase::Circle => "circle",
            ClosedFormCase::TriangleSmallN => "triangle-small-n",
            ClosedFormCase::Triangle3k3 { .. } => "triangle-3k+3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormResult {
    pub codebook: Codebook,
    /// The `n`th quantization error `V_n`.
    pub error: f64,
    pub case: ClosedFormCase,
}

impl ClosedFormResult {
    pub fn n(&self) -> usize {
        self.codebook.len()
    }
}

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(domain("n must be at least 1"))
    } else {
        Ok(())
    }
}

pub fn segment_error(a: f64, b: f64, n: usize) -> f64 {
    let d = b - a;
    d * d / (12.0 * (n as f64) * (n as f64))
}

pub fn segment_codebook(a: f64, b: f64, n: usize) -> Result<ClosedFormResult> {
    require_n(n)?;
    if !(a < b) {
        return Err(domain(alloc::format!("segment needs a < b, got a = {a}, b = {b}")));
    }
    let points = (1..=n)
        .map(|i| Point::new(a + (2 * i - 1) as f64 / (2 * n) as f64 * (b - a), 0.0))
        .collect();
    Ok(ClosedFormResult {
        codebook: Codebook::new(points)?,
        error: segment_error(a, b, n),
        case: ClosedFormCase::Segment { a, b },
    })
}

/// `1 − sin(x)/x` without cancellation for small `x`.
fn one_minus_sinc(x: f64) -> f64 {
    if x < 0.1 {
        let x2 = x * x;
        // alternating Taylor tail, truncation below 1e-22 relative for x < 0.1
        x2 / 6.0
            * (1.0
                - x2 / 20.0
                    * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    } else {
        1.0 - fmath::sin(x) / x
    }
}

/// Radius `(n/π) sin(π/n)` of the optimal circle codebook.
pub fn circle_radius(n: usize) -> f64 {
    if n == 1 {
        return 0.0;
    }
    1.0 - one_minus_sinc(PI / n as f64)
}

/// `V_n = 1 − (n/π)² sin²(π/n)` for the unit circle.
pub fn circle_error(n: usize) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let d = one_minus_sinc(PI / n as f64);
    d * (2.0 - d)
}

pub fn circle_codebook(n: usize) -> Result<ClosedFormResult> {
    require_n(n)?;
    let rho = circle_radius(n);
    let points = (1..=n)
        .map(|j| Point::polar((2 * j - 1) as f64 * PI / n as f64) * rho)
        .collect();
    Ok(ClosedFormResult {
        codebook: Codebook::new(points)?,
        error: circle_error(n),
        case: ClosedFormCase::Circle,
    })
}

/// Optimal sets for the triangle boundary as tabulated (six significant figures for
/// `n = 2, 4, 5, 6`), with their tabulated errors. Index `n − 1`.
pub const TRIANGLE_TABLE: [(&[(f64, f64)], f64); 6] = [
    (&[(0.5, 0.288_675_134_594_812_9)], 1.0 / 6.0),
    (&[(0.314187, 0.395954), (0.771396, 0.131985)], 0.0994281),
    (
        &[
            (13.0 / 16.0, SQRT3 / 16.0),
            (0.5, 3.0 * SQRT3 / 8.0),
            (3.0 / 16.0, SQRT3 / 16.0),
        ],
        7.0 / 192.0,
    ),
    (
        &[
            (0.133784, 0.140735),
            (0.5, 0.0),
            (0.866216, 0.140735),
            (0.5, 0.653763),
        ],
        0.028269,
    ),
    (
        &[
            (0.130625, 0.138564),
            (0.485912, 0.0),
            (0.883966, 0.0669921),
            (0.742956, 0.445213),
            (0.445312, 0.683619),
        ],
        0.020525,
    ),
    (
        &[
            (0.112854, 0.0651563),
            (0.5, 0.0),
            (0.887146, 0.0651563),
            (0.75, 0.433013),
            (0.5, 0.735713),
            (0.25, 0.433013),
        ],
        0.0132077,
    ),
];

/// The tabulated optimal set for `1 <= n <= 6`, unrefined.
pub fn triangle_tabulated(n: usize) -> Result<Codebook> {
    if !(1..=6).contains(&n) {
        return Err(domain(alloc::format!(
            "tabulated triangle optima exist for n in 1..=6, got {n}"
        )));
    }
    Codebook::new(
        TRIANGLE_TABLE[n - 1]
            .0
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect(),
    )
}

/// Optimal `n`-means on the triangle boundary for `1 <= n <= 6`. The tabulated sets are
/// refined to full precision by exact Lloyd steps on the polygon; `n = 1, 3` are
/// already exact.
pub fn triangle_small_n(n: usize) -> Result<ClosedFormResult> {
    let table = triangle_tabulated(n)?;
    let curve = unit_triangle_curve();
    let (codebook, eval) = match n {
        1 | 3 => {
            let eval = exact::evaluate(&curve, &table)?;
            (table, eval)
        }
        _ => exact::lloyd(&curve, &table, 50_000, 1e-16)?,
    };
    let error = match n {
        1 => 1.0 / 6.0,
        3 => 7.0 / 192.0,
        _ => eval.distortion,
    };
    Ok(ClosedFormResult {
        codebook,
        error,
        case: ClosedFormCase::TriangleSmallN,
    })
}

/// Side `r = (8 − 2√7 k)/(16 − 7k²)` of the corner cells, evaluated as `2/(4 + √7 k)`.
pub fn triangle_3k3_ratio(k: usize) -> f64 {
    2.0 / (4.0 + SQRT7 * k as f64)
}

/// `V_{3k+3} = 7(7k² − 8√7 k + 16) / (12 (16 − 7k²)²)`, evaluated as
/// `7 / (12 (4 + √7 k)²)`.
pub fn triangle_3k3_error(k: usize) -> f64 {
    let d = 4.0 + SQRT7 * k as f64;
    7.0 / (12.0 * d * d)
}

/// Map of the side `OA` onto `AB` sending `(t, 0)` to `(1 − t)B + tA`.
pub fn side_map_ab(p: Point) -> Point {
    TRIANGLE_B.lerp(TRIANGLE_A, p.x)
}

/// Map of the side `OA` onto `OB` sending `(t, 0)` to `(1 − t)B + tO`.
pub fn side_map_ob(p: Point) -> Point {
    TRIANGLE_B.lerp(TRIANGLE_O, p.x)
}

/// Optimal `(3k + 3)`-means on the triangle boundary: one point per corner cell and
/// `k` equally spaced points on the middle part of each side.
pub fn triangle_3k3_codebook(k: usize) -> Result<ClosedFormResult> {
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let r = triangle_3k3_ratio(k);
    let side: Vec<Point> = (1..=k)
        .map(|j| {
            Point::new(
                r + (2 * j - 1) as f64 / (2 * k) as f64 * (1.0 - 2.0 * r),
                0.0,
            )
        })
        .collect();
    let mut points = Vec::with_capacity(3 * k + 3);
    points.push(Point::new(3.0 * r / 8.0, SQRT3 * r / 8.0));
    points.push(Point::new(1.0 - 3.0 * r / 8.0, SQRT3 * r / 8.0));
    points.push(Point::new(0.5, -0.25 * SQRT3 * (r - 2.0)));
    points.extend(side.iter().copied());
    points.extend(side.iter().map(|&p| side_map_ab(p)));
    points.extend(side.iter().map(|&p| side_map_ob(p)));
    Ok(ClosedFormResult {
        codebook: Codebook::new(points)?,
        error: triangle_3k3_error(k),
        case: ClosedFormCase::Triangle3k3 { k, r },
    })
}

/// Closed-form triangle optimum for any supported `n`: `1..=6` or `n = 3k + 3`.
pub fn triangle_codebook(n: usize) -> Result<ClosedFormResult> {
    match n {
        1..=6 => triangle_small_n(n),
        _ if n % 3 == 0 => triangle_3k3_codebook(n / 3 - 1),
        _ => Err(domain(alloc::format!(
            "no closed form for the triangle at n = {n}; supported: 1 <= n <= 6 and n = 3k + 3"
        ))),
    }
}

/// Threshold on `|det A|` below which an affine map is considered singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// `p ↦ A p + t` with invertible `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    linear: [[f64; 2]; 2],
    translation: Point,
}

impl AffineMap {
    pub fn new(linear: [[f64; 2]; 2], translation: Point) -> Result<Self> {
        let det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
        if !(det.abs() > SINGULAR_DET) {
            return Err(Error::SingularTransform { det });
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        AffineMap {
            linear: [[1.0, 0.0], [0.0, 1.0]],
            translation: Point::ORIGIN,
        }
    }

    /// Counterclockwise rotation by `theta` about `pivot`.
    pub fn rotation_about(pivot: Point, theta: f64) -> Self {
        let (s, c) = (fmath::sin(theta), fmath::cos(theta));
        let linear = [[c, -s], [s, c]];
        let moved = Point::new(c * pivot.x - s * pivot.y, s * pivot.x + c * pivot.y);
        AffineMap {
            linear,
            translation: pivot - moved,
        }
    }

    pub fn linear(&self) -> [[f64; 2]; 2] {
        self.linear
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    pub fn det(&self) -> f64 {
        let a = self.linear;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    #[inline]
    pub fn apply_linear(&self, v: Point) -> Point {
        let a = self.linear;
        Point::new(a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y)
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.apply_linear(p) + self.translation
    }

    pub fn apply_codebook(&self, cb: &Codebook) -> Result<Codebook> {
        Codebook::new(cb.iter().map(|&p| self.apply(p)).collect())
    }

    /// `c` when `A = c·Q` with `Q` orthogonal, i.e. `AᵀA = c² I`.
    pub fn similarity_ratio(&self) -> Option<f64> {
        let c1 = Point::new(self.linear[0][0], self.linear[1][0]);
        let c2 = Point::new(self.linear[0][1], self.linear[1][1]);
        let (n1, n2) = (c1.norm_sq(), c2.norm_sq());
        let scale = n1.max(n2);
        let tol = 1e-12 * scale;
        ((n1 - n2).abs() <= tol && c1.dot(c2).abs() <= tol).then(|| fmath::sqrt(n1))
    }

    /// Length ratio `|A u| / |u|` along direction `u`.
    pub fn line_ratio(&self, direction: Point) -> f64 {
        self.apply_linear(direction).norm() / direction.norm()
    }

    /// Quantization error of the image measure under a similarity: `c² · error`.
    pub fn transport_error(&self, error: f64) -> Result<f64> {
        match self.similarity_ratio() {
            Some(c) => Ok(c * c * error),
            None => Err(domain(
                "error transport needs a similarity; use transport_line_error for measures on a line",
            )),
        }
    }

    /// Quantization error of the image of a measure supported on a line with
    /// direction `u`. On a line every affine map acts as a similarity with ratio
    /// `|A u| / |u|`.
    pub fn transport_line_error(&self, error: f64, direction: Point) -> f64 {
        let c = self.line_ratio(direction);
        c * c * error
    }
}

/// Image of `cb` under `p ↦ A p + t`.
pub fn affine_transform(cb: &Codebook, linear: [[f64; 2]; 2], translation: Point) -> Result<Codebook> {
    AffineMap::new(linear, translation)?.apply_codebook(cb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn segment_examples() {
        let r = segment_codebook(0.0, 1.0, 1).unwrap();
        assert_eq!(r.codebook.points(), &[Point::new(0.5, 0.0)]);
        assert!(close(r.error, 1.0 / 12.0, 1e-17));
        let r = segment_codebook(0.0, 1.0, 2).unwrap();
        assert_eq!(r.codebook.points(), &[Point::new(0.25, 0.0), Point::new(0.75, 0.0)]);
        assert!(close(r.error, 1.0 / 48.0, 1e-17));
        let r = segment_codebook(0.0, 1.0, 5).unwrap();
        let xs: Vec<f64> = r.codebook.iter().map(|p| p.x).collect();
        for (x, want) in xs.iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]) {
            assert!(close(*x, want, 1e-15));
        }
        assert!(close(r.error, 1.0 / 300.0, 1e-17));
        assert!(segment_codebook(0.0, 1.0, 0).is_err());
        assert!(segment_codebook(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn circle_examples() {
        let r = circle_codebook(1).unwrap();
        assert_eq!(r.codebook.points(), &[Point::ORIGIN]);
        assert_eq!(r.error, 1.0);
        let r = circle_codebook(2).unwrap();
        let p = r.codebook.points();
        assert!(close(p[0].x, 0.0, 1e-15) && close(p[0].y, 2.0 / PI, 1e-15));
        assert!(close(p[1].x, 0.0, 1e-15) && close(p[1].y, -2.0 / PI, 1e-15));
        assert!(close(r.error, 1.0 - 4.0 / (PI * PI), 1e-15));
        assert!(close(r.error, 0.594715, 1e-6));
        let r = circle_codebook(4).unwrap();
        for (j, p) in r.codebook.iter().enumerate() {
            assert!(close(p.norm(), 2.0 * core::f64::consts::SQRT_2 / PI, 1e-15));
            assert!(close(p.norm(), 0.900_316_638_077_960_3, 1e-6));
            let ang = fmath::atan2(p.y, p.x);
            let want = [45.0f64, 135.0, -135.0, -45.0][j].to_radians();
            assert!(close(ang, want, 1e-14));
        }
        assert!(close(r.error, 1.0 - 16.0 / (PI * PI) * 0.5, 1e-15));
        assert!(circle_codebook(0).is_err());
    }

    #[test]
    fn circle_error_matches_naive_formula_where_stable() {
        for n in 2..200 {
            let s = fmath::sin(PI / n as f64);
            let naive = 1.0 - (n * n) as f64 / (PI * PI) * s * s;
            assert!(close(circle_error(n), naive, 1e-14), "n = {n}");
            let rad = n as f64 / PI * s;
            assert!(close(circle_radius(n), rad, 1e-15));
        }
    }

    #[test]
    fn triangle_examples() {
        let r = triangle_small_n(1).unwrap();
        assert!(close(r.codebook[0].x, 0.5, 1e-16) && close(r.codebook[0].y, SQRT3 / 6.0, 1e-16));
        assert_eq!(r.error, 1.0 / 6.0);
        let r = triangle_small_n(3).unwrap();
        assert_eq!(r.error, 7.0 / 192.0);
        assert!(close(r.codebook[0].x, 13.0 / 16.0, 0.0));
        let r = triangle_small_n(2).unwrap();
        assert!(close(r.error, 0.0994281, 5e-8));
        assert!(close(r.codebook[0].x, 0.314187, 5e-6) && close(r.codebook[1].y, 0.131985, 5e-6));
        let r = triangle_small_n(5).unwrap();
        assert!(close(r.error, 0.020525, 5e-7));
        assert!(triangle_small_n(0).is_err());
        assert!(triangle_small_n(7).is_err());
    }

    #[test]
    fn polished_sets_stay_near_tabulated_ones() {
        for n in 1..=6 {
            let got = triangle_small_n(n).unwrap();
            let table = triangle_tabulated(n).unwrap();
            let gap = got
                .codebook
                .iter()
                .zip(table.iter())
                .map(|(a, b)| a.dist(*b))
                .fold(0.0, f64::max);
            assert!(gap < 5e-6, "n = {n}: moved {gap}");
            let eval = exact::evaluate(&unit_triangle_curve(), &got.codebook).unwrap();
            assert!(eval.centroid_residual(&got.codebook) < 1e-12, "n = {n}");
            let table_err = TRIANGLE_TABLE[n - 1].1;
            assert!(close(got.error, table_err, 5e-7), "n = {n}: {}", got.error);
        }
    }

    #[test]
    fn six_means_from_family() {
        let r = triangle_3k3_codebook(1).unwrap();
        let ClosedFormCase::Triangle3k3 { k, r: ratio } = r.case else {
            panic!("wrong case")
        };
        assert_eq!(k, 1);
        assert!(close(ratio, (8.0 - 2.0 * SQRT7) / 9.0, 1e-15));
        assert!(close(r.codebook[0].x, 0.112854, 5e-7));
        assert!(close(r.codebook[0].y, 0.0651563, 5e-8));
        assert!(close(r.error, 0.0132077, 5e-8));
        assert!(close(r.error, 7.0 * (23.0 - 8.0 * SQRT7) / 972.0, 1e-16));
        assert!(triangle_3k3_codebook(0).is_err());
    }

    #[test]
    fn family_formulas_match_unsimplified_forms() {
        // oracle: the unsimplified expressions, evaluated directly
        let mut last = f64::INFINITY;
        for k in 1..=10_000usize {
            let kf = k as f64;
            let r_lit = (8.0 - 2.0 * SQRT7 * kf) / (16.0 - 7.0 * kf * kf);
            let v_lit = 7.0 * (7.0 * kf * kf - 8.0 * SQRT7 * kf + 16.0)
                / (12.0 * (16.0 - 7.0 * kf * kf) * (16.0 - 7.0 * kf * kf));
            let r = triangle_3k3_ratio(k);
            assert!(r > 0.0 && r < 0.5);
            assert!(r < last, "r not decreasing at k = {k}");
            last = r;
            assert!(close(r, r_lit, 1e-12 * r_lit.abs().max(1.0)), "k = {k}");
            assert!(((triangle_3k3_error(k) - v_lit) / v_lit).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn dispatcher_names_supported_families() {
        assert!(triangle_codebook(6).is_ok());
        assert_eq!(triangle_codebook(9).unwrap().n(), 9);
        let err = triangle_codebook(7).unwrap_err();
        assert!(alloc::format!("{err}").contains("3k + 3"));
    }

    #[test]
    fn affine_basics() {
        let cb = segment_codebook(0.0, 1.0, 3).unwrap().codebook;
        assert_eq!(AffineMap::identity().apply_codebook(&cb).unwrap(), cb);
        assert!(matches!(
            AffineMap::new([[1.0, 2.0], [2.0, 4.0]], Point::ORIGIN),
            Err(Error::SingularTransform { .. })
        ));
        let rot = AffineMap::rotation_about(Point::new(1.0, 1.0), 0.3);
        assert!(close(rot.similarity_ratio().unwrap(), 1.0, 1e-15));
        assert!(rot.apply(Point::new(1.0, 1.0)).dist(Point::new(1.0, 1.0)) < 1e-15);
        let scaled = AffineMap::new([[0.0, -3.0], [3.0, 0.0]], Point::new(5.0, 0.0)).unwrap();
        assert!(close(scaled.transport_error(0.5).unwrap(), 4.5, 1e-15));
        let shear = AffineMap::new([[1.0, 0.0], [SQRT3, 1.0]], Point::ORIGIN).unwrap();
        assert!(shear.similarity_ratio().is_none());
        assert!(shear.transport_error(1.0).is_err());
    }
}
