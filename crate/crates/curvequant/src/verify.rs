//! Cross-checks of closed forms, solver and oracles, grouped by criterion.

use std::f64::consts::PI;
use std::fmt::Write;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use curvequant_core::asymptotics::{circle_series, estimate_coefficient, estimate_dimension, segment_series, triangle_series};
use curvequant_core::closedform::{self, AffineMap};
use curvequant_core::curve::{self, make_segment, make_unit_circle, make_unit_triangle_boundary, DEFAULT_NODES};
use curvequant_core::solver::{lloyd_run, oracle_circle_offset, oracle_segment_dp, verify_centroid_condition, Init};
use curvequant_core::{Codebook, CurveDistribution, Point, SolverConfig};

use crate::numfmt::significant;
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Segment,
    Circle,
    Triangle,
    Family,
    Oracle,
    Asymptotics,
    Properties,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::Segment,
        Group::Circle,
        Group::Triangle,
        Group::Family,
        Group::Oracle,
        Group::Asymptotics,
        Group::Properties,
    ];

    /// Acceptance criterion number covered by the group.
    pub fn criterion(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Segment => "segment",
            Group::Circle => "circle",
            Group::Triangle => "triangle",
            Group::Family => "family",
            Group::Oracle => "oracle",
            Group::Asymptotics => "asymptotics",
            Group::Properties => "properties",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub only: Vec<Group>,
    pub quadrature: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            only: Vec::new(),
            quadrature: DEFAULT_NODES,
            seed: 7,
            restarts: curvequant_core::solver::DEFAULT_RESTARTS,
        }
    }
}

impl VerifyOptions {
    /// Multiplier for tolerances that depend on the quadrature: midpoint error falls
    /// like `M⁻²`, so coarse grids get proportionally looser bounds.
    pub fn tolerance_scale(&self) -> f64 {
        (DEFAULT_NODES as f64 / self.quadrature as f64).powi(2).max(1.0)
    }

    fn groups(&self) -> Vec<Group> {
        if self.only.is_empty() {
            Group::ALL.to_vec()
        } else {
            Group::ALL.into_iter().filter(|g| self.only.contains(g)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub group: Group,
    pub case: String,
    pub expected: String,
    pub computed: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn group_rows(&self, g: Group) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.group == g)
    }

    /// Plain-text table with one line per row and a closing summary.
    pub fn render(&self) -> String {
        let header = ["case", "expected", "computed", "tolerance", "status"];
        let cells: Vec<[&str; 5]> = self
            .rows
            .iter()
            .map(|r| [r.case.as_str(), &r.expected, &r.computed, &r.tolerance, status(r.pass)])
            .collect();
        let mut width = header.map(str::len);
        for c in &cells {
            for (w, s) in width.iter_mut().zip(c) {
                *w = (*w).max(s.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, c: [&str; 5]| {
            let mut s = String::new();
            for (i, (w, v)) in width.iter().zip(c).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w - v.chars().count();
                s.push_str(v);
                if i < 4 {
                    s.push_str(&" ".repeat(pad));
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(&mut out, header);
        let total: usize = width.iter().sum::<usize>() + 8;
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for c in cells {
            line(&mut out, c);
        }
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        let _ = writeln!(out, "{} rows, {} passed, {} failed", self.rows.len(), self.rows.len() - failed, failed);
        out
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn num(v: f64) -> String {
    significant(v, 12)
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

struct Rows {
    group: Group,
    rows: Vec<Row>,
}

impl Rows {
    fn push(&mut self, case: String, expected: String, computed: String, tolerance: String, pass: bool) {
        self.rows.push(Row {
            group: self.group,
            case,
            expected,
            computed,
            tolerance,
            pass,
        });
    }

    fn relative(&mut self, case: String, expected: f64, computed: f64, tol: f64) {
        let pass = rel(computed, expected) <= tol;
        self.push(case, num(expected), num(computed), format!("rel {tol:.0e}"), pass);
    }

    fn absolute(&mut self, case: String, expected: f64, computed: f64, tol: f64) {
        let pass = (computed - expected).abs() <= tol;
        self.push(case, num(expected), num(computed), format!("abs {tol:.0e}"), pass);
    }

    /// `deviation` must stay at or below `tol`.
    fn bound(&mut self, case: String, deviation: f64, tol: f64) {
        self.push(case, "0".into(), significant(deviation, 3), format!("< {tol:.0e}"), deviation <= tol);
    }

    fn error(&mut self, case: String, err: impl std::fmt::Display) {
        self.push(case, "-".into(), format!("error: {err}"), "-".into(), false);
    }
}

pub fn run(opts: &VerifyOptions) -> Report {
    let mut rows = Vec::new();
    for g in opts.groups() {
        let mut r = Rows { group: g, rows: Vec::new() };
        match g {
            Group::Segment => segment(opts, &mut r),
            Group::Circle => circle(opts, &mut r),
            Group::Triangle => triangle(opts, &mut r),
            Group::Family => family(opts, &mut r),
            Group::Oracle => oracle(&mut r),
            Group::Asymptotics => asymptotics(&mut r),
            Group::Properties => properties(opts, &mut r),
        }
        rows.extend(r.rows);
    }
    Report { rows }
}

fn at_resolution(dist: CurveDistribution, m: usize) -> CurveDistribution {
    if dist.node_count() == m {
        dist
    } else {
        dist.with_resolution(m).expect("resolution is validated by the caller")
    }
}

fn config(opts: &VerifyOptions, n: usize) -> SolverConfig {
    SolverConfig::new(n).with_restarts(opts.restarts).with_seed(opts.seed)
}

fn segment(opts: &VerifyOptions, r: &mut Rows) {
    let q = opts.tolerance_scale();
    let dist = at_resolution(make_segment(0.0, 1.0).expect("unit segment"), opts.quadrature);
    for n in 1..=16 {
        let res = match parallel::solve(&dist, &config(opts, n)) {
            Ok(res) => res,
            Err(e) => {
                r.error(format!("segment n={n}"), e);
                continue;
            }
        };
        r.relative(format!("segment n={n} distortion"), closedform::segment_error(0.0, 1.0, n), res.distortion, 1e-5 * q);
        let mut pts: Vec<Point> = res.codebook.iter().copied().collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));
        let dev = pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let x = (2 * i + 1) as f64 / (2 * n) as f64;
                (p.x - x).abs().max(p.y.abs())
            })
            .fold(0.0, f64::max);
        r.bound(format!("segment n={n} codebook"), dev, 1e-4 * q);
    }
}

fn circle(opts: &VerifyOptions, r: &mut Rows) {
    let q = opts.tolerance_scale();
    let dist = at_resolution(make_unit_circle(), opts.quadrature);
    for n in 1..=12 {
        let res = match parallel::solve(&dist, &config(opts, n)) {
            Ok(res) => res,
            Err(e) => {
                r.error(format!("circle n={n}"), e);
                continue;
            }
        };
        r.relative(format!("circle n={n} distortion"), closedform::circle_error(n), res.distortion, 1e-5 * q);
        let radius = closedform::circle_radius(n);
        let dev = res.codebook.iter().map(|p| (p.norm() - radius).abs()).fold(0.0, f64::max);
        r.bound(format!("circle n={n} radius"), dev, 1e-4 * q);
    }
}

const TRIANGLE_VALUES: [(usize, f64); 5] = [
    (2, 0.0994281),
    (3, 7.0 / 192.0),
    (4, 0.028269),
    (5, 0.020525),
    (6, 0.0132077),
];

fn triangle(opts: &VerifyOptions, r: &mut Rows) {
    let q = opts.tolerance_scale();
    let dist = at_resolution(make_unit_triangle_boundary(), opts.quadrature);
    for (n, v) in TRIANGLE_VALUES {
        let res = match parallel::solve(&dist, &config(opts, n)) {
            Ok(res) => res,
            Err(e) => {
                r.error(format!("triangle n={n}"), e);
                continue;
            }
        };
        r.absolute(format!("triangle n={n} distortion"), v, res.distortion, 2e-5 * q);
        if n == 3 {
            let s3 = 3f64.sqrt();
            let want = Codebook::new(vec![
                Point::new(13.0 / 16.0, s3 / 16.0),
                Point::new(0.5, 3.0 * s3 / 8.0),
                Point::new(3.0 / 16.0, s3 / 16.0),
            ])
            .expect("distinct points");
            let centre = Point::new(0.5, s3 / 6.0);
            let dev = (0..3)
                .filter_map(|k| {
                    let image = AffineMap::rotation_about(centre, 2.0 * PI * k as f64 / 3.0)
                        .apply_codebook(&want)
                        .ok()?;
                    res.codebook.matching_distance(&image)
                })
                .fold(f64::INFINITY, f64::min);
            r.bound("triangle n=3 codebook".into(), dev, 1e-4 * q);
        }
    }
}

/// The family error in unsimplified form.
fn family_error_unsimplified(k: usize) -> f64 {
    let k = k as f64;
    let s7 = 7f64.sqrt();
    7.0 * (7.0 * k * k - 8.0 * s7 * k + 16.0) / (12.0 * (16.0 - 7.0 * k * k).powi(2))
}

fn family(opts: &VerifyOptions, r: &mut Rows) {
    let q = opts.tolerance_scale();
    let dist = at_resolution(make_unit_triangle_boundary(), opts.quadrature);
    for k in 1..=8 {
        let cb = match closedform::triangle_3k3_codebook(k) {
            Ok(c) => c.codebook,
            Err(e) => {
                r.error(format!("family k={k}"), e);
                continue;
            }
        };
        match curvequant_core::solver::distortion(&dist, &cb) {
            Ok(v) => r.relative(format!("family k={k} distortion"), family_error_unsimplified(k), v, 1e-6 * q),
            Err(e) => r.error(format!("family k={k} distortion"), e),
        }
        match verify_centroid_condition(&dist, &cb) {
            Ok(c) => r.bound(format!("family k={k} centroid residual"), c.residual, 1e-6 * q),
            Err(e) => r.error(format!("family k={k} centroid residual"), e),
        }
    }
    for k in 1..=3 {
        match parallel::solve(&dist, &config(opts, 3 * k + 3)) {
            Ok(res) => r.relative(
                format!("family k={k} solver n={}", 3 * k + 3),
                family_error_unsimplified(k),
                res.distortion,
                1e-4 * q,
            ),
            Err(e) => r.error(format!("family k={k} solver"), e),
        }
    }
}

fn oracle(r: &mut Rows) {
    for n in 1..=8 {
        match oracle_segment_dp(0.0, 1.0, n, 10_000) {
            Ok(o) => r.relative(format!("segment dp n={n}"), closedform::segment_error(0.0, 1.0, n), o.distortion, 1e-4),
            Err(e) => r.error(format!("segment dp n={n}"), e),
        }
    }
    for n in 1..=12 {
        match oracle_circle_offset(n) {
            Ok(o) => r.relative(format!("circle offset n={n}"), closedform::circle_error(n), o.distortion, 1e-9),
            Err(e) => r.error(format!("circle offset n={n}"), e),
        }
    }
}

fn asymptotics(r: &mut Rows) {
    let n = 1024;
    let range = |r: &mut Rows, case: &str, v: f64| {
        let pass = (0.95..=1.05).contains(&v);
        r.push(case.into(), "1".into(), num(v), "[0.95, 1.05]".into(), pass);
    };
    match segment_series(0.0, 1.0, 2..=n).and_then(|s| Ok((estimate_dimension(&s)?, estimate_coefficient(&s, 1.0)?))) {
        Ok((d, c)) => {
            range(r, "segment dimension n=1024", d.value);
            r.relative("segment n^2 V_n n=1024".into(), 1.0 / 12.0, c.value, 1e-4);
        }
        Err(e) => r.error("segment series".into(), e),
    }
    match circle_series(2..=n).and_then(|s| Ok((estimate_dimension(&s)?, estimate_coefficient(&s, 1.0)?))) {
        Ok((d, c)) => {
            range(r, "circle dimension n=1024", d.value);
            r.relative("circle n^2 V_n n=1024".into(), PI * PI / 3.0, c.value, 1e-4);
        }
        Err(e) => r.error("circle series".into(), e),
    }
    match triangle_series([1000]).and_then(|s| estimate_coefficient(&s, 1.0)) {
        Ok(c) => r.relative("triangle n^2 V_n k=1000".into(), 0.75, c.value, 1e-2),
        Err(e) => r.error("triangle series".into(), e),
    }
}

fn shape(i: usize) -> CurveDistribution {
    match i {
        0 => make_segment(0.0, 1.0).expect("unit segment"),
        1 => make_unit_circle(),
        _ => make_unit_triangle_boundary(),
    }
}

fn properties(opts: &VerifyOptions, r: &mut Rows) {
    let q = opts.tolerance_scale();
    let shapes: Vec<CurveDistribution> = (0..3).map(|i| at_resolution(shape(i), opts.quadrature)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cases: Vec<(usize, usize, u64)> = (0..100)
        .map(|_| (rng.random_range(0..3), rng.random_range(1..=12), rng.random()))
        .collect();
    let outcomes = parallel::map(&cases, |&(s, n, seed)| {
        let res = lloyd_run(&shapes[s], &SolverConfig::new(n).with_seed(seed), 0)?;
        Ok::<_, curvequant_core::Error>(
            res.history
                .windows(2)
                .map(|w| (w[1] - w[0]) / w[0])
                .fold(f64::NEG_INFINITY, f64::max),
        )
    });
    let mut worst = f64::NEG_INFINITY;
    let mut errors = 0;
    for o in outcomes {
        match o {
            Ok(v) => worst = worst.max(v),
            Err(_) => errors += 1,
        }
    }
    let rise = worst.max(0.0);
    r.push(
        "Lloyd descent, 100 random cases: largest relative rise".into(),
        "0".into(),
        if errors > 0 { format!("{errors} errors") } else { significant(rise, 3) },
        "<= 1e-14".into(),
        errors == 0 && rise <= 1e-14,
    );

    let fixed: Vec<(&str, usize, closedform::ClosedFormResult)> = vec![
        ("segment n=5", 0, closedform::segment_codebook(0.0, 1.0, 5)),
        ("circle n=7", 1, closedform::circle_codebook(7)),
        ("triangle n=5", 2, closedform::triangle_small_n(5)),
        ("family k=3", 2, closedform::triangle_3k3_codebook(3)),
    ]
    .into_iter()
    .filter_map(|(name, s, c)| c.ok().map(|c| (name, s, c)))
    .collect();
    for (name, s, cf) in fixed {
        let n = cf.n();
        let cfg = SolverConfig::new(n).with_init(Init::Codebook(cf.codebook.clone()));
        match lloyd_run(&shapes[s], &cfg, 0) {
            Ok(res) => {
                let ok_iters = res.iterations <= 2 && res.converged;
                r.push(
                    format!("fixed point {name}: iterations"),
                    "<= 2".into(),
                    format!("{}{}", res.iterations, if res.converged { "" } else { " (not converged)" }),
                    "-".into(),
                    ok_iters,
                );
                r.bound(format!("fixed point {name}: centroid residual"), res.centroid_residual, 1e-7 * q);
            }
            Err(e) => r.error(format!("fixed point {name}"), e),
        }
    }

    let (mean, var) = curve::mean_and_variance(&shapes[2]);
    let want = Point::new(0.5, 3f64.sqrt() / 6.0);
    r.absolute("triangle mean x".into(), want.x, mean.x, 1e-9 * q);
    r.absolute("triangle mean y".into(), want.y, mean.y, 1e-9 * q);
    r.absolute("triangle variance".into(), 1.0 / 6.0, var, 1e-9 * q);

    let base = &shapes[0];
    for c in [0.5, 2.0, 10.0] {
        let scaled = match make_segment(0.0, c).map(|d| at_resolution(d, opts.quadrature)) {
            Ok(d) => d,
            Err(e) => {
                r.error(format!("scaling c={c}"), e);
                continue;
            }
        };
        for n in [2, 5] {
            let cfg = SolverConfig::new(n).with_restarts(4).with_seed(opts.seed);
            match (parallel::solve(base, &cfg), parallel::solve(&scaled, &cfg)) {
                (Ok(a), Ok(b)) => {
                    r.relative(format!("scaling c={c} n={n} distortion"), c * c * a.distortion, b.distortion, 1e-9);
                    let dev = a
                        .codebook
                        .iter()
                        .zip(b.codebook.iter())
                        .map(|(p, q)| (q.x - c * p.x).abs().max((q.y - c * p.y).abs()) / c)
                        .fold(0.0, f64::max);
                    r.bound(format!("scaling c={c} n={n} codebook"), dev, 1e-9);
                }
                (Err(e), _) | (_, Err(e)) => r.error(format!("scaling c={c} n={n}"), e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsimplified_family_formula_matches_simplified_one() {
        for k in 1..=50 {
            assert!(rel(closedform::triangle_3k3_error(k), family_error_unsimplified(k)) < 1e-12);
        }
    }

    #[test]
    fn tolerance_scale_follows_inverse_square() {
        let mut o = VerifyOptions::default();
        assert_eq!(o.tolerance_scale(), 1.0);
        o.quadrature = 10_000;
        assert!((o.tolerance_scale() - 100.0).abs() < 1e-9);
        o.quadrature = 1_000_000;
        assert_eq!(o.tolerance_scale(), 1.0);
    }

    #[test]
    fn oracle_group_passes_and_renders() {
        let opts = VerifyOptions {
            only: vec![Group::Oracle],
            ..VerifyOptions::default()
        };
        let report = run(&opts);
        assert_eq!(report.rows.len(), 20);
        assert!(report.passed());
        let text = report.render();
        assert!(text.starts_with("case"));
        assert!(text.ends_with("20 rows, 20 passed, 0 failed\n"));
    }
}
