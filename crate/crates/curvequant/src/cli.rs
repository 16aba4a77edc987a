//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use curvequant_core::closedform;
use curvequant_core::curve::{make_segment, make_unit_circle, make_unit_triangle_boundary, DEFAULT_NODES};
use curvequant_core::solver::{Init, DEFAULT_MAX_ITERS, DEFAULT_REL_TOL, DEFAULT_RESTARTS};
use curvequant_core::{Codebook, CurveDistribution, Point, SolverConfig};

use crate::curvefile::CurveFile;
use crate::error::{CliError, Result};
use crate::jsonio::{self, CodebookDoc, Provenance, SolveDoc};
use crate::manifest::{self, RunManifest};
use crate::numfmt::significant;
use crate::sweep::{self, IntRange, Source};
use crate::verify::{self, Group, VerifyOptions};
use crate::{parallel, svg};

#[derive(Debug, Parser)]
#[command(name = "curvequant", version, about = "Optimal n-point quantizers for measures on plane curves")]
pub struct Cli {
    /// Write every output file plus manifest.json into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Segment,
    Circle,
    Triangle,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::Segment => "segment",
            Shape::Circle => "circle",
            Shape::Triangle => "triangle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form optimal codebook and quantization error.
    ClosedForm(ClosedFormArgs),
    /// Best-of-restarts Lloyd search on a builtin shape or a curve file.
    Solve(SolveArgs),
    /// Cross-check closed forms, solver and oracles; exit 1 on any failed row.
    Verify(VerifyArgs),
    /// CSV of n, V_n, n^(2/s) V_n and the dimension statistic.
    Sweep(SweepArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::ClosedForm(_) | Command::Replay(_) => None,
            Command::Solve(a) => Some(a.seed),
            Command::Verify(a) => Some(a.seed),
            Command::Sweep(a) => Some(a.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ClosedFormArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    #[arg(long)]
    pub n: usize,
    /// Segment start.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Segment end.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum InitKind {
    #[value(name = "kmeans++")]
    #[serde(rename = "kmeans++")]
    KMeansPlusPlus,
    #[value(name = "curve-uniform")]
    #[serde(rename = "curve-uniform")]
    CurveUniform,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["shape", "curve"]))]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub shape: Option<Shape>,
    /// Curve description file (JSON).
    #[arg(long, value_name = "FILE")]
    pub curve: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value_t = InitKind::KMeansPlusPlus)]
    pub init: InitKind,
    /// Start from this codebook file instead (a single restart).
    #[arg(long, value_name = "FILE")]
    pub init_codebook: Option<PathBuf>,
    /// Quadrature nodes.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Also write figure.svg.
    #[arg(long)]
    pub emit_svg: bool,
    /// Parsed curve file, recorded so replays do not depend on the file.
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_def: Option<CurveFile>,
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_points: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Restrict to these groups (repeat or separate with commas).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub only: Vec<Group>,
    /// Quadrature nodes; tolerances that depend on it scale with (100000 / M)^2 below the default.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub quadrature: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[command(group = clap::ArgGroup::new("range").required(true).args(["n", "k"]))]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    /// Codebook sizes, e.g. 1..100.
    #[arg(long)]
    pub n: Option<IntRange>,
    /// Triangle family indices (n = 3k + 3), e.g. 1..50.
    #[arg(long)]
    pub k: Option<IntRange>,
    /// Dimension used in the coefficient column.
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Compare the regenerated outputs with the files next to the manifest.
    #[arg(long)]
    pub check: bool,
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: &'static str,
    pub contents: String,
    /// Printed on stdout when no output directory is given.
    pub stdout: bool,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// Human-readable summary.
    pub message: String,
    pub failure: Option<String>,
}

pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let args: Vec<OsString> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: Cli, argv: &[String]) -> Result<()> {
    let (command, echo, check) = match cli.command {
        Command::Replay(r) => {
            let m = RunManifest::load(&r.manifest)?;
            if matches!(m.config, Command::Replay(_)) {
                return Err(CliError::input(&r.manifest, "manifest records a replay"));
            }
            let dir = r.manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            (m.config, m.argv, r.check.then_some((dir, m.outputs)))
        }
        c => (c, manifest::echo_argv(argv), None),
    };
    let resolved = resolve(command)?;
    let outcome = execute(&resolved)?;

    if let Some((dir, outputs)) = &check {
        compare(dir, outputs, &outcome.artifacts)?;
    }
    match &cli.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            for a in &outcome.artifacts {
                write_file(&dir.join(a.name), &a.contents)?;
            }
            let outputs = outcome.artifacts.iter().map(|a| a.name.to_string()).collect();
            let m = RunManifest::new(echo, resolved, outputs);
            write_file(&dir.join(manifest::FILE_NAME), &m.to_json())?;
            print!("{}", outcome.message);
        }
        None => {
            let mut out = std::io::stdout().lock();
            for a in outcome.artifacts.iter().filter(|a| a.stdout) {
                out.write_all(a.contents.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
            }
            if outcome.artifacts.iter().any(|a| a.stdout) {
                eprint!("{}", outcome.message);
            } else {
                print!("{}", outcome.message);
            }
        }
    }
    if check.is_some() {
        eprintln!("replay matches the recorded outputs");
    }
    match outcome.failure {
        Some(f) => Err(CliError::Failed(f)),
        None => Ok(()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn compare(dir: &Path, outputs: &[String], produced: &[Artifact]) -> Result<()> {
    let mut diffs = Vec::new();
    for name in outputs {
        let path = dir.join(name);
        let old = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        match produced.iter().find(|a| a.name == name) {
            Some(a) if a.contents.as_bytes() == old => {}
            _ => diffs.push(name.clone()),
        }
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("replay differs from recorded outputs: {}", diffs.join(", "))))
    }
}

/// Inlines every input file so the recorded command no longer depends on it.
fn resolve(command: Command) -> Result<Command> {
    Ok(match command {
        Command::Solve(mut a) => {
            if a.curve_def.is_none() {
                if let Some(path) = &a.curve {
                    a.curve_def = Some(CurveFile::load(path)?);
                }
            }
            if a.init_points.is_none() {
                if let Some(path) = &a.init_codebook {
                    let cb = jsonio::load_codebook(path)?;
                    a.init_points = Some(cb.iter().map(|p| [p.x, p.y]).collect());
                }
            }
            Command::Solve(a)
        }
        c => c,
    })
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::ClosedForm(a) => closed_form(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Replay(_) => Err(CliError::Usage("nested replay".into())),
    }
}

fn builtin(shape: Shape, a: f64, b: f64, nodes: usize) -> curvequant_core::Result<CurveDistribution> {
    let dist = match shape {
        Shape::Segment => make_segment(a, b)?,
        Shape::Circle => make_unit_circle(),
        Shape::Triangle => make_unit_triangle_boundary(),
    };
    if dist.node_count() == nodes {
        Ok(dist)
    } else {
        dist.with_resolution(nodes)
    }
}

fn closed_form(a: &ClosedFormArgs) -> Result<Outcome> {
    let r = match a.shape {
        Shape::Segment => closedform::segment_codebook(a.a, a.b, a.n)?,
        Shape::Circle => closedform::circle_codebook(a.n)?,
        Shape::Triangle => closedform::triangle_codebook(a.n)?,
    };
    let doc = CodebookDoc::new(
        &r.codebook,
        r.error,
        a.shape.name(),
        Provenance {
            kind: "closed-form",
            source: r.case.tag().into(),
        },
    );
    Ok(Outcome {
        artifacts: vec![Artifact {
            name: "codebook.json",
            contents: jsonio::to_pretty(&doc),
            stdout: true,
        }],
        message: format!("V_{} = {}\n", a.n, significant(r.error, 12)),
        failure: None,
    })
}

fn solve(a: &SolveArgs) -> Result<Outcome> {
    let (dist, shape) = match (&a.curve_def, a.shape) {
        (Some(desc), _) => (desc.distribution(a.nodes)?, "custom"),
        (None, Some(s)) => (builtin(s, a.a, a.b, a.nodes)?, s.name()),
        (None, None) => match &a.curve {
            Some(path) => (CurveFile::load(path)?.distribution(a.nodes)?, "custom"),
            None => return Err(CliError::Usage("one of --shape or --curve is required".into())),
        },
    };
    let init = match &a.init_points {
        Some(pts) => Init::Codebook(Codebook::new(pts.iter().map(|&p| Point::from(p)).collect())?),
        None => match a.init {
            InitKind::KMeansPlusPlus => Init::KMeansPlusPlus,
            InitKind::CurveUniform => Init::CurveUniform,
        },
    };
    let init_name = match init {
        Init::Codebook(_) => "user codebook".to_string(),
        _ => format!("{} restarts, {}", a.restarts, init_label(a.init)),
    };
    let cfg = SolverConfig::new(a.n)
        .with_restarts(a.restarts)
        .with_seed(a.seed)
        .with_max_iters(a.max_iters)
        .with_rel_tol(a.rel_tol)
        .with_init(init);
    let res = parallel::solve(&dist, &cfg)?;
    let doc = SolveDoc::new(&res, shape, a.seed, format!("lloyd ({init_name})"));
    let mut artifacts = vec![Artifact {
        name: "result.json",
        contents: jsonio::to_pretty(&doc),
        stdout: true,
    }];
    if a.emit_svg {
        artifacts.push(Artifact {
            name: "figure.svg",
            contents: svg::render(&dist, &res.codebook),
            stdout: false,
        });
    }
    Ok(Outcome {
        artifacts,
        message: format!(
            "V_{} ~ {} ({} iterations, {}converged, centroid residual {})\n",
            a.n,
            significant(res.distortion, 12),
            res.iterations,
            if res.converged { "" } else { "not " },
            significant(res.centroid_residual, 3)
        ),
        failure: None,
    })
}

fn init_label(k: InitKind) -> &'static str {
    match k {
        InitKind::KMeansPlusPlus => "kmeans++",
        InitKind::CurveUniform => "curve-uniform",
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    if a.quadrature < 1000 {
        return Err(CliError::Usage("--quadrature must be at least 1000".into()));
    }
    if a.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    let opts = VerifyOptions {
        only: a.only.clone(),
        quadrature: a.quadrature,
        seed: a.seed,
        restarts: a.restarts,
    };
    let report = verify::run(&opts);
    let text = report.render();
    let failed = report.rows.iter().filter(|r| !r.pass).count();
    Ok(Outcome {
        artifacts: vec![Artifact {
            name: "report.txt",
            contents: text.clone(),
            stdout: false,
        }],
        message: text,
        failure: (failed > 0).then(|| format!("{failed} verification rows failed")),
    })
}

fn sweep(a: &SweepArgs) -> Result<Outcome> {
    if !(a.s > 0.0) {
        return Err(CliError::Usage(format!("--s must be positive, got {}", a.s)));
    }
    let ns: Vec<usize> = match (a.n, a.k) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --n or --k".into())),
        (Some(r), None) => r.iter().collect(),
        (None, Some(k)) if a.shape == Shape::Triangle => k.iter().map(|k| 3 * k + 3).collect(),
        (None, Some(_)) => return Err(CliError::Usage("--k applies to the triangle only".into())),
        (None, None) => return Err(CliError::Usage("one of --n or --k is required".into())),
    };
    let tri;
    let source = match a.shape {
        Shape::Segment => {
            if !(a.a < a.b) {
                return Err(CliError::Usage(format!("segment needs a < b, got a = {}, b = {}", a.a, a.b)));
            }
            Source::Segment { a: a.a, b: a.b }
        }
        Shape::Circle => Source::Circle,
        Shape::Triangle => {
            tri = builtin(Shape::Triangle, 0.0, 1.0, a.nodes)?;
            Source::Triangle {
                dist: &tri,
                cfg: SolverConfig::new(1).with_restarts(a.restarts).with_seed(a.seed),
            }
        }
    };
    let rows = sweep::rows(&source, ns, a.s)?;
    Ok(Outcome {
        artifacts: vec![Artifact {
            name: "sweep.csv",
            contents: sweep::to_csv(&rows),
            stdout: true,
        }],
        message: format!("{} rows\n", rows.len()),
        failure: None,
    })
}
