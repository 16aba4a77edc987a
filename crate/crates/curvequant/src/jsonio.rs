//! Codebook and result JSON.
//!
//! ```json
//! {"n": 2, "points": [[0.25, 0.0], [0.75, 0.0]], "distortion": 0.0208…,
//!  "shape": "segment", "provenance": {"kind": "closed-form", "source": "…"}}
//! ```
//!
//! Solver results carry the same fields plus convergence diagnostics.

use std::path::Path;

use serde::{Deserialize, Serialize};

use curvequant_core::{Codebook, Point, QuantizationResult};

use crate::error::{CliError, Result};
use crate::numfmt::{exact_vec, Exact};

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub kind: &'static str,
    pub source: String,
}

#[derive(Debug, Serialize)]
pub struct CodebookDoc {
    pub n: usize,
    pub points: Vec<[Exact; 2]>,
    pub distortion: Exact,
    pub shape: String,
    pub provenance: Provenance,
}

impl CodebookDoc {
    pub fn new(cb: &Codebook, distortion: f64, shape: &str, provenance: Provenance) -> Self {
        CodebookDoc {
            n: cb.len(),
            points: cb.iter().map(|p| [Exact(p.x), Exact(p.y)]).collect(),
            distortion: Exact(distortion),
            shape: shape.into(),
            provenance,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolveDoc {
    #[serde(flatten)]
    pub codebook: CodebookDoc,
    pub cell_masses: Vec<Exact>,
    pub centroid_residual: Exact,
    pub iterations: usize,
    pub converged: bool,
    pub restart: usize,
    pub repairs: usize,
    pub seed: u64,
}

impl SolveDoc {
    pub fn new(res: &QuantizationResult, shape: &str, seed: u64, source: String) -> Self {
        SolveDoc {
            codebook: CodebookDoc::new(
                &res.codebook,
                res.distortion,
                shape,
                Provenance {
                    kind: "solver",
                    source,
                },
            ),
            cell_masses: exact_vec(&res.cell_masses),
            centroid_residual: Exact(res.centroid_residual),
            iterations: res.iterations,
            converged: res.converged,
            restart: res.restart,
            repairs: res.repairs,
            seed,
        }
    }
}

pub fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

#[derive(Deserialize)]
struct PointsOnly {
    points: Vec<[f64; 2]>,
}

/// Reads the `points` of a codebook document.
pub fn parse_codebook(text: &str) -> std::result::Result<Codebook, String> {
    let doc: PointsOnly = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Codebook::new(doc.points.into_iter().map(Point::from).collect()).map_err(|e| e.to_string())
}

pub fn load_codebook(path: &Path) -> Result<Codebook> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_codebook(&text).map_err(|m| CliError::input(path, m))
}
