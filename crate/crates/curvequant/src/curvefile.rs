//! Curve description files:
//!
//! ```json
//! {"pieces": [{"kind": "line", "p0": [0, 0], "p1": [1, 0]},
//!             {"kind": "arc", "center": [1, 1], "radius": 1, "start": -1.5707963, "end": 0}],
//!  "density": "uniform"}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use curvequant_core::{CurveDistribution, Density, ParametricCurve, Piece, Point};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PieceDesc {
    Line { p0: [f64; 2], p1: [f64; 2] },
    Arc { center: [f64; 2], radius: f64, start: f64, end: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub pieces: Vec<PieceDesc>,
    #[serde(default = "uniform")]
    pub density: String,
}

fn uniform() -> String {
    "uniform".into()
}

impl CurveFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let desc: CurveFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if desc.density != "uniform" {
            return Err(format!("unsupported density {:?}; only \"uniform\" is accepted", desc.density));
        }
        Ok(desc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|m| CliError::input(path, m))
    }

    pub fn curve(&self) -> curvequant_core::Result<ParametricCurve> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| match *p {
                PieceDesc::Line { p0, p1 } => Piece::line(p0.into(), p1.into()),
                PieceDesc::Arc {
                    center,
                    radius,
                    start,
                    end,
                } => Piece::arc(Point::from(center), radius, start, end),
            })
            .collect::<curvequant_core::Result<Vec<_>>>()?;
        ParametricCurve::new(pieces)
    }

    pub fn distribution(&self, nodes: usize) -> curvequant_core::Result<CurveDistribution> {
        CurveDistribution::new(self.curve()?, Density::Uniform, nodes)
    }
}
