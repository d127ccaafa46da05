//! Jobs for the external figure renderer.
//!
//! A job names its input files, a style and an output image:
//! `{"inputs": ["report.json"], "style": "curves", "output": "loss.png"}`.
//! Rendering happens outside this crate; [`PlotJob::load`] checks that every
//! input matches a schema the style can draw.
//!
//! | style       | accepted inputs                                           |
//! |-------------|-----------------------------------------------------------|
//! | `scatter3d` | S² measure files, run reports with an S² measure          |
//! | `heatmap`   | grid densities, run reports with a grid density           |
//! | `so3ball`   | SO(3) measure files, run reports with an SO(3) measure    |
//! | `curves`    | run reports (loss traces)                                 |
//! | `timing`    | timing tables written by `bench speed --json`             |

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bench::TimingTable;
use crate::error::{Error, Result};
use crate::experiment::{RunReport, RunResult};
use crate::io::{read_json, GridDensityFile, ManifoldKind, MeasureFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotStyle {
    Scatter3d,
    Heatmap,
    So3ball,
    Curves,
    Timing,
}

impl fmt::Display for PlotStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlotStyle::Scatter3d => "scatter3d",
            PlotStyle::Heatmap => "heatmap",
            PlotStyle::So3ball => "so3ball",
            PlotStyle::Curves => "curves",
            PlotStyle::Timing => "timing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotJob {
    pub inputs: Vec<PathBuf>,
    pub style: PlotStyle,
    pub output: PathBuf,
}

/// A parsed job input.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotInput {
    Measure(MeasureFile),
    Density(GridDensityFile),
    Report(Box<RunReport>),
    Timing(TimingTable),
}

impl PlotJob {
    /// Reads and checks every input against the style.
    pub fn load(&self) -> Result<Vec<PlotInput>> {
        if self.inputs.is_empty() {
            return Err(Error::invalid("a plot job needs at least one input"));
        }
        self.inputs.iter().map(|p| self.load_one(p)).collect()
    }

    fn load_one(&self, path: &Path) -> Result<PlotInput> {
        let value: Value = read_json(path)?;
        let mismatch = |what: &str| Error::invalid(format!("{}: {what} for style {}", path.display(), self.style));
        let parse = |e: serde_json::Error| Error::invalid(format!("{}: {e}", path.display()));
        let input = if value.get("config").is_some() {
            PlotInput::Report(Box::new(serde_json::from_value(value).map_err(parse)?))
        } else if value.get("manifold").is_some() {
            let m: MeasureFile = serde_json::from_value(value).map_err(parse)?;
            m.to_measure()?;
            PlotInput::Measure(m)
        } else if value.get("thetas").is_some() {
            let d: GridDensityFile = serde_json::from_value(value).map_err(parse)?;
            d.grid()?;
            PlotInput::Density(d)
        } else if value.get("rows").is_some() {
            PlotInput::Timing(serde_json::from_value(value).map_err(parse)?)
        } else {
            return Err(mismatch("not a measure, grid density, run report or timing table"));
        };
        let measure_kind = |m: &MeasureFile| (m.manifold, m.dim);
        let fits = match (&input, self.style) {
            (PlotInput::Measure(m), PlotStyle::Scatter3d) => measure_kind(m) == (ManifoldKind::Sphere, 3),
            (PlotInput::Measure(m), PlotStyle::So3ball) => m.manifold == ManifoldKind::So3,
            (PlotInput::Density(_), PlotStyle::Heatmap) => true,
            (PlotInput::Report(_), PlotStyle::Curves) => true,
            (PlotInput::Report(r), style) => match (&r.result, style) {
                (RunResult::Measure { measure, .. }, PlotStyle::Scatter3d) => {
                    measure_kind(measure) == (ManifoldKind::Sphere, 3)
                }
                (RunResult::Measure { measure, .. }, PlotStyle::So3ball) => measure.manifold == ManifoldKind::So3,
                (RunResult::GridDensity { .. }, PlotStyle::Heatmap) => true,
                _ => false,
            },
            (PlotInput::Timing(_), PlotStyle::Timing) => true,
            _ => false,
        };
        if fits {
            Ok(input)
        } else {
            Err(mismatch("input cannot be drawn"))
        }
    }
}
