//! Run specifications and their static validation.

use std::fmt;
use std::path::{Path, PathBuf};

use cpd_core::geometry::{ConvexPolygon, Point2};
use cpd_core::GeometryError;
use serde::{Deserialize, Serialize};

use crate::dto::PolygonDto;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Lloyd,
    Search,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// A named preset or explicit counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Preset(String),
    Polygon(PolygonDto),
}

impl DomainSpec {
    pub const PRESETS: [&'static str; 2] = ["unit-square", "unit-hexagon"];

    /// Parses a `--domain` argument: a preset name or a path to a polygon
    /// JSON file.
    pub fn from_arg(arg: &str) -> Result<Self, CliError> {
        if Self::PRESETS.contains(&arg) {
            return Ok(Self::Preset(arg.to_owned()));
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Ok(Self::Preset(arg.to_owned()));
        }
        let text = std::fs::read_to_string(path)?;
        Ok(Self::Polygon(serde_json::from_str(&text)?))
    }

    pub fn resolve(&self) -> Result<ConvexPolygon, DomainError> {
        match self {
            Self::Preset(name) => match name.as_str() {
                "unit-square" => Ok(ConvexPolygon::unit_square()),
                "unit-hexagon" => Ok(ConvexPolygon::regular_hexagon(Point2::new(0.0, 0.0), 1.0)),
                other => Err(DomainError::UnknownPreset(other.to_owned())),
            },
            Self::Polygon(p) => p.to_polygon().map_err(DomainError::Geometry),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainError {
    UnknownPreset(String),
    Geometry(GeometryError),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownPreset(name) => write!(
                f,
                "unknown preset {name:?}; expected one of {}",
                DomainSpec::PRESETS.join(", ")
            ),
            Self::Geometry(GeometryError::NonConvex(i)) => {
                write!(f, "convexity violation at vertex {i}: vertices must form a convex counterclockwise polygon")
            }
            Self::Geometry(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub mode: Mode,
    pub domain: DomainSpec,
    pub lambdas: Vec<f64>,
    pub seed: u64,
    /// Random starts per cell count in search and sweep modes.
    pub restarts: usize,
    /// Lloyd iteration cap; per-round Lloyd steps in search and sweep modes.
    pub max_iter: Option<usize>,
    /// Displacement tolerance in lloyd mode; energy dedup tolerance on the
    /// rescaled energy in search and sweep modes.
    pub tol: Option<f64>,
    /// Initial site count in lloyd mode; defaults to the honeycomb estimate.
    pub sites: Option<usize>,
    /// Interval half-width coefficient `C`.
    pub width: f64,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

impl RunSpec {
    pub fn new(mode: Mode, lambdas: Vec<f64>, out: impl Into<PathBuf>) -> Self {
        Self {
            mode,
            domain: DomainSpec::Preset("unit-square".into()),
            lambdas,
            seed: 0,
            restarts: 50,
            max_iter: None,
            tol: None,
            sites: None,
            width: 1.0,
            out: out.into(),
            formats: vec![Format::Json, Format::Csv, Format::Svg],
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.to_owned(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Lists every violated constraint of `spec` without running anything.
pub fn validate(spec: &RunSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Err(e) = spec.domain.resolve() {
        out.push(Diagnostic::new("domain", e.to_string()));
    }
    let needs_lambda = spec.mode != Mode::Verify;
    if needs_lambda && spec.lambdas.is_empty() {
        out.push(Diagnostic::new("lambda", "missing; required for this mode"));
    }
    if matches!(spec.mode, Mode::Lloyd | Mode::Search) && spec.lambdas.len() > 1 {
        out.push(Diagnostic::new("lambda", "this mode takes a single value; use sweep for a list"));
    }
    for &l in &spec.lambdas {
        if !l.is_finite() {
            out.push(Diagnostic::new("lambda", format!("{l} is not finite")));
        } else if spec.mode == Mode::Lloyd && l < 0.0 {
            out.push(Diagnostic::new("lambda", format!("{l} must be >= 0 in lloyd mode")));
        } else if matches!(spec.mode, Mode::Search | Mode::Sweep) && l <= 0.0 {
            out.push(Diagnostic::new("lambda", format!("{l} must be > 0 in search and sweep modes")));
        }
    }
    if spec.mode == Mode::Lloyd && spec.sites.is_none() && spec.lambdas.contains(&0.0) {
        out.push(Diagnostic::new("sites", "required when lambda is 0"));
    }
    if spec.sites == Some(0) {
        out.push(Diagnostic::new("sites", "must be positive"));
    }
    if spec.restarts == 0 {
        out.push(Diagnostic::new("restarts", "must be positive"));
    }
    if spec.max_iter == Some(0) {
        out.push(Diagnostic::new("max-iter", "must be positive"));
    }
    if let Some(t) = spec.tol {
        if !(t > 0.0 && t.is_finite()) {
            out.push(Diagnostic::new("tol", "must be positive and finite"));
        }
    }
    if !(spec.width > 0.0 && spec.width.is_finite()) {
        out.push(Diagnostic::new("width", "must be positive and finite"));
    }
    if spec.formats.is_empty() {
        out.push(Diagnostic::new("format", "at least one output format is required"));
    }
    out
}
