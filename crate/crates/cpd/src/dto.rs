//! JSON shapes of the library types.

use std::collections::BTreeMap;

use cpd_core::energy::{ElResidual, EnergyBreakdown, HexagonalReference};
use cpd_core::geometry::{ConvexPolygon, Point2, PowerDiagram, WeightedGenerator};
use cpd_core::search::{Candidate, Provenance};
use cpd_core::GeometryError;
use serde::{Deserialize, Serialize};

/// `{"vertices": [[x, y], ...]}`, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDto {
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonDto {
    pub fn to_polygon(&self) -> Result<ConvexPolygon, GeometryError> {
        ConvexPolygon::new(self.vertices.iter().map(|&v| Point2::from(v)).collect())
    }
}

impl From<&ConvexPolygon> for PolygonDto {
    fn from(p: &ConvexPolygon) -> Self {
        Self { vertices: p.vertices().iter().map(|&v| v.into()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDto {
    pub generator: usize,
    pub vertices: Vec<[f64; 2]>,
}

/// `{"cells": [{"generator": i, "vertices": [...]}]}`; empty cells are
/// omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDto {
    pub cells: Vec<CellDto>,
}

impl From<&PowerDiagram> for DiagramDto {
    fn from(d: &PowerDiagram) -> Self {
        let cells = d
            .cells
            .iter()
            .filter_map(|c| {
                c.polygon.as_ref().map(|p| CellDto {
                    generator: c.generator,
                    vertices: PolygonDto::from(p).vertices,
                })
            })
            .collect();
        Self { cells }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDto {
    pub lambda: f64,
    pub perimeter: f64,
    pub transport: f64,
    pub total: f64,
}

impl From<EnergyBreakdown> for EnergyDto {
    fn from(e: EnergyBreakdown) -> Self {
        Self { lambda: e.lambda, perimeter: e.perimeter, transport: e.transport, total: e.total }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualDto {
    pub centroid: f64,
    pub weight: f64,
}

impl From<ElResidual> for ResidualDto {
    fn from(r: ElResidual) -> Self {
        Self { centroid: r.centroid, weight: r.weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDto {
    pub diameter: f64,
    pub cell_area: f64,
    pub cell_energy: f64,
    pub total_energy: f64,
    pub expected_cells: f64,
}

impl From<&HexagonalReference> for ReferenceDto {
    fn from(r: &HexagonalReference) -> Self {
        Self {
            diameter: r.diameter,
            cell_area: r.cell_area,
            cell_energy: r.cell_energy,
            total_energy: r.total_energy,
            expected_cells: r.expected_cells(),
        }
    }
}

/// A configuration with everything derived from its power diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDto {
    pub generators: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub masses: Vec<f64>,
    pub energy: EnergyDto,
    /// Energy over the honeycomb reference; absent for `λ = 0`.
    pub rescaled_energy: Option<f64>,
    pub cell_count: usize,
    pub residuals: Vec<ResidualDto>,
    pub converged: bool,
    pub side_histogram: BTreeMap<usize, usize>,
}

impl StateDto {
    pub fn weighted_generators(&self) -> Vec<WeightedGenerator> {
        self.generators
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| WeightedGenerator::new(s.into(), w))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceDto {
    pub initial_sites: usize,
    pub replica: usize,
    pub seed: u64,
}

impl From<Provenance> for ProvenanceDto {
    fn from(p: Provenance) -> Self {
        Self { initial_sites: p.initial_sites, replica: p.replica, seed: p.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDto {
    pub state: StateDto,
    pub provenance: ProvenanceDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LloydResultDto {
    pub mode: String,
    pub lambda: f64,
    pub seed: u64,
    pub domain: PolygonDto,
    pub initial_sites: usize,
    pub iterations: usize,
    pub state: StateDto,
    pub diagram: DiagramDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResultDto {
    pub mode: String,
    pub lambda: f64,
    pub seed: u64,
    pub domain: PolygonDto,
    pub interval: [usize; 2],
    pub reference: ReferenceDto,
    pub round_best: Vec<f64>,
    pub best: CandidateDto,
    pub ranked: Vec<CandidateDto>,
    pub side_histogram: BTreeMap<usize, usize>,
    pub diagram: DiagramDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntryDto {
    pub lambda: f64,
    pub directory: String,
    pub cell_count: usize,
    pub energy: EnergyDto,
    pub rescaled_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResultDto {
    pub mode: String,
    pub seed: u64,
    pub entries: Vec<SweepEntryDto>,
}

impl CandidateDto {
    pub fn from_candidate(c: &Candidate, state: StateDto) -> Self {
        Self { state, provenance: c.provenance.into() }
    }
}
