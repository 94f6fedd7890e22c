//! The limit energy `λ Σ √mᵢ + W₂(1, ν)` in measure coordinates and in
//! (site, weight) coordinates.
//!
//! Sign convention: a diagram weight `wᵢ` is the Kantorovich potential
//! `ψ(xᵢ)`, i.e. cell `i` minimises `|x − xᵢ|² − wᵢ`. Larger weight, larger
//! cell.

mod dual;
mod hexagon;

use alloc::vec::Vec;

pub use dual::{dual_objective, solve_weights, DualSolverConfig, KantorovichWeights};
pub use hexagon::{
    hexagonal_reference, rescale_domain, rescaled_energy, HexagonalReference, C6,
    HEXAGONAL_DENSITY,
};

use crate::error::{Error, Result};
use crate::geometry::{power_diagram, ConvexPolygon, Point2, PowerDiagram, WeightedGenerator};

/// The two terms of the energy and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub lambda: f64,
    /// `λ Σ √mᵢ`
    pub perimeter: f64,
    /// `W₂(1, ν)`
    pub transport: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(lambda: f64, perimeter: f64, transport: f64) -> Self {
        Self {
            lambda,
            perimeter,
            transport,
            total: perimeter + transport,
        }
    }
}

/// Energy of a diagram whose masses are its cell areas. Empty cells
/// contribute nothing.
pub fn energy_of_diagram(
    diagram: &PowerDiagram,
    gens: &[WeightedGenerator],
    lambda: f64,
) -> EnergyBreakdown {
    let mut sqrt_mass = 0.0;
    let mut transport = 0.0;
    for cell in &diagram.cells {
        if let Some(poly) = &cell.polygon {
            let m = poly.moments_about(gens[cell.generator].site);
            sqrt_mass += libm::sqrt(m.area);
            transport += m.second;
        }
    }
    EnergyBreakdown::new(lambda, lambda * sqrt_mass, transport)
}

/// `E({xᵢ, wᵢ}) = Σᵢ λ√|Pᵢ| + ∫_{Pᵢ} |x − xᵢ|² dx` over the power diagram of
/// the generators. The transport term equals `W₂(1, Σ |Pᵢ| δ_{xᵢ})`.
pub fn energy_weighted(
    gens: &[WeightedGenerator],
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<EnergyBreakdown> {
    check_lambda(lambda)?;
    let diagram = power_diagram(gens, domain)?;
    Ok(energy_of_diagram(&diagram, gens, lambda))
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig("lambda must be finite and nonnegative"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub site: Point2,
    pub mass: f64,
}

/// `ν = Σ mᵢ δ_{xᵢ}` with positive masses summing to the domain area.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>, domain: &ConvexPolygon) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms"));
        }
        if atoms.iter().any(|a| !(a.mass > 0.0) || !a.mass.is_finite()) {
            return Err(Error::InvalidMeasure("masses must be positive"));
        }
        if atoms.iter().any(|a| !a.site.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite site"));
        }
        let area = domain.area();
        let total: f64 = atoms.iter().map(|a| a.mass).sum();
        if (total - area).abs() > 1e-9 * area {
            return Err(Error::InvalidMeasure("masses do not sum to the domain area"));
        }
        let tol = crate::geometry::DEGENERACY_TOLERANCE * domain.diameter();
        for (i, a) in atoms.iter().enumerate() {
            if atoms[i + 1..].iter().any(|b| a.site.distance(b.site) <= tol) {
                return Err(Error::InvalidMeasure("sites must be pairwise distinct"));
            }
        }
        Ok(Self { atoms })
    }

    /// The measure `Σ |Pᵢ| δ_{xᵢ}` over the nonempty cells of a diagram.
    pub fn from_diagram(diagram: &PowerDiagram, gens: &[WeightedGenerator]) -> Result<Self> {
        let atoms = diagram
            .cells
            .iter()
            .filter_map(|c| {
                c.polygon.as_ref().map(|p| Atom {
                    site: gens[c.generator].site,
                    mass: p.area(),
                })
            })
            .collect();
        Self::new(atoms, &diagram.domain)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

/// `F(ν) = λ Σ √mᵢ + W₂(1, ν)`. The transport term is the dual objective at
/// the weights found by [`solve_weights`], which differs from `W₂` only to
/// second order in the mass residual.
pub fn energy_measure(
    nu: &AtomicMeasure,
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<EnergyBreakdown> {
    check_lambda(lambda)?;
    let weights = solve_weights(nu, domain, &DualSolverConfig::default())?;
    let transport = dual_objective(nu, &weights.weights, domain)?;
    let perimeter = lambda * nu.atoms.iter().map(|a| libm::sqrt(a.mass)).sum::<f64>();
    Ok(EnergyBreakdown::new(lambda, perimeter, transport))
}

/// Distances of a configuration from the stationarity conditions of the
/// energy: sites at their cell centroids and `wᵢ = −½ λ |Pᵢ|^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElResidual {
    pub centroid: f64,
    pub weight: f64,
}

pub fn el_residuals(
    gens: &[WeightedGenerator],
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<Vec<ElResidual>> {
    check_lambda(lambda)?;
    let diagram = power_diagram(gens, domain)?;
    residuals_of_diagram(&diagram, gens, lambda)
}

pub(crate) fn residuals_of_diagram(
    diagram: &PowerDiagram,
    gens: &[WeightedGenerator],
    lambda: f64,
) -> Result<Vec<ElResidual>> {
    diagram
        .cells
        .iter()
        .map(|c| {
            let poly = c.polygon.as_ref().ok_or(Error::EmptyCell(c.generator))?;
            let g = &gens[c.generator];
            let area = poly.area();
            Ok(ElResidual {
                centroid: g.site.distance(poly.centroid()),
                weight: (g.weight + 0.5 * lambda / libm::sqrt(area)).abs(),
            })
        })
        .collect()
}
