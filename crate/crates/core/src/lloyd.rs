//! Generalised Lloyd iteration for centroidal power diagrams.
//!
//! One step maps `(xᵢ, wᵢ)` to `(centroid(Pᵢ), −½ λ |Pᵢ|^{-1/2})`, where `Pᵢ`
//! is the power cell of the current configuration. Generators whose cells
//! are empty are deleted. For `λ = 0` the weights stay zero and the step is
//! the classical Lloyd step for centroidal Voronoi tessellations.

use alloc::vec::Vec;

use crate::energy::{check_lambda, energy_of_diagram, residuals_of_diagram, ElResidual, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::geometry::quadrature::integrate_fan;
use crate::geometry::{power_diagram, ConvexPolygon, Point2, PowerDiagram, WeightedGenerator};

/// Largest energy increase tolerated between consecutive iterates.
pub const MONOTONICITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydConfig {
    pub lambda: f64,
    pub max_iterations: usize,
    /// Relative to the domain diameter.
    pub displacement_tolerance: f64,
    /// Absolute energy decrease below which the run may stop.
    pub energy_tolerance: f64,
    pub delete_empty: bool,
}

impl LloydConfig {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            max_iterations: 10_000,
            displacement_tolerance: 1e-10,
            energy_tolerance: 1e-12,
            delete_empty: true,
        }
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive"));
        }
        if !(self.displacement_tolerance > 0.0) || !(self.energy_tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        Ok(())
    }
}

/// State after an iteration. The first record describes the initial
/// configuration and has zero displacement and weight change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydRecord {
    pub energy: EnergyBreakdown,
    pub max_site_displacement: f64,
    pub max_weight_change: f64,
    pub live_cells: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LloydTrace {
    pub records: Vec<LloydRecord>,
}

impl LloydTrace {
    pub fn last(&self) -> Option<&LloydRecord> {
        self.records.last()
    }

    /// Number of Lloyd steps taken.
    pub fn steps(&self) -> usize {
        self.records.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LloydResult {
    pub generators: Vec<WeightedGenerator>,
    pub trace: LloydTrace,
    pub converged: bool,
    /// `None` when the final diagram still has an empty cell (deletion off).
    pub residuals: Option<Vec<ElResidual>>,
    pub diagram: PowerDiagram,
}

impl LloydResult {
    pub fn energy(&self) -> EnergyBreakdown {
        self.trace.last().expect("trace is never empty").energy
    }
}

/// The update applied to the cells of an existing diagram. Returns the new
/// generators and, for each, the index of the generator it came from.
fn update_from_diagram(
    diagram: &PowerDiagram,
    gens: &[WeightedGenerator],
    lambda: f64,
    delete_empty: bool,
) -> Result<(Vec<WeightedGenerator>, Vec<usize>)> {
    let mut next = Vec::with_capacity(gens.len());
    let mut origin = Vec::with_capacity(gens.len());
    for cell in &diagram.cells {
        let i = cell.generator;
        match &cell.polygon {
            Some(poly) => {
                let area = poly.area();
                let weight = if lambda == 0.0 { 0.0 } else { -0.5 * lambda / libm::sqrt(area) };
                next.push(WeightedGenerator::new(poly.centroid(), weight));
                origin.push(i);
            }
            None if !delete_empty => {
                next.push(gens[i]);
                origin.push(i);
            }
            None => {}
        }
    }
    if next.is_empty() {
        return Err(Error::AllCellsEmpty);
    }
    Ok((next, origin))
}

/// One generalised Lloyd step with empty-cell deletion. Returns the new
/// generators and the diagram of the old ones.
pub fn lloyd_step(
    gens: &[WeightedGenerator],
    domain: &ConvexPolygon,
    lambda: f64,
) -> Result<(Vec<WeightedGenerator>, PowerDiagram)> {
    check_lambda(lambda)?;
    let diagram = power_diagram(gens, domain)?;
    let (next, _) = update_from_diagram(&diagram, gens, lambda, true)?;
    Ok((next, diagram))
}

/// Iterates [`lloyd_step`] until sites move less than
/// `displacement_tolerance · diam(Ω)` and the energy drops by less than
/// `energy_tolerance`, or until `max_iterations` steps.
///
/// The energy must not increase; an increase beyond [`MONOTONICITY_SLACK`]
/// aborts the run with [`Error::NumericalRegression`].
pub fn run_lloyd(
    init: &[WeightedGenerator],
    domain: &ConvexPolygon,
    config: &LloydConfig,
) -> Result<LloydResult> {
    config.validate()?;
    let lambda = config.lambda;
    let diam_tol = config.displacement_tolerance * domain.diameter();

    let mut gens = init.to_vec();
    let mut diagram = power_diagram(&gens, domain)?;
    let mut energy = energy_of_diagram(&diagram, &gens, lambda);
    let mut records = Vec::new();
    records.push(LloydRecord {
        energy,
        max_site_displacement: 0.0,
        max_weight_change: 0.0,
        live_cells: diagram.live_cells(),
    });
    let mut converged = false;

    for iteration in 1..=config.max_iterations {
        let (next, origin) = update_from_diagram(&diagram, &gens, lambda, config.delete_empty)?;
        let mut displacement: f64 = 0.0;
        let mut weight_change: f64 = 0.0;
        for (g, &i) in next.iter().zip(&origin) {
            displacement = displacement.max(g.site.distance(gens[i].site));
            weight_change = weight_change.max((g.weight - gens[i].weight).abs());
        }
        let next_diagram = power_diagram(&next, domain)?;
        let next_energy = energy_of_diagram(&next_diagram, &next, lambda);
        let delta = next_energy.total - energy.total;
        if delta > MONOTONICITY_SLACK {
            return Err(Error::NumericalRegression { iteration, delta });
        }
        records.push(LloydRecord {
            energy: next_energy,
            max_site_displacement: displacement,
            max_weight_change: weight_change,
            live_cells: next_diagram.live_cells(),
        });
        gens = next;
        diagram = next_diagram;
        energy = next_energy;
        if displacement < diam_tol && -delta < config.energy_tolerance {
            converged = true;
            break;
        }
    }

    if config.delete_empty && diagram.live_cells() < gens.len() {
        let keep: Vec<usize> = diagram
            .cells
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.generator)
            .collect();
        gens = keep.iter().map(|&i| gens[i]).collect();
        diagram = power_diagram(&gens, domain)?;
    }
    let residuals = residuals_of_diagram(&diagram, &gens, lambda).ok();

    Ok(LloydResult {
        generators: gens,
        trace: LloydTrace { records },
        converged,
        residuals,
        diagram,
    })
}

/// One lagged p-centroid update on the Voronoi diagram of `sites`:
///
/// ```text
/// xᵢ ← ∫_{Vᵢ} x |xᵢ − x|^{p−2} dx / ∫_{Vᵢ} |xᵢ − x|^{p−2} dx
/// ```
///
/// Integrals use the seven-point rule on a fan with apex at `xᵢ`, refined once
/// for `p < 2` where the factor is singular at the apex.
pub fn p_centroid_step(sites: &[Point2], domain: &ConvexPolygon, p: f64) -> Result<Vec<Point2>> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidConfig("p must be at least 1"));
    }
    let gens: Vec<WeightedGenerator> = sites.iter().map(|&s| WeightedGenerator::new(s, 0.0)).collect();
    let diagram = power_diagram(&gens, domain)?;
    let exponent = p - 2.0;
    let refinements = u32::from(p < 2.0);
    diagram
        .cells
        .iter()
        .map(|cell| {
            let poly = cell.polygon.as_ref().ok_or(Error::EmptyCell(cell.generator))?;
            let a = sites[cell.generator];
            if exponent == 0.0 {
                return Ok(poly.centroid());
            }
            let [w, wx, wy] = integrate_fan(poly, a, refinements, |x| {
                let r = (x - a).norm();
                if r == 0.0 && exponent < 0.0 {
                    return Err(Error::QuadratureSingularity);
                }
                let f = libm::pow(r, exponent);
                Ok([f, f * x.x, f * x.y])
            })?;
            Ok(Point2::new(wx / w, wy / w))
        })
        .collect()
}

/// Iterates [`p_centroid_step`] until the largest move is below
/// `tolerance · diam(Ω)`. Returns the sites and whether it converged.
pub fn run_p_centroid(
    sites: &[Point2],
    domain: &ConvexPolygon,
    p: f64,
    max_iterations: usize,
    tolerance: f64,
) -> Result<(Vec<Point2>, bool)> {
    let tol = tolerance * domain.diameter();
    let mut current = sites.to_vec();
    for _ in 0..max_iterations {
        let next = p_centroid_step(&current, domain, p)?;
        let moved = next
            .iter()
            .zip(&current)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max);
        current = next;
        if moved < tol {
            return Ok((current, true));
        }
    }
    Ok((current, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g(x: f64, y: f64, w: f64) -> WeightedGenerator {
        WeightedGenerator::new(Point2::new(x, y), w)
    }

    fn grid2() -> Vec<WeightedGenerator> {
        vec![g(0.25, 0.25, 0.0), g(0.75, 0.25, 0.0), g(0.75, 0.75, 0.0), g(0.25, 0.75, 0.0)]
    }

    #[test]
    fn single_generator_step() {
        let (next, _) = lloyd_step(&[g(0.9, 0.2, 0.3)], &ConvexPolygon::unit_square(), 0.1).unwrap();
        assert_eq!(next, vec![g(0.5, 0.5, -0.05)]);
    }

    #[test]
    fn symmetric_cvt_is_fixed() {
        let (next, _) = lloyd_step(&grid2(), &ConvexPolygon::unit_square(), 0.0).unwrap();
        assert_eq!(next, grid2());
    }

    #[test]
    fn crushed_middle_cell_is_deleted() {
        let gens = [g(0.2, 0.5, 0.5), g(0.5, 0.5, -0.5), g(0.8, 0.5, 0.5)];
        let (next, diagram) = lloyd_step(&gens, &ConvexPolygon::unit_square(), 0.1).unwrap();
        assert!(diagram.cells[1].is_empty());
        assert_eq!(next.len(), 2);
        let total: f64 = diagram.areas().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn deletion_can_be_disabled() {
        let gens = [g(0.2, 0.5, 0.5), g(0.5, 0.5, -0.5), g(0.8, 0.5, 0.5)];
        let mut cfg = LloydConfig::new(0.1).with_max_iterations(1);
        cfg.delete_empty = false;
        let r = run_lloyd(&gens, &ConvexPolygon::unit_square(), &cfg).unwrap();
        assert_eq!(r.generators.len(), 3);
        assert!(r.residuals.is_none());
    }

    #[test]
    fn single_generator_converges_fast() {
        let r = run_lloyd(&[g(0.1, 0.8, 0.0)], &ConvexPolygon::unit_square(), &LloydConfig::new(0.1))
            .unwrap();
        assert!(r.converged);
        assert!(r.trace.steps() <= 2);
        assert_eq!(r.generators[0].site, Point2::new(0.5, 0.5));
    }

    #[test]
    fn cvt_of_four_from_perturbed_start() {
        let start = vec![g(0.2, 0.3, 0.0), g(0.7, 0.2, 0.0), g(0.8, 0.7, 0.0), g(0.3, 0.8, 0.0)];
        let r = run_lloyd(&start, &ConvexPolygon::unit_square(), &LloydConfig::new(0.0)).unwrap();
        assert!(r.converged);
        assert!((r.energy().total - 1.0 / 24.0).abs() < 1e-12);
        assert!(r.residuals.unwrap().iter().all(|e| e.centroid < 1e-8));
    }

    #[test]
    fn invalid_config() {
        let mut cfg = LloydConfig::new(0.1);
        cfg.energy_tolerance = 0.0;
        assert!(run_lloyd(&grid2(), &ConvexPolygon::unit_square(), &cfg).is_err());
        assert!(LloydConfig::new(-1.0).validate().is_err());
        assert!(LloydConfig::new(0.1).with_max_iterations(0).validate().is_err());
    }

    #[test]
    fn p2_matches_classical_step() {
        let sites = [Point2::new(0.2, 0.3), Point2::new(0.7, 0.4), Point2::new(0.4, 0.9)];
        let sq = ConvexPolygon::unit_square();
        let gens: Vec<_> = sites.iter().map(|&s| WeightedGenerator::new(s, 0.0)).collect();
        let (classical, _) = lloyd_step(&gens, &sq, 0.0).unwrap();
        // force the quadrature path with an exponent that is numerically 0
        let lagged = p_centroid_step(&sites, &sq, 2.0).unwrap();
        for (a, b) in lagged.iter().zip(&classical) {
            assert!(a.distance(b.site) < 1e-10);
        }
        let near = p_centroid_step(&sites, &sq, 2.0 + 1e-15).unwrap();
        for (a, b) in near.iter().zip(&classical) {
            assert!(a.distance(b.site) < 1e-10);
        }
    }

    #[test]
    fn p4_symmetric_grid_is_fixed() {
        let sites: Vec<Point2> = grid2().iter().map(|g| g.site).collect();
        let next = p_centroid_step(&sites, &ConvexPolygon::unit_square(), 4.0).unwrap();
        for (a, b) in next.iter().zip(&sites) {
            assert!(a.distance(*b) < 1e-14);
        }
    }

    #[test]
    fn p3_single_site_goes_to_center() {
        let (sites, converged) = run_p_centroid(
            &[Point2::new(0.15, 0.8)],
            &ConvexPolygon::unit_square(),
            3.0,
            500,
            1e-12,
        )
        .unwrap();
        assert!(converged);
        assert!(sites[0].distance(Point2::new(0.5, 0.5)) < 1e-9);
    }

    #[test]
    fn p1_single_site_goes_to_center() {
        let (sites, converged) = run_p_centroid(
            &[Point2::new(0.3, 0.6)],
            &ConvexPolygon::unit_square(),
            1.0,
            2000,
            1e-12,
        )
        .unwrap();
        assert!(converged);
        assert!(sites[0].distance(Point2::new(0.5, 0.5)) < 1e-6);
    }
}
