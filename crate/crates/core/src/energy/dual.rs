use alloc::vec;
use alloc::vec::Vec;

use super::{AtomicMeasure, Error, Result};
use crate::geometry::{power_diagram, ConvexPolygon, EdgeSource, PowerDiagram, WeightedGenerator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualSolverConfig {
    /// Stop when `max |mᵢ − |Pᵢ|| ≤ mass_tolerance · |Ω|`.
    pub mass_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for DualSolverConfig {
    fn default() -> Self {
        Self {
            mass_tolerance: 1e-7,
            max_iterations: 10_000,
        }
    }
}

/// Maximiser of the transport dual, normalised so that the first weight is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct KantorovichWeights {
    pub weights: Vec<f64>,
    pub iterations: usize,
    /// Final `max |mᵢ − |Pᵢ||`.
    pub residual: f64,
    /// Dual objective after every accepted step, starting from `a = 0`.
    pub objective_history: Vec<f64>,
}

impl KantorovichWeights {
    pub fn generators(&self, nu: &AtomicMeasure) -> Vec<WeightedGenerator> {
        nu.atoms()
            .iter()
            .zip(&self.weights)
            .map(|(a, &w)| WeightedGenerator::new(a.site, w))
            .collect()
    }
}

/// `f(a) = Σ mᵢ aᵢ + Σᵢ ∫_{Pᵢ(a)} (|x − xᵢ|² − aᵢ) dx`, concave in `a`, with
/// gradient `mᵢ − |Pᵢ(a)|`.
pub fn dual_objective(nu: &AtomicMeasure, weights: &[f64], domain: &ConvexPolygon) -> Result<f64> {
    let gens = to_generators(nu, weights);
    let diagram = power_diagram(&gens, domain)?;
    Ok(evaluate(nu, &gens, &diagram).objective)
}

struct DualState {
    objective: f64,
    gradient: Vec<f64>,
    /// Diagonal of the negated Hessian: `Σⱼ |Pᵢ ∩ Pⱼ| / (2 |xᵢ − xⱼ|)`.
    curvature: Vec<f64>,
}

fn to_generators(nu: &AtomicMeasure, weights: &[f64]) -> Vec<WeightedGenerator> {
    nu.atoms()
        .iter()
        .zip(weights)
        .map(|(a, &w)| WeightedGenerator::new(a.site, w))
        .collect()
}

fn evaluate(nu: &AtomicMeasure, gens: &[WeightedGenerator], diagram: &PowerDiagram) -> DualState {
    let n = gens.len();
    let mut objective = 0.0;
    let mut gradient = vec![0.0; n];
    let mut curvature = vec![0.0; n];
    for (i, (atom, cell)) in nu.atoms().iter().zip(&diagram.cells).enumerate() {
        let g = &gens[i];
        objective += atom.mass * g.weight;
        let Some(poly) = &cell.polygon else {
            gradient[i] = atom.mass;
            continue;
        };
        let m = poly.moments_about(g.site);
        objective += m.second - g.weight * m.area;
        gradient[i] = atom.mass - m.area;
        let v = poly.vertices();
        for (k, edge) in cell.edges.iter().enumerate() {
            if let EdgeSource::Neighbor(j) = *edge {
                let len = v[k].distance(v[(k + 1) % v.len()]);
                curvature[i] += len / (2.0 * g.site.distance(gens[j].site));
            }
        }
    }
    DualState {
        objective,
        gradient,
        curvature,
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Finds the power-diagram weights whose cells have the prescribed masses by
/// maximising the concave transport dual with diagonally preconditioned
/// gradient ascent and Armijo backtracking.
pub fn solve_weights(
    nu: &AtomicMeasure,
    domain: &ConvexPolygon,
    config: &DualSolverConfig,
) -> Result<KantorovichWeights> {
    let area = domain.area();
    if nu.atoms().iter().any(|a| a.mass < 1e-12 * area) {
        return Err(Error::InvalidMeasure("atom mass below the zero-mass guard"));
    }
    let tol_site = 1e-9 * domain.diameter();
    if nu.atoms().iter().any(|a| !domain.contains(a.site, tol_site)) {
        return Err(Error::InvalidMeasure("site outside the domain"));
    }
    if (nu.total_mass() - area).abs() > 1e-9 * area {
        return Err(Error::InvalidMeasure("masses do not sum to the domain area"));
    }
    let target = config.mass_tolerance * area;
    let n = nu.len();

    let mut weights = vec![0.0; n];
    let mut gens = to_generators(nu, &weights);
    let mut state = evaluate(nu, &gens, &power_diagram(&gens, domain)?);
    let mut history = vec![state.objective];
    let mut step = 1.0;
    let mut iterations = 0;

    while max_abs(&state.gradient) > target {
        if iterations == config.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual: max_abs(&state.gradient),
            });
        }
        iterations += 1;

        // Empty cells have no curvature; borrow the mean of the others.
        let live: Vec<f64> = state.curvature.iter().copied().filter(|c| *c > 0.0).collect();
        let fallback = if live.is_empty() {
            1.0
        } else {
            live.iter().sum::<f64>() / live.len() as f64
        };
        let direction: Vec<f64> = state
            .gradient
            .iter()
            .zip(&state.curvature)
            .map(|(g, &c)| g / if c > 0.0 { c } else { fallback })
            .collect();
        let slope: f64 = state.gradient.iter().zip(&direction).map(|(g, d)| g * d).sum();

        let mut accepted = None;
        while step > 1e-12 {
            let trial: Vec<f64> = weights
                .iter()
                .zip(&direction)
                .map(|(w, d)| w + step * d - step * direction[0])
                .collect();
            gens = to_generators(nu, &trial);
            let next = evaluate(nu, &gens, &power_diagram(&gens, domain)?);
            let sufficient = next.objective >= state.objective + 1e-4 * step * slope;
            // Near the optimum the increase drops below the resolution of f;
            // accept any non-decreasing step that shrinks the mass residual.
            let resolved = next.objective >= state.objective
                && max_abs(&next.gradient) < max_abs(&state.gradient);
            if sufficient || resolved {
                accepted = Some((trial, next));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, next)) = accepted else {
            return Err(Error::NoConvergence {
                iterations,
                residual: max_abs(&state.gradient),
            });
        };
        weights = trial;
        state = next;
        history.push(state.objective);
        step = (step * 2.0).min(1.0);
    }

    Ok(KantorovichWeights {
        weights,
        iterations,
        residual: max_abs(&state.gradient),
        objective_history: history,
    })
}
