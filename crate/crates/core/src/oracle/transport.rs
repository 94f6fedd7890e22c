use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::simplex::{solve_transportation, TransportSolution};
use crate::energy::AtomicMeasure;
use crate::error::{Error, Result};
use crate::geometry::{clip_halfplane, ConvexPolygon, HalfPlane, Point2};

pub const MAX_GRID_CELLS: usize = 16_384;
pub const MAX_ATOMS: usize = 50;

/// Lebesgue measure on a convex domain lumped onto a uniform grid over its
/// bounding box. Each cell carries the exact area of its intersection with
/// the domain, located at the centroid of that intersection (the cell
/// midpoint for interior cells).
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    pub nx: usize,
    pub ny: usize,
    pub lo: Point2,
    pub hi: Point2,
    /// Row-major, `ny` rows of `nx`.
    pub masses: Vec<f64>,
    pub centers: Vec<Point2>,
}

impl GridMeasure {
    pub fn new(domain: &ConvexPolygon, nx: usize, ny: usize) -> Self {
        assert!(nx > 0 && ny > 0);
        let (lo, hi) = domain.bounding_box();
        let hx = (hi.x - lo.x) / nx as f64;
        let hy = (hi.y - lo.y) / ny as f64;
        let walls: Vec<HalfPlane> = domain
            .edges()
            .map(|(a, b)| {
                let e = b - a;
                let n = Point2::new(e.y, -e.x);
                HalfPlane::new(n, n.dot(a)).expect("domain edges are non-degenerate")
            })
            .collect();
        let mut masses = Vec::with_capacity(nx * ny);
        let mut centers = Vec::with_capacity(nx * ny);
        for r in 0..ny {
            for c in 0..nx {
                let a = Point2::new(lo.x + hx * c as f64, lo.y + hy * r as f64);
                let b = Point2::new(lo.x + hx * (c + 1) as f64, lo.y + hy * (r + 1) as f64);
                let midpoint = (a + b) * 0.5;
                let rect = ConvexPolygon::rectangle(a, b);
                let inside = walls.iter().all(|w| rect.vertices().iter().all(|&v| w.contains(v)));
                if inside {
                    masses.push(hx * hy);
                    centers.push(midpoint);
                    continue;
                }
                let mut piece = Some(rect);
                for w in &walls {
                    piece = piece.and_then(|p| clip_halfplane(&p, w));
                }
                match piece {
                    Some(p) => {
                        masses.push(p.area());
                        centers.push(p.centroid());
                    }
                    None => {
                        masses.push(0.0);
                        centers.push(midpoint);
                    }
                }
            }
        }
        Self { nx, ny, lo, hi, masses, centers }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Cells with positive mass.
    pub fn support_len(&self) -> usize {
        self.masses.iter().filter(|&&m| m > 0.0).count()
    }
}

/// Sparse optimal coupling between grid cells and atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransportPlan {
    /// `(grid cell index, atom index) → mass`; only positive flows.
    pub flows: BTreeMap<(usize, usize), f64>,
}

impl TransportPlan {
    pub fn grid_marginal(&self, cells: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; cells];
        for (&(g, _), &f) in &self.flows {
            out[g] += f;
        }
        out
    }

    pub fn atom_marginal(&self, atoms: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; atoms];
        for (&(_, a), &f) in &self.flows {
            out[a] += f;
        }
        out
    }
}

/// Result of [`discrete_ot`]. The potentials certify optimality: for every
/// grid cell `g` and atom `a`, `|c_g − x_a|^p − u_g − v_a ≥ 0`, with equality
/// on every positive flow.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTransport {
    pub cost: f64,
    pub plan: TransportPlan,
    pub grid_potentials: Vec<f64>,
    pub atom_potentials: Vec<f64>,
}

/// Exact optimal cost of moving the grid measure onto the atoms with ground
/// cost `|x − y|^p`, solved as a transportation problem.
pub fn discrete_ot(mu: &GridMeasure, nu: &AtomicMeasure, p: f64) -> Result<DiscreteTransport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidConfig("p must be at least 1"));
    }
    let support: Vec<usize> = (0..mu.masses.len()).filter(|&g| mu.masses[g] > 0.0).collect();
    if support.len() > MAX_GRID_CELLS || nu.len() > MAX_ATOMS {
        return Err(Error::InfeasibleScale {
            grid_cells: support.len(),
            atoms: nu.len(),
        });
    }
    let supply: Vec<f64> = support.iter().map(|&g| mu.masses[g]).collect();
    let mut demand: Vec<f64> = nu.atoms().iter().map(|a| a.mass).collect();
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-10 * total_s.max(1.0) {
        return Err(Error::MassMismatch(total_s - total_d));
    }
    let rescale = total_s / total_d;
    demand.iter_mut().for_each(|d| *d *= rescale);

    let sites: Vec<Point2> = nu.atoms().iter().map(|a| a.site).collect();
    let ground = |g: usize, a: usize| {
        let d2 = (mu.centers[support[g]] - sites[a]).norm_sq();
        if p == 2.0 {
            d2
        } else {
            libm::pow(d2, 0.5 * p)
        }
    };
    let TransportSolution {
        cost,
        flows,
        source_potentials,
        sink_potentials,
        ..
    } = solve_transportation(&supply, &demand, ground);

    let mut plan = TransportPlan::default();
    for (g, a, f) in flows {
        if f > 0.0 {
            plan.flows.insert((support[g], a), f);
        }
    }
    let mut grid_potentials = alloc::vec![0.0; mu.masses.len()];
    for (k, &g) in support.iter().enumerate() {
        grid_potentials[g] = source_potentials[k];
    }
    Ok(DiscreteTransport {
        cost,
        plan,
        grid_potentials,
        atom_potentials: sink_potentials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Atom;
    use alloc::vec;

    #[test]
    fn grid_mass_matches_domain_area() {
        let sq = ConvexPolygon::unit_square();
        let g = GridMeasure::new(&sq, 8, 8);
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
        let hex = ConvexPolygon::regular_hexagon(Point2::new(0.2, 0.1), 1.0);
        let g = GridMeasure::new(&hex, 23, 17);
        assert!((g.total_mass() - 1.0).abs() < 1e-12);
        assert!(g.support_len() < 23 * 17);
    }

    #[test]
    fn identity_transport_is_free() {
        let sq = ConvexPolygon::unit_square();
        let mu = GridMeasure::new(&sq, 4, 4);
        let atoms = mu
            .centers
            .iter()
            .zip(&mu.masses)
            .map(|(&site, &mass)| Atom { site, mass })
            .collect();
        let nu = AtomicMeasure::new(atoms, &sq).unwrap();
        let t = discrete_ot(&mu, &nu, 2.0).unwrap();
        assert!(t.cost.abs() < 1e-15);
    }

    #[test]
    fn scale_caps() {
        let sq = ConvexPolygon::unit_square();
        let mu = GridMeasure::new(&sq, 200, 200);
        let nu = AtomicMeasure::new(vec![Atom { site: Point2::new(0.5, 0.5), mass: 1.0 }], &sq)
            .unwrap();
        assert!(matches!(discrete_ot(&mu, &nu, 2.0), Err(Error::InfeasibleScale { .. })));
    }

    #[test]
    fn mass_mismatch() {
        let sq = ConvexPolygon::unit_square();
        let mu = GridMeasure::new(&ConvexPolygon::rectangle(Point2::ORIGIN, Point2::new(1.0, 0.5)), 4, 4);
        let nu = AtomicMeasure::new(vec![Atom { site: Point2::new(0.5, 0.5), mass: 1.0 }], &sq)
            .unwrap();
        assert!(matches!(discrete_ot(&mu, &nu, 2.0), Err(Error::MassMismatch(_))));
    }
}
