//! Multistart search for global minimisers.
//!
//! For every integer `M` in `[M_g − Cλ^{-2/3}, M_g + Cλ^{-2/3}]`, where `M_g`
//! is the honeycomb cell-count estimate, `N_r` uniform random starts with zero
//! weights are relaxed by a fixed number of Lloyd steps. The pool is sorted by
//! energy, states matching a better one in both cell count and rescaled energy
//! are culled, and the survivors are refined in further rounds until the best
//! energy stops moving.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{hexagonal_reference, rescaled_energy, EnergyBreakdown, HexagonalReference};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2, PowerDiagram, WeightedGenerator};
use crate::lloyd::{run_lloyd, LloydConfig};

/// Angle below which consecutive cell edges count as one side.
pub const SIDE_ANGLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub lambda: f64,
    /// Half-width coefficient `C` of the cell-count interval.
    pub interval_width: f64,
    /// Random starts `N_r` per cell count; also the survivor pool size.
    pub restarts: usize,
    /// Lloyd steps per candidate per round.
    pub round_iterations: usize,
    /// Absolute tolerance on the rescaled energy `Ẽ`.
    pub energy_dedup_tolerance: f64,
    pub rounds: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            interval_width: 1.0,
            restarts: 50,
            round_iterations: 200,
            energy_dedup_tolerance: 1e-9,
            rounds: 5,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidConfig("search needs lambda > 0"));
        }
        if !(self.interval_width > 0.0) {
            return Err(Error::InvalidConfig("interval width must be positive"));
        }
        if self.restarts == 0 || self.round_iterations == 0 || self.rounds == 0 {
            return Err(Error::InvalidConfig("restarts, round iterations and rounds must be positive"));
        }
        if !(self.energy_dedup_tolerance > 0.0) {
            return Err(Error::InvalidConfig("dedup tolerance must be positive"));
        }
        Ok(())
    }

    /// Integer cell counts `[lo, hi]` to sample.
    pub fn interval(&self, domain_area: f64) -> Result<(usize, usize)> {
        let mg = estimate_cell_count(self.lambda, domain_area);
        let half = self.interval_width * libm::pow(self.lambda, -2.0 / 3.0);
        let lo = libm::ceil(mg - half).max(1.0);
        let hi = libm::floor(mg + half);
        if hi < lo {
            return Err(Error::EmptyInterval);
        }
        Ok((lo as usize, hi as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Provenance {
    pub initial_sites: usize,
    pub replica: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub generators: Vec<WeightedGenerator>,
    pub energy: EnergyBreakdown,
    pub rescaled_energy: f64,
    pub cell_count: usize,
    pub converged: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Survivors in ascending energy.
    pub ranked: Vec<Candidate>,
    pub best: Candidate,
    /// Side counts of the best candidate's cells.
    pub side_histogram: BTreeMap<usize, usize>,
    /// Best rescaled energy after each round.
    pub round_best: Vec<f64>,
    pub interval: (usize, usize),
    pub reference: HexagonalReference,
}

/// Runs independent tasks. Implementations must return results in input
/// order.
pub trait Executor {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync;
}

/// Runs tasks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync,
    {
        items.into_iter().map(f).collect()
    }
}

/// `M_g = |Ω| 5^{2/3} 3^{-5/3} λ^{-2/3}`.
pub fn estimate_cell_count(lambda: f64, domain_area: f64) -> f64 {
    hexagonal_reference(lambda, domain_area).expected_cells()
}

/// `m` uniform sites in the domain (rejection sampling from the bounding
/// box) with zero weights.
pub fn random_init(m: usize, domain: &ConvexPolygon, seed: u64) -> Vec<WeightedGenerator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = domain.bounding_box();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if domain.contains_strictly(p) {
            out.push(WeightedGenerator::new(p, 0.0));
        }
    }
    out
}

/// SplitMix64 finaliser over the search seed, cell count and replica.
pub fn candidate_seed(seed: u64, m: usize, replica: usize) -> u64 {
    let mut z = seed;
    for v in [m as u64, replica as u64] {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15 ^ v.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Number of sides of a convex polygon, merging consecutive edges whose
/// directions differ by less than `angle_tolerance` radians.
pub fn side_count(poly: &ConvexPolygon, angle_tolerance: f64) -> usize {
    let edges: Vec<Point2> = poly.edges().map(|(a, b)| b - a).collect();
    let n = edges.len();
    (0..n)
        .filter(|&k| {
            let e = edges[k];
            let prev = edges[(k + n - 1) % n];
            libm::atan2(prev.cross(e), prev.dot(e)).abs() > angle_tolerance
        })
        .count()
}

/// Histogram `side count → number of cells` over the nonempty cells.
pub fn side_histogram(diagram: &PowerDiagram) -> BTreeMap<usize, usize> {
    histogram_of(diagram, |_| true)
}

/// Like [`side_histogram`] but only over cells that do not touch the domain
/// boundary.
pub fn interior_side_histogram(diagram: &PowerDiagram) -> BTreeMap<usize, usize> {
    histogram_of(diagram, |i| !diagram.touches_boundary(i))
}

fn histogram_of(diagram: &PowerDiagram, keep: impl Fn(usize) -> bool) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for (i, cell) in diagram.cells.iter().enumerate() {
        if let Some(poly) = &cell.polygon {
            if keep(i) {
                *h.entry(side_count(poly, SIDE_ANGLE_TOLERANCE)).or_insert(0) += 1;
            }
        }
    }
    h
}

struct Context<'a> {
    domain: &'a ConvexPolygon,
    lloyd: LloydConfig,
    reference: HexagonalReference,
}

impl Context<'_> {
    fn relax(&self, start: &[WeightedGenerator], provenance: Provenance) -> Result<Candidate> {
        let run = run_lloyd(start, self.domain, &self.lloyd)?;
        let energy = run.energy();
        Ok(Candidate {
            cell_count: run.generators.len(),
            rescaled_energy: rescaled_energy(&energy, &self.reference),
            generators: run.generators,
            energy,
            converged: run.converged,
            provenance,
        })
    }
}

/// Sorts by energy (ties by cell count, then provenance), drops candidates
/// matching an earlier survivor in both cell count and rescaled energy, and
/// keeps at most `keep`.
pub fn cull(mut pool: Vec<Candidate>, tolerance: f64, keep: usize) -> Vec<Candidate> {
    pool.sort_by(|a, b| {
        a.energy
            .total
            .total_cmp(&b.energy.total)
            .then(a.cell_count.cmp(&b.cell_count))
            .then(a.provenance.cmp(&b.provenance))
    });
    let mut out: Vec<Candidate> = Vec::new();
    for c in pool {
        if out.len() == keep {
            break;
        }
        let duplicate = out.iter().any(|s| {
            s.cell_count == c.cell_count && (s.rescaled_energy - c.rescaled_energy).abs() < tolerance
        });
        if !duplicate {
            out.push(c);
        }
    }
    out
}

pub fn genetic_search(domain: &ConvexPolygon, config: &SearchConfig) -> Result<SearchResult> {
    genetic_search_with(domain, config, &Sequential)
}

pub fn genetic_search_with<E: Executor>(
    domain: &ConvexPolygon,
    config: &SearchConfig,
    executor: &E,
) -> Result<SearchResult> {
    config.validate()?;
    let area = domain.area();
    let interval = config.interval(area)?;
    let ctx = Context {
        domain,
        lloyd: LloydConfig::new(config.lambda).with_max_iterations(config.round_iterations),
        reference: hexagonal_reference(config.lambda, area),
    };

    let tasks: Vec<Provenance> = (interval.0..=interval.1)
        .flat_map(|m| {
            (0..config.restarts).map(move |replica| Provenance {
                initial_sites: m,
                replica,
                seed: candidate_seed(config.seed, m, replica),
            })
        })
        .collect();
    let pool = executor
        .map(tasks, |p| ctx.relax(&random_init(p.initial_sites, domain, p.seed), p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut survivors = cull(pool, config.energy_dedup_tolerance, config.restarts);
    let mut round_best = alloc::vec![survivors[0].rescaled_energy];

    for _ in 1..config.rounds {
        let refined = executor
            .map(survivors, |c| {
                if c.converged {
                    Ok(c)
                } else {
                    ctx.relax(&c.generators, c.provenance)
                }
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        survivors = cull(refined, config.energy_dedup_tolerance, config.restarts);
        let best = survivors[0].rescaled_energy;
        let previous = *round_best.last().expect("nonempty");
        round_best.push(best);
        if (previous - best).abs() < config.energy_dedup_tolerance {
            break;
        }
    }

    let best = survivors[0].clone();
    let diagram = crate::geometry::power_diagram(&best.generators, domain)?;
    Ok(SearchResult {
        side_histogram: side_histogram(&diagram),
        best,
        ranked: survivors,
        round_best,
        interval,
        reference: ctx.reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::power_diagram;

    #[test]
    fn cell_count_estimates() {
        assert!((estimate_cell_count(0.005, 1.0) - 16.025).abs() < 0.01);
        assert!((estimate_cell_count(1.0, 1.0) - 0.4685737).abs() < 1e-7);
        let a = estimate_cell_count(0.03, 1.0);
        assert!((estimate_cell_count(0.03, 2.0) - 2.0 * a).abs() < 1e-14);
    }

    #[test]
    fn interval_clipped_at_one() {
        let cfg = SearchConfig::new(0.1);
        assert_eq!(cfg.interval(1.0).unwrap(), (1, 6));
        let mut narrow = SearchConfig::new(10.0);
        narrow.interval_width = 0.01;
        assert_eq!(narrow.interval(1.0), Err(Error::EmptyInterval));
    }

    #[test]
    fn random_init_is_reproducible_and_inside() {
        let hex = ConvexPolygon::regular_hexagon(Point2::new(1.0, -2.0), 3.0);
        let a = random_init(40, &hex, 7);
        assert_eq!(a, random_init(40, &hex, 7));
        assert_ne!(a, random_init(40, &hex, 8));
        assert!(a.iter().all(|g| hex.contains_strictly(g.site) && g.weight == 0.0));
    }

    #[test]
    fn seeds_differ_per_task() {
        let s = candidate_seed(1, 5, 0);
        assert_ne!(s, candidate_seed(1, 5, 1));
        assert_ne!(s, candidate_seed(1, 6, 0));
        assert_ne!(s, candidate_seed(2, 5, 0));
        assert_eq!(s, candidate_seed(1, 5, 0));
    }

    #[test]
    fn square_side_counts() {
        let sq = ConvexPolygon::unit_square();
        let one = power_diagram(&[WeightedGenerator::new(Point2::new(0.3, 0.3), 0.0)], &sq).unwrap();
        assert_eq!(side_histogram(&one), BTreeMap::from([(4, 1)]));
        let gens: Vec<_> = [(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)]
            .iter()
            .map(|&(x, y)| WeightedGenerator::new(Point2::new(x, y), 0.0))
            .collect();
        let d = power_diagram(&gens, &sq).unwrap();
        assert_eq!(side_histogram(&d), BTreeMap::from([(4, 4)]));
        assert!(interior_side_histogram(&d).is_empty());
    }

    #[test]
    fn collinear_vertex_is_merged() {
        let poly = ConvexPolygon::new(alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(side_count(&poly, SIDE_ANGLE_TOLERANCE), 3);
    }
}
