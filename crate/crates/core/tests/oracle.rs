use cpd_core::energy::{Atom, AtomicMeasure};
use cpd_core::geometry::{ConvexPolygon, Point2};
use cpd_core::oracle::{
    discrete_ot, energy_1d, solve_1d, solve_transportation, GridMeasure, MAX_ATOMS,
};
use cpd_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_certificate(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let sol = solve_transportation(supply, demand, |i, j| cost[i][j]);
    let mut rows = vec![0.0; supply.len()];
    let mut cols = vec![0.0; demand.len()];
    let mut primal = 0.0;
    for &(i, j, f) in &sol.flows {
        assert!(f >= -1e-12);
        rows[i] += f;
        cols[j] += f;
        primal += f * cost[i][j];
        if f > 1e-12 {
            let reduced = cost[i][j] - sol.source_potentials[i] - sol.sink_potentials[j];
            assert!(reduced.abs() <= 1e-10, "slackness violated on ({i},{j})");
        }
    }
    for (a, b) in rows.iter().zip(supply).chain(cols.iter().zip(demand)) {
        assert!((a - b).abs() <= 1e-10);
    }
    for (i, row) in cost.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            assert!(c - sol.source_potentials[i] - sol.sink_potentials[j] >= -1e-10);
        }
    }
    let dual: f64 = supply.iter().zip(&sol.source_potentials).map(|(s, u)| s * u).sum::<f64>()
        + demand.iter().zip(&sol.sink_potentials).map(|(d, v)| d * v).sum::<f64>();
    assert!((primal - dual).abs() <= 1e-9 * primal.abs().max(1.0));
    assert!((primal - sol.cost).abs() <= 1e-9 * primal.abs().max(1.0));
    primal
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transportation_solutions_carry_certificates(n in 1usize..12, m in 1usize..8, seed: u64, integral: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut supply: Vec<f64> = (0..n).map(|_| if integral { rng.gen_range(1..5) as f64 } else { rng.gen_range(0.1..1.0) }).collect();
        let mut demand: Vec<f64> = (0..m).map(|_| if integral { rng.gen_range(1..5) as f64 } else { rng.gen_range(0.1..1.0) }).collect();
        let (s, d): (f64, f64) = (supply.iter().sum(), demand.iter().sum());
        if integral {
            // balance by topping up the smaller side; ties create degenerate bases
            if s < d { supply[0] += d - s } else { demand[0] += s - d }
        } else {
            demand.iter_mut().for_each(|x| *x *= s / d);
            let fix = s - demand.iter().sum::<f64>();
            demand[0] += fix;
        }
        let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| if integral { rng.gen_range(0..4) as f64 } else { rng.gen_range(0.0..10.0) }).collect()).collect();
        check_certificate(&supply, &demand, &cost);
    }
}

#[test]
fn small_transportation_matches_enumeration() {
    // 2×2 problems have a one-parameter family of plans; scan it finely.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let s = [rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0)];
        let d0 = rng.gen_range(0.0..s[0] + s[1]);
        let d = [d0, s[0] + s[1] - d0];
        let c: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.gen_range(0.0..5.0)).collect()).collect();
        let lp = check_certificate(&s, &d, &c);
        let lo = (d[0] - s[1]).max(0.0);
        let hi = s[0].min(d[0]);
        let plan_cost = |t: f64| t * c[0][0] + (s[0] - t) * c[0][1] + (d[0] - t) * c[1][0] + (s[1] - d[0] + t) * c[1][1];
        let best = plan_cost(lo).min(plan_cost(hi));
        assert!((lp - best).abs() < 1e-12);
    }
}

#[test]
fn identity_transport_costs_nothing() {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 6, 6);
    let atoms = grid
        .centers
        .iter()
        .zip(&grid.masses)
        .map(|(&site, &mass)| Atom { site, mass })
        .collect();
    let nu = AtomicMeasure::new(atoms, &sq).unwrap();
    assert_eq!(nu.len(), 36);
    let ot = discrete_ot(&grid, &nu, 2.0).unwrap();
    assert!(ot.cost.abs() < 1e-15);
}

#[test]
fn grid_masses_cover_the_domain() {
    let hex = ConvexPolygon::regular_hexagon(Point2::new(0.5, 0.5), 1.0);
    let grid = GridMeasure::new(&hex, 40, 40);
    assert!((grid.total_mass() - 1.0).abs() < 1e-12);
    assert!(grid.masses.iter().all(|&m| m >= 0.0));
    assert!(grid.support_len() < 40 * 40);
}

#[test]
fn discrete_plan_is_feasible() {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 24, 24);
    let atoms = vec![
        Atom { site: Point2::new(0.2, 0.3), mass: 0.25 },
        Atom { site: Point2::new(0.7, 0.2), mass: 0.35 },
        Atom { site: Point2::new(0.5, 0.8), mass: 0.4 },
    ];
    let nu = AtomicMeasure::new(atoms, &sq).unwrap();
    let ot = discrete_ot(&grid, &nu, 2.0).unwrap();
    for (a, b) in ot.plan.grid_marginal(grid.masses.len()).iter().zip(&grid.masses) {
        assert!((a - b).abs() < 1e-10);
    }
    for (a, b) in ot.plan.atom_marginal(3).iter().zip(nu.atoms()) {
        assert!((a - b.mass).abs() < 1e-10);
    }
    for (g, c) in grid.centers.iter().enumerate() {
        for (k, atom) in nu.atoms().iter().enumerate() {
            let reduced = (*c - atom.site).norm_sq() - ot.grid_potentials[g] - ot.atom_potentials[k];
            assert!(reduced >= -1e-10);
        }
    }
}

#[test]
fn oversized_problems_are_refused() {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 4, 4);
    let n = MAX_ATOMS + 1;
    let atoms = (0..n)
        .map(|k| Atom { site: Point2::new((k as f64 + 0.5) / n as f64, 0.5), mass: 1.0 / n as f64 })
        .collect();
    let nu = AtomicMeasure::new(atoms, &sq).unwrap();
    assert!(matches!(discrete_ot(&grid, &nu, 2.0), Err(Error::InfeasibleScale { .. })));
    let big = GridMeasure::new(&sq, 200, 200);
    let one = AtomicMeasure::new(vec![Atom { site: Point2::new(0.5, 0.5), mass: 1.0 }], &sq).unwrap();
    assert!(matches!(discrete_ot(&big, &one, 2.0), Err(Error::InfeasibleScale { .. })));
}

#[test]
fn mismatched_masses_are_refused() {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 4, 4);
    let wide = ConvexPolygon::rectangle(Point2::new(0.0, 0.0), Point2::new(2.0, 1.0));
    let nu = AtomicMeasure::new(vec![Atom { site: Point2::new(0.5, 0.5), mass: 2.0 }], &wide).unwrap();
    assert!(matches!(discrete_ot(&grid, &nu, 2.0), Err(Error::MassMismatch(_))));
}

#[test]
fn one_d_solver_matches_exhaustive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let lambda = 10f64.powf(rng.gen_range(-6.0..0.0));
        for p in [1.0, 2.0, 3.5] {
            let s = solve_1d(lambda, p);
            let (m, e) = (1..=1000)
                .map(|m| (m, energy_1d(lambda, p, m)))
                .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
            if m < 1000 {
                assert_eq!(s.m_opt, m, "lambda {lambda} p {p}");
            }
            assert!(s.energy <= e * (1.0 + 1e-15));
        }
    }
}
