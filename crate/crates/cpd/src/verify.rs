//! Oracle checks run by `--mode verify`.

use std::time::Instant;

use cpd_core::energy::{
    energy_measure, hexagonal_reference, solve_weights, Atom, AtomicMeasure, DualSolverConfig, C6,
};
use cpd_core::geometry::{power_diagram, ConvexPolygon, Point2};
use cpd_core::lloyd::lloyd_step;
use cpd_core::oracle::{
    cvt_fixture_energies, discrete_ot, energy_1d, solve_1d, solve_transportation, GridMeasure,
};
use cpd_core::search::random_init;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_owned(), passed, detail }
}

fn random_measure(domain: &ConvexPolygon, masses: &[f64], seed: u64) -> AtomicMeasure {
    let total: f64 = masses.iter().sum();
    let atoms = random_init(masses.len(), domain, seed)
        .iter()
        .zip(masses)
        .map(|(g, m)| Atom { site: g.site, mass: m * domain.area() / total })
        .collect();
    AtomicMeasure::new(atoms, domain).expect("valid measure")
}

fn hexagon_constant() -> Check {
    let hex = ConvexPolygon::regular_hexagon(Point2::ORIGIN, 1.0);
    let m = hex.second_moment(Point2::ORIGIN);
    let exact = 5.0 * 3f64.sqrt() / 54.0;
    check("hexagon second moment", (m - exact).abs() < 1e-12 && (C6 - exact).abs() < 1e-15, format!("{m:.17}"))
}

fn hexagon_density() -> Check {
    let target = 5f64.powf(2.0 / 3.0) * 3f64.powf(-5.0 / 3.0);
    let worst = [1.0, 0.1, 0.005]
        .iter()
        .map(|&l| {
            let r = hexagonal_reference(l, 1.0);
            (r.cell_area.recip() * l.powf(2.0 / 3.0) - target).abs()
        })
        .fold(0.0, f64::max);
    check("honeycomb cell density", worst < 1e-10, format!("max error {worst:.2e}"))
}

fn one_d() -> Check {
    let s = solve_1d(1.0 / 6000.0, 2.0);
    let mut ok = s.m_opt == 10 && (s.energy - 0.0025).abs() <= 0.0025 * f64::EPSILON;
    let mut lambda = 1e-6;
    for _ in 0..100 {
        let brute = (1..=1000)
            .map(|m| (m, energy_1d(lambda, 2.0, m)))
            .fold((0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
        ok &= solve_1d(lambda, 2.0).m_opt == brute.0;
        lambda *= 1.146;
    }
    check("1-D closed form", ok, format!("M = {}, energy {}", s.m_opt, s.energy))
}

fn cvt_fixtures() -> Check {
    let sq = ConvexPolygon::unit_square();
    let f = cvt_fixture_energies();
    let mut ok = (f[0].1 - 1.0 / 24.0).abs() < 1e-12 && (f[1].1 - 17.0 / 192.0).abs() < 1e-12 && f[0].1 < f[1].1;
    for (fixture, _) in f {
        let gens = fixture.generators();
        let (next, _) = lloyd_step(&gens, &sq, 0.0).expect("valid fixture");
        ok &= gens.iter().zip(&next).all(|(a, b)| a.site.distance(b.site) < 1e-14);
    }
    check("CVT fixtures", ok, format!("{} < {}", f[0].1, f[1].1))
}

fn single_atom() -> Check {
    let sq = ConvexPolygon::unit_square();
    let nu = AtomicMeasure::new(vec![Atom { site: Point2::new(0.5, 0.5), mass: 1.0 }], &sq).expect("valid");
    let exact = energy_measure(&nu, &sq, 0.0).map(|e| e.transport).unwrap_or(f64::NAN);
    let grid = discrete_ot(&GridMeasure::new(&sq, 64, 64), &nu, 2.0).map(|t| t.cost).unwrap_or(f64::NAN);
    let ok = (exact - 1.0 / 6.0).abs() < 1e-15 && (grid - 1.0 / 6.0).abs() < 2e-3;
    check("single-atom transport", ok, format!("power {exact}, grid {grid}"))
}

fn oracle_agreement() -> Check {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 64, 64);
    let nu = random_measure(&sq, &[0.5, 0.3, 0.2], 7);
    let t0 = Instant::now();
    let power = energy_measure(&nu, &sq, 0.0).map(|e| e.transport).unwrap_or(f64::NAN);
    let t_power = t0.elapsed();
    let t1 = Instant::now();
    let discrete = discrete_ot(&grid, &nu, 2.0).map(|t| t.cost).unwrap_or(f64::NAN);
    let t_grid = t1.elapsed();
    check(
        "power diagram vs discrete transport",
        (power - discrete).abs() < 2e-3,
        format!("gap {:.2e}; {:.1?} vs {:.1?}", (power - discrete).abs(), t_power, t_grid),
    )
}

fn lp_certificate() -> Check {
    let sq = ConvexPolygon::unit_square();
    let grid = GridMeasure::new(&sq, 12, 12);
    let nu = random_measure(&sq, &[0.1, 0.2, 0.3, 0.4, 0.5], 3);
    let cost = |i: usize, j: usize| (grid.centers[i] - nu.atoms()[j].site).norm_sq();
    let demand: Vec<f64> = nu.atoms().iter().map(|a| a.mass).collect();
    let sol = solve_transportation(&grid.masses, &demand, cost);
    let mut worst: f64 = 0.0;
    for i in 0..grid.masses.len() {
        for j in 0..demand.len() {
            worst = worst.max(-(cost(i, j) - sol.source_potentials[i] - sol.sink_potentials[j]));
        }
    }
    for &(i, j, f) in &sol.flows {
        if f > 0.0 {
            worst = worst.max((cost(i, j) - sol.source_potentials[i] - sol.sink_potentials[j]).abs());
        }
    }
    let dual: f64 = grid.masses.iter().zip(&sol.source_potentials).map(|(a, b)| a * b).sum::<f64>()
        + demand.iter().zip(&sol.sink_potentials).map(|(a, b)| a * b).sum::<f64>();
    let ok = worst <= 1e-10 && (dual - sol.cost).abs() <= 1e-10;
    check("transportation LP certificate", ok, format!("worst slack {worst:.1e}, {} pivots", sol.pivots))
}

fn dual_solver() -> Check {
    let hex = ConvexPolygon::regular_hexagon(Point2::ORIGIN, 2.0);
    let nu = random_measure(&hex, &[1.0, 2.0, 3.0, 1.5, 0.7, 2.2, 1.1], 11);
    match solve_weights(&nu, &hex, &DualSolverConfig::default()) {
        Ok(sol) => {
            let d = power_diagram(&sol.generators(&nu), &hex).expect("valid generators");
            let worst = nu.atoms().iter().zip(d.areas()).map(|(a, m)| (a.mass - m).abs()).fold(0.0, f64::max);
            let monotone = sol.objective_history.windows(2).all(|w| w[1] >= w[0]);
            check("dual weight solver", worst <= 1e-7 * hex.area() && monotone, format!("mass residual {worst:.1e} after {} steps", sol.iterations))
        }
        Err(e) => check("dual weight solver", false, e.to_string()),
    }
}

pub fn suite() -> Vec<Check> {
    vec![
        hexagon_constant(),
        hexagon_density(),
        one_d(),
        cvt_fixtures(),
        single_atom(),
        oracle_agreement(),
        lp_certificate(),
        dual_solver(),
    ]
}

/// Plain-text table with one row per check.
pub fn table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<width$}  {}\n", c.name, c.detail));
    }
    out
}
