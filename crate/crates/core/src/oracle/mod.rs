//! Independent verification machinery. Nothing here is used by the
//! power-diagram solvers; the modules only share the geometry primitives.

mod fixtures;
mod one_d;
mod simplex;
mod transport;

pub use fixtures::{cvt_fixture_energies, rectangle_moment, CvtFixture};
pub use one_d::{energy_1d, lloyd_1d_step, solve_1d, OneDSolution};
pub use simplex::{solve_transportation, TransportSolution};
pub use transport::{discrete_ot, DiscreteTransport, GridMeasure, TransportPlan, MAX_ATOMS, MAX_GRID_CELLS};
