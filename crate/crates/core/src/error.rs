use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Violations of the geometric input contracts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("polygon is not convex and counterclockwise at vertex {0}")]
    NonConvex(usize),
    #[error("polygon has non-positive signed area {0}")]
    NonPositiveArea(f64),
    #[error("vertices {0} and {1} coincide within the degeneracy tolerance")]
    DegenerateEdge(usize, usize),
    #[error("half-plane normal is zero")]
    ZeroNormal,
    #[error("no generators")]
    NoGenerators,
    #[error("sites {0} and {1} coincide within tolerance")]
    DuplicateSites(usize, usize),
    #[error("invalid domain: {0}")]
    InvalidDomain(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid atomic measure: {0}")]
    InvalidMeasure(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("power cell {0} is empty")]
    EmptyCell(usize),
    #[error("every power cell is empty")]
    AllCellsEmpty,
    #[error("weight solver stalled after {iterations} iterations, mass residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("energy increased by {delta:e} at iteration {iteration}")]
    NumericalRegression { iteration: usize, delta: f64 },
    #[error("quadrature node coincides with the singular point")]
    QuadratureSingularity,
    #[error("cell-count interval contains no positive integer")]
    EmptyInterval,
    #[error("total masses differ by {0:e}")]
    MassMismatch(f64),
    #[error("transport problem too large: {grid_cells} grid cells, {atoms} atoms")]
    InfeasibleScale { grid_cells: usize, atoms: usize },
}
