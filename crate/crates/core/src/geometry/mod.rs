//! Planar convex geometry: polygons, half-plane clipping, power diagrams and
//! closed-form polygon moments.

mod point;
mod polygon;
mod power;
pub mod quadrature;

pub use point::Point2;
pub use polygon::{clip_halfplane, ConvexPolygon, HalfPlane, Moments, DEGENERACY_TOLERANCE};
pub use power::{bisector, locate, power_diagram, EdgeSource, PowerCell, PowerDiagram, WeightedGenerator};
pub use quadrature::p_moment_quadrature;
