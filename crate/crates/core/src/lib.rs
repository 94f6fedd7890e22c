//! Centroidal power diagrams for the sharp-interface limit of the
//! diblock-copolymer energy at vanishing volume fraction.
//!
//! The energy of an atomic measure `ν = Σ mᵢ δ_{xᵢ}` on a convex planar
//! domain `Ω` with `Σ mᵢ = |Ω|` is
//!
//! ```text
//! F(ν) = λ Σᵢ √mᵢ + W₂(1, ν)
//! ```
//!
//! Optimal transport regions of `W₂(1, ν)` are power cells, so the energy is
//! evaluated exactly in (site, weight) coordinates and minimised with a
//! generalised Lloyd iteration ([`lloyd`]) inside a multistart search
//! ([`search`]). The [`oracle`] module holds independent checks: a
//! transportation-simplex solver for the discretised problem, the closed-form
//! one-dimensional minimiser and the centroidal Voronoi fixtures of the square.
//!
//! The crate is `no_std` (with `alloc`); float math goes through `libm`, so
//! results are bit-identical across targets.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod energy;
pub mod error;
pub mod geometry;
pub mod lloyd;
pub mod oracle;
pub mod search;

pub use error::{Error, GeometryError, Result};
pub use geometry::{ConvexPolygon, HalfPlane, Point2, PowerDiagram, WeightedGenerator};
