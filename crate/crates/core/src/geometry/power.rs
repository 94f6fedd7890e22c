use alloc::vec::Vec;

use super::polygon::{clip_ring, finish_ring, DEGENERACY_TOLERANCE};
use super::{ConvexPolygon, HalfPlane, Point2};
use crate::error::GeometryError;

/// A site with a scalar weight. Cell `i` collects the points minimising
/// `|x − xᵢ|² − wᵢ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedGenerator {
    pub site: Point2,
    pub weight: f64,
}

impl WeightedGenerator {
    pub const fn new(site: Point2, weight: f64) -> Self {
        Self { site, weight }
    }

    /// Power distance `|p − x|² − w`.
    #[inline]
    pub fn power(&self, p: Point2) -> f64 {
        (p - self.site).norm_sq() - self.weight
    }
}

/// Which constraint produced a cell edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSource {
    Boundary,
    Neighbor(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCell {
    pub generator: usize,
    pub polygon: Option<ConvexPolygon>,
    /// `edges[k]` labels the edge leaving vertex `k` of `polygon`.
    pub edges: Vec<EdgeSource>,
}

impl PowerCell {
    pub fn is_empty(&self) -> bool {
        self.polygon.is_none()
    }

    pub fn area(&self) -> f64 {
        self.polygon.as_ref().map_or(0.0, ConvexPolygon::area)
    }

    /// Generator indices of the cells sharing an edge with this one.
    pub fn neighbors(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(|e| match e {
            EdgeSource::Neighbor(j) => Some(*j),
            EdgeSource::Boundary => None,
        })
    }
}

/// The partition of a convex domain induced by weighted generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDiagram {
    pub domain: ConvexPolygon,
    pub cells: Vec<PowerCell>,
}

impl PowerDiagram {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> Option<&ConvexPolygon> {
        self.cells[i].polygon.as_ref()
    }

    pub fn areas(&self) -> Vec<f64> {
        self.cells.iter().map(PowerCell::area).collect()
    }

    pub fn live_cells(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_empty()).count()
    }

    /// Whether the cell has a vertex on the domain boundary.
    pub fn touches_boundary(&self, i: usize) -> bool {
        let Some(poly) = self.cells[i].polygon.as_ref() else {
            return false;
        };
        let tol = 1e-9 * self.domain.diameter();
        self.cells[i].edges.contains(&EdgeSource::Boundary)
            || poly
                .vertices()
                .iter()
                .any(|&v| self.domain.distance_to_boundary(v) <= tol)
    }
}

/// Index of the generator with least power distance to `p`; ties go to the
/// lower index.
pub fn locate(gens: &[WeightedGenerator], p: Point2) -> usize {
    let mut best = 0;
    let mut best_power = f64::INFINITY;
    for (i, g) in gens.iter().enumerate() {
        let pw = g.power(p);
        if pw < best_power {
            best_power = pw;
            best = i;
        }
    }
    best
}

/// Half-plane of points at least as close (in power distance) to `gi` as to
/// `gj`: `2(xⱼ − xᵢ)·x ≤ |xⱼ|² − |xᵢ|² + wᵢ − wⱼ`, written relative to `xᵢ`.
pub fn bisector(gi: &WeightedGenerator, gj: &WeightedGenerator) -> Result<HalfPlane, GeometryError> {
    let n = gj.site - gi.site;
    let offset = n.dot(gi.site) + 0.5 * (n.norm_sq() + gi.weight - gj.weight);
    HalfPlane::new(n, offset)
}

/// Builds the power diagram by clipping the domain with the bisector
/// half-planes of every other generator.
pub fn power_diagram(
    gens: &[WeightedGenerator],
    domain: &ConvexPolygon,
) -> Result<PowerDiagram, GeometryError> {
    if gens.is_empty() {
        return Err(GeometryError::NoGenerators);
    }
    let diam = domain.diameter();
    if !(diam > 0.0) || !diam.is_finite() {
        return Err(GeometryError::InvalidDomain("degenerate diameter"));
    }
    let tol = DEGENERACY_TOLERANCE * diam;
    for (i, g) in gens.iter().enumerate() {
        if !g.site.is_finite() || !g.weight.is_finite() {
            return Err(GeometryError::InvalidDomain("non-finite generator"));
        }
        for (j, h) in gens.iter().enumerate().skip(i + 1) {
            if g.site.distance(h.site) <= tol {
                return Err(GeometryError::DuplicateSites(i, j));
            }
        }
    }

    let w_max = gens.iter().map(|g| g.weight).fold(f64::NEG_INFINITY, f64::max);
    let base: Vec<(Point2, EdgeSource)> = domain
        .vertices()
        .iter()
        .map(|&v| (v, EdgeSource::Boundary))
        .collect();
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(gens.len());
    let mut ring = Vec::new();
    let mut scratch = Vec::new();
    let mut cells = Vec::with_capacity(gens.len());

    for (i, gi) in gens.iter().enumerate() {
        order.clear();
        order.extend(
            gens.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, gj)| ((gj.site - gi.site).norm_sq(), j)),
        );
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        ring.clear();
        ring.extend_from_slice(&base);
        for &(d2, j) in &order {
            // Far generators cannot cut the current cell: with R the cell
            // radius about xᵢ, every cell point has |x − xⱼ| ≥ d − R.
            let r = ring
                .iter()
                .map(|(v, _)| (*v - gi.site).norm())
                .fold(0.0, f64::max);
            let d = libm::sqrt(d2);
            if d > r && (d - r) * (d - r) - w_max > r * r - gi.weight {
                break;
            }
            let h = bisector(gi, &gens[j])?;
            clip_ring(&ring, &h, EdgeSource::Neighbor(j), tol, &mut scratch);
            core::mem::swap(&mut ring, &mut scratch);
            if ring.len() < 3 {
                break;
            }
        }

        let edges: Vec<EdgeSource> = ring.iter().map(|(_, l)| *l).collect();
        let polygon = finish_ring(core::mem::take(&mut ring));
        cells.push(PowerCell {
            generator: i,
            edges: if polygon.is_some() { edges } else { Vec::new() },
            polygon,
        });
    }

    Ok(PowerDiagram {
        domain: domain.clone(),
        cells,
    })
}
