use alloc::vec::Vec;

use super::Point2;
use crate::error::GeometryError;

/// Relative degeneracy tolerance: vertices closer than this fraction of the
/// polygon diameter are merged.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// The closed half-plane `{x : normal · x ≤ offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    normal: Point2,
    offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point2, offset: f64) -> Result<Self, GeometryError> {
        if normal.norm_sq() == 0.0 || !normal.is_finite() || !offset.is_finite() {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> Point2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed violation `normal · p − offset`; nonpositive inside.
    #[inline]
    pub fn eval(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.eval(p) <= 0.0
    }
}

/// A convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Validates convexity, orientation and non-degeneracy.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        let diam = diameter_of(&vertices);
        let merge = DEGENERACY_TOLERANCE * diam;
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i].distance(vertices[j]) <= merge {
                return Err(GeometryError::DegenerateEdge(i, j));
            }
        }
        let area = signed_area(&vertices);
        if !(area > 0.0) {
            return Err(GeometryError::NonPositiveArea(area));
        }
        // Every vertex must lie to the left of (or on) every edge; this also
        // rejects self-intersecting rings whose turns all have the same sign.
        let slack = 1e-12 * diam * diam;
        for i in 0..n {
            let a = vertices[i];
            let e = vertices[(i + 1) % n] - a;
            for (k, &v) in vertices.iter().enumerate() {
                if e.cross(v - a) < -slack {
                    return Err(GeometryError::NonConvex(if k == 0 { n - 1 } else { k - 1 }));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub(crate) fn from_raw(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    pub fn unit_square() -> Self {
        Self::rectangle(Point2::ORIGIN, Point2::new(1.0, 1.0))
    }

    /// Axis-aligned rectangle with opposite corners `lo` and `hi`.
    pub fn rectangle(lo: Point2, hi: Point2) -> Self {
        assert!(hi.x > lo.x && hi.y > lo.y, "rectangle corners out of order");
        Self::from_raw(alloc::vec![
            lo,
            Point2::new(hi.x, lo.y),
            hi,
            Point2::new(lo.x, hi.y),
        ])
    }

    /// Regular `n`-gon with the given circumradius; the first vertex sits at
    /// angle `rotation` from the x-axis.
    pub fn regular(n: usize, center: Point2, circumradius: f64, rotation: f64) -> Self {
        assert!(n >= 3 && circumradius > 0.0);
        let step = 2.0 * core::f64::consts::PI / n as f64;
        let vertices = (0..n)
            .map(|k| {
                let t = rotation + step * k as f64;
                center + Point2::new(libm::cos(t), libm::sin(t)) * circumradius
            })
            .collect();
        Self::from_raw(vertices)
    }

    /// Regular hexagon (vertex on the positive x-axis) of prescribed area.
    pub fn regular_hexagon(center: Point2, area: f64) -> Self {
        // area = (3√3/2) R²
        let r = libm::sqrt(2.0 * area / (3.0 * libm::sqrt(3.0)));
        Self::regular(6, center, r, 0.0)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(vᵢ, vᵢ₊₁)`, closing back to the first vertex.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let m = self.moments_about(self.vertices[0]);
        self.vertices[0] + m.first / m.area
    }

    /// `∫_P |x − a|² dx`, exact up to rounding.
    pub fn second_moment(&self, a: Point2) -> f64 {
        self.moments_about(a).second
    }

    /// Area, first and second moments relative to `a`, by a triangle fan from
    /// the first vertex with closed-form per-triangle integrals.
    pub fn moments_about(&self, a: Point2) -> Moments {
        let v = &self.vertices;
        let p0 = v[0] - a;
        let q0 = p0.norm_sq();
        let mut area2 = 0.0;
        let mut first = Point2::ORIGIN;
        let mut second6 = 0.0;
        for k in 1..v.len() - 1 {
            let p1 = v[k] - a;
            let p2 = v[k + 1] - a;
            let d = (p1 - p0).cross(p2 - p0);
            area2 += d;
            first += (p0 + p1 + p2) * d;
            second6 += d
                * (q0 + p1.norm_sq() + p2.norm_sq() + p0.dot(p1) + p1.dot(p2) + p2.dot(p0));
        }
        Moments {
            area: 0.5 * area2,
            first: first * (1.0 / 6.0),
            second: second6 / 12.0,
        }
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    /// `(min corner, max corner)`.
    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for v in &self.vertices[1..] {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Closed containment with an absolute tolerance.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Open containment: strictly inside every edge.
    pub fn contains_strictly(&self, p: Point2) -> bool {
        self.edges().all(|(a, b)| (b - a).cross(p - a) > 0.0)
    }

    /// Distance from an interior point to the boundary.
    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translated(&self, by: Point2) -> Self {
        Self::from_raw(self.vertices.iter().map(|&v| v + by).collect())
    }

    /// Scaled about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0);
        Self::from_raw(self.vertices.iter().map(|&v| v * factor).collect())
    }
}

/// Polygon moments relative to a reference point `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub area: f64,
    /// `∫ (x − a) dx`
    pub first: Point2,
    /// `∫ |x − a|² dx`
    pub second: f64,
}

/// `poly ∩ h`, or `None` when the intersection has zero area.
pub fn clip_halfplane(poly: &ConvexPolygon, h: &HalfPlane) -> Option<ConvexPolygon> {
    let ring: Vec<(Point2, ())> = poly.vertices.iter().map(|&v| (v, ())).collect();
    let tol = DEGENERACY_TOLERANCE * poly.diameter();
    let mut out = Vec::with_capacity(ring.len() + 1);
    clip_ring(&ring, h, (), tol, &mut out);
    finish_ring(out)
}

pub(crate) fn finish_ring<L>(ring: Vec<(Point2, L)>) -> Option<ConvexPolygon> {
    if ring.len() < 3 {
        return None;
    }
    let poly = ConvexPolygon::from_raw(ring.into_iter().map(|(p, _)| p).collect());
    (poly.area() > 0.0).then_some(poly)
}

/// Sutherland-Hodgman clip of a convex ring whose entries carry the label of
/// the edge leaving that vertex. The new edge along the clip line gets
/// `label`. Consecutive vertices within `tol` are merged.
pub(crate) fn clip_ring<L: Copy>(
    ring: &[(Point2, L)],
    h: &HalfPlane,
    label: L,
    tol: f64,
    out: &mut Vec<(Point2, L)>,
) {
    out.clear();
    let n = ring.len();
    if n == 0 {
        return;
    }
    let mut prev = ring[0];
    let mut s_prev = h.eval(prev.0);
    for &cur in ring[1..].iter().chain(core::iter::once(&ring[0])) {
        let s_cur = h.eval(cur.0);
        if s_prev <= 0.0 {
            push_merged(out, prev, tol);
            if s_cur > 0.0 {
                let t = s_prev / (s_prev - s_cur);
                push_merged(out, (prev.0 + (cur.0 - prev.0) * t, label), tol);
            }
        } else if s_cur <= 0.0 {
            let t = s_prev / (s_prev - s_cur);
            push_merged(out, (prev.0 + (cur.0 - prev.0) * t, prev.1), tol);
        }
        prev = cur;
        s_prev = s_cur;
    }
    // Close the ring: the first and last vertex may also coincide.
    while out.len() > 1 && out[0].0.distance(out[out.len() - 1].0) <= tol {
        let last = out.pop().expect("len > 1");
        out[0].0 = last.0;
    }
}

/// Appends `v`; a vertex coinciding with the previous one keeps the earlier
/// position but takes over the later outgoing-edge label.
#[inline]
fn push_merged<L: Copy>(out: &mut Vec<(Point2, L)>, v: (Point2, L), tol: f64) {
    if let Some(last) = out.last_mut() {
        if last.0.distance(v.0) <= tol {
            last.1 = v.1;
            return;
        }
    }
    out.push(v);
}

pub(crate) fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let p0 = vertices[0];
    let mut acc = 0.0;
    for k in 1..n.saturating_sub(1) {
        acc += (vertices[k] - p0).cross(vertices[k + 1] - p0);
    }
    0.5 * acc
}

fn diameter_of(vertices: &[Point2]) -> f64 {
    let mut d2: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            d2 = d2.max((*a - *b).norm_sq());
        }
    }
    libm::sqrt(d2)
}

pub(crate) fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let len2 = e.norm_sq();
    let t = if len2 > 0.0 { ((p - a).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + e * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_bad_polygons() {
        assert_eq!(
            ConvexPolygon::new(vec![p(0.0, 0.0), p(1.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        );
        // clockwise
        assert!(matches!(
            ConvexPolygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)]),
            Err(GeometryError::NonPositiveArea(_))
        ));
        // dart
        assert!(matches!(
            ConvexPolygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.5), p(1.0, 2.0)]),
            Err(GeometryError::NonConvex(_))
        ));
        assert!(matches!(
            ConvexPolygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]),
            Err(GeometryError::DegenerateEdge(1, 2))
        ));
        assert_eq!(
            ConvexPolygon::new(vec![p(0.0, 0.0), p(f64::NAN, 0.0), p(0.0, 1.0)]),
            Err(GeometryError::NonFinite(1))
        );
    }

    #[test]
    fn rejects_pentagram() {
        let star = ConvexPolygon::regular(5, Point2::ORIGIN, 1.0, 0.0);
        let v = star.vertices();
        let order = [0, 2, 4, 1, 3];
        let ring = order.iter().map(|&i| v[i]).collect();
        assert!(ConvexPolygon::new(ring).is_err());
    }

    #[test]
    fn clip_examples() {
        let sq = ConvexPolygon::unit_square();
        let keep = HalfPlane::new(p(1.0, 0.0), 2.0).unwrap();
        assert_eq!(clip_halfplane(&sq, &keep).unwrap(), sq);

        let half = HalfPlane::new(p(1.0, 0.0), 0.5).unwrap();
        let left = clip_halfplane(&sq, &half).unwrap();
        assert!((left.area() - 0.5).abs() < 1e-15);
        let c = left.centroid();
        assert!((c.x - 0.25).abs() < 1e-15 && (c.y - 0.5).abs() < 1e-15);

        let away = HalfPlane::new(p(1.0, 0.0), -1.0).unwrap();
        assert!(clip_halfplane(&sq, &away).is_none());

        // touching along an edge only
        let edge = HalfPlane::new(p(1.0, 0.0), 0.0).unwrap();
        assert!(clip_halfplane(&sq, &edge).is_none());
        // touching at a corner only
        let corner = HalfPlane::new(p(1.0, 1.0), 0.0).unwrap();
        assert!(clip_halfplane(&sq, &corner).is_none());
    }

    #[test]
    fn zero_normal_rejected() {
        assert_eq!(HalfPlane::new(Point2::ORIGIN, 1.0), Err(GeometryError::ZeroNormal));
    }

    #[test]
    fn areas_and_centroids() {
        assert_eq!(ConvexPolygon::unit_square().area(), 1.0);
        assert_eq!(triangle().area(), 0.5);
        let hex = ConvexPolygon::regular_hexagon(p(0.3, -0.2), 1.0);
        assert!((hex.area() - 1.0).abs() < 1e-12);

        assert_eq!(ConvexPolygon::unit_square().centroid(), p(0.5, 0.5));
        let c = triangle().centroid();
        assert!((c.x - 1.0 / 3.0).abs() < 1e-15 && (c.y - 1.0 / 3.0).abs() < 1e-15);
        let r = ConvexPolygon::rectangle(p(0.0, 0.0), p(0.5, 1.0));
        assert_eq!(r.centroid(), p(0.25, 0.5));
    }

    #[test]
    fn second_moments() {
        let sq = ConvexPolygon::unit_square();
        assert!((sq.second_moment(p(0.5, 0.5)) - 1.0 / 6.0).abs() < 1e-15);
        assert!((sq.second_moment(p(0.0, 0.0)) - 2.0 / 3.0).abs() < 1e-15);
        assert!((triangle().second_moment(Point2::ORIGIN) - 1.0 / 6.0).abs() < 1e-15);
        let hex = ConvexPolygon::regular_hexagon(Point2::ORIGIN, 1.0);
        let c6 = 5.0 * 3f64.sqrt() / 54.0;
        assert!((hex.second_moment(Point2::ORIGIN) - c6).abs() < 1e-12);
    }

    #[test]
    fn containment() {
        let sq = ConvexPolygon::unit_square();
        assert!(sq.contains(p(1.0, 0.5), 0.0));
        assert!(!sq.contains_strictly(p(1.0, 0.5)));
        assert!(sq.contains_strictly(p(0.2, 0.7)));
        assert!(!sq.contains(p(1.1, 0.5), 1e-9));
        assert!((sq.distance_to_boundary(p(0.2, 0.5)) - 0.2).abs() < 1e-15);
    }
}
