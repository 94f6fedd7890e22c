//! Fixed-order triangle quadrature over convex polygons.

use super::{ConvexPolygon, Point2};
use crate::error::{Error, Result};

// Degree-5 seven-point rule on the reference triangle (barycentric nodes,
// weights normalised to sum to one).
const CENTER_WEIGHT: f64 = 0.225;
const A1: f64 = 0.059_715_871_789_769_82;
const B1: f64 = 0.470_142_064_105_115_1;
const W1: f64 = 0.132_394_152_788_506_2;
const A2: f64 = 0.797_426_985_353_087_3;
const B2: f64 = 0.101_286_507_323_456_34;
const W2: f64 = 0.125_939_180_544_827_14;

const NODES: [(f64, f64, f64, f64); 7] = [
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, CENTER_WEIGHT),
    (A1, B1, B1, W1),
    (B1, A1, B1, W1),
    (B1, B1, A1, W1),
    (A2, B2, B2, W2),
    (B2, A2, B2, W2),
    (B2, B2, A2, W2),
];

fn triangle<const N: usize>(
    a: Point2,
    b: Point2,
    c: Point2,
    depth: u32,
    f: &mut impl FnMut(Point2) -> Result<[f64; N]>,
    acc: &mut [f64; N],
) -> Result<()> {
    if depth > 0 {
        let ab = (a + b) * 0.5;
        let bc = (b + c) * 0.5;
        let ca = (c + a) * 0.5;
        triangle(a, ab, ca, depth - 1, f, acc)?;
        triangle(ab, b, bc, depth - 1, f, acc)?;
        triangle(ca, bc, c, depth - 1, f, acc)?;
        return triangle(ab, bc, ca, depth - 1, f, acc);
    }
    let area = 0.5 * (b - a).cross(c - a);
    if area == 0.0 {
        return Ok(());
    }
    for &(la, lb, lc, w) in &NODES {
        let v = f(a * la + b * lb + c * lc)?;
        for (s, x) in acc.iter_mut().zip(v) {
            *s += area * w * x;
        }
    }
    Ok(())
}

/// Integrates `f` over `poly` using a fan of signed triangles with apex
/// `apex`. The fan is exact as a decomposition for any apex, and placing the
/// apex at a singular point of `f` keeps every node away from it. Each fan
/// triangle is split into `4^refinements` congruent pieces.
pub fn integrate_fan<const N: usize>(
    poly: &ConvexPolygon,
    apex: Point2,
    refinements: u32,
    mut f: impl FnMut(Point2) -> Result<[f64; N]>,
) -> Result<[f64; N]> {
    let mut acc = [0.0; N];
    for (p, q) in poly.edges() {
        triangle(apex, p, q, refinements, &mut f, &mut acc)?;
    }
    Ok(acc)
}

/// `∫_poly |x − a|^p dx` by the seven-point rule, refined once for `p < 2`.
pub fn p_moment_quadrature(poly: &ConvexPolygon, a: Point2, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidConfig("p must be at least 1"));
    }
    let refinements = u32::from(p < 2.0);
    let [m] = integrate_fan(poly, a, refinements, |x| Ok([libm::pow((x - a).norm(), p)]))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_normalised() {
        let total: f64 = NODES.iter().map(|n| n.3).sum();
        assert!((total - 1.0).abs() < 1e-15);
        for n in NODES {
            assert!((n.0 + n.1 + n.2 - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quadratic_moment_matches_closed_form() {
        let sq = ConvexPolygon::unit_square();
        let c = Point2::new(0.5, 0.5);
        let q = p_moment_quadrature(&sq, c, 2.0).unwrap();
        assert!((q - 1.0 / 6.0).abs() < 1e-10);
        let off = Point2::new(-0.3, 0.8);
        let q = p_moment_quadrature(&sq, off, 2.0).unwrap();
        assert!((q - sq.second_moment(off)).abs() < 1e-12);
    }

    #[test]
    fn quartic_moment_is_exact() {
        // degree-5 rule integrates |x|⁴ exactly: 2/80 + 2/144 = 7/180
        let sq = ConvexPolygon::unit_square();
        let q = p_moment_quadrature(&sq, Point2::new(0.5, 0.5), 4.0).unwrap();
        assert!((q - 7.0 / 180.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_small_p() {
        let sq = ConvexPolygon::unit_square();
        assert!(p_moment_quadrature(&sq, Point2::ORIGIN, 0.5).is_err());
    }
}
