use super::EnergyBreakdown;
use crate::geometry::ConvexPolygon;

/// `∫_H |x|² dx` for the unit-area regular hexagon `H` centred at the origin.
pub const C6: f64 = 0.160_375_074_774_896_01;

/// Optimal honeycomb cell density `λ^{2/3} / A` = `5^{2/3} 3^{-5/3}`.
pub const HEXAGONAL_DENSITY: f64 = 0.468_573_702_945_416_2;

/// Energetics of the optimally sized honeycomb at a given `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexagonalReference {
    pub lambda: f64,
    pub domain_area: f64,
    /// Vertex-to-vertex diameter `D̃` of the optimal hexagon.
    pub diameter: f64,
    pub cell_area: f64,
    /// `e_D̃ = λ √A + C_D̃`.
    pub cell_energy: f64,
    /// `E_D̃ = e_D̃ |Ω| / A`.
    pub total_energy: f64,
    pub c6: f64,
}

impl HexagonalReference {
    /// Number of optimal hexagons tiling the domain, `|Ω| / A_D̃`.
    pub fn expected_cells(&self) -> f64 {
        self.domain_area / self.cell_area
    }
}

/// Honeycomb reference for `lambda > 0` on a domain of the given area.
pub fn hexagonal_reference(lambda: f64, domain_area: f64) -> HexagonalReference {
    assert!(lambda > 0.0, "hexagonal reference needs lambda > 0");
    let p = libm::pow;
    let diameter = p(3.0, 1.0 / 12.0) * p(2.0, 1.5) * p(5.0, -1.0 / 3.0) * libm::cbrt(lambda);
    let d2 = diameter * diameter;
    let cell_area = 3.0 * libm::sqrt(3.0) * d2 / 8.0;
    let cell_energy = lambda * p(3.0, 0.75) * p(2.0, -1.5) * diameter
        + libm::sqrt(3.0) * 5.0 * d2 * d2 / 128.0;
    HexagonalReference {
        lambda,
        domain_area,
        diameter,
        cell_area,
        cell_energy,
        total_energy: cell_energy * domain_area / cell_area,
        c6: 5.0 * libm::sqrt(3.0) / 54.0,
    }
}

/// `Ẽ = (E − E_D̃) / e_D̃`: the excess over the ideal honeycomb in units of one
/// honeycomb cell.
pub fn rescaled_energy(e: &EnergyBreakdown, reference: &HexagonalReference) -> f64 {
    debug_assert!((e.lambda - reference.lambda).abs() <= 1e-15 * reference.lambda);
    (e.total - reference.total_energy) / reference.cell_energy
}

/// Blows the domain up about the origin by `(2 c₆ / λ)^{1/3}`; in the scaled
/// domain the energy reads `2c₆ Σ √mᵢ + W₂`.
pub fn rescale_domain(domain: &ConvexPolygon, lambda: f64) -> ConvexPolygon {
    assert!(lambda > 0.0, "rescaling needs lambda > 0");
    domain.scaled(rescale_factor(lambda))
}

pub fn rescale_factor(lambda: f64) -> f64 {
    libm::cbrt(2.0 * C6 / lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    #[test]
    fn constants_match_closed_forms() {
        assert!((C6 - 5.0 * 3f64.sqrt() / 54.0).abs() < 1e-16);
        let density = 5f64.powf(2.0 / 3.0) * 3f64.powf(-5.0 / 3.0);
        assert!((HEXAGONAL_DENSITY - density).abs() < 1e-15);
    }

    #[test]
    fn reference_identities() {
        for lambda in [1.0, 0.1, 0.026, 0.005] {
            let r = hexagonal_reference(lambda, 2.5);
            let l23 = libm::cbrt(lambda * lambda);
            assert!((l23 / r.cell_area - HEXAGONAL_DENSITY).abs() < 1e-12);
            let closed = 0.5 * 5f64.cbrt() * 3f64.powf(1.0 / 6.0) * l23 * 2.5;
            assert!((r.total_energy - closed).abs() < 1e-14 * closed.max(1.0));
            // D̃ minimises the energy per unit area
            let per_area = |d: f64| {
                lambda * 3f64.powf(-0.75) * 2f64.powf(1.5) / d + 5.0 * d * d / 48.0
            };
            let h = 1e-4 * r.diameter;
            assert!(per_area(r.diameter) < per_area(r.diameter + h));
            assert!(per_area(r.diameter) < per_area(r.diameter - h));
            assert!((per_area(r.diameter) - r.cell_energy / r.cell_area).abs() < 1e-12);
        }
    }

    #[test]
    fn hexagon_cost_matches_cd() {
        let r = hexagonal_reference(0.1, 1.0);
        let hex = ConvexPolygon::regular(6, Point2::ORIGIN, r.diameter / 2.0, 0.3);
        let cd = 5.0 * 3f64.sqrt() * r.diameter.powi(4) / 128.0;
        assert!((hex.second_moment(Point2::ORIGIN) - cd).abs() < 1e-15);
        assert!((hex.area() - r.cell_area).abs() < 1e-15);
    }

    #[test]
    fn rescaled_energy_definition() {
        let r = hexagonal_reference(0.005, 1.0);
        let at = |total| EnergyBreakdown::new(0.005, total, 0.0);
        assert_eq!(rescaled_energy(&at(r.total_energy), &r), 0.0);
        assert!((rescaled_energy(&at(r.total_energy + r.cell_energy), &r) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaling() {
        let sq = ConvexPolygon::unit_square();
        let same = rescale_domain(&sq, 2.0 * C6);
        for (a, b) in same.vertices().iter().zip(sq.vertices()) {
            assert!(a.distance(*b) < 1e-15);
        }
        let big = rescale_domain(&sq, 2.0 * C6 / 8.0);
        assert!((big.area() - 4.0).abs() < 1e-13);
        assert!(rescale_factor(0.01) > rescale_factor(0.02));
    }
}
