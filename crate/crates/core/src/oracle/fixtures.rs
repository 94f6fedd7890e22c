use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{Point2, WeightedGenerator};

/// The two four-point centroidal Voronoi tessellations of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CvtFixture {
    /// Four congruent squares.
    TwoByTwo,
    /// Four vertical strips.
    FourStrips,
}

impl CvtFixture {
    pub fn name(self) -> &'static str {
        match self {
            CvtFixture::TwoByTwo => "2x2",
            CvtFixture::FourStrips => "4-strips",
        }
    }

    pub fn generators(self) -> Vec<WeightedGenerator> {
        let sites: Vec<Point2> = match self {
            CvtFixture::TwoByTwo => vec![
                Point2::new(0.25, 0.25),
                Point2::new(0.75, 0.25),
                Point2::new(0.75, 0.75),
                Point2::new(0.25, 0.75),
            ],
            CvtFixture::FourStrips => (0..4)
                .map(|k| Point2::new(0.125 + 0.25 * k as f64, 0.5))
                .collect(),
        };
        sites.into_iter().map(|s| WeightedGenerator::new(s, 0.0)).collect()
    }
}

/// `∫ |x − c|²` over an `a × b` rectangle about its centre: `ab(a² + b²)/12`.
pub fn rectangle_moment(a: f64, b: f64) -> f64 {
    a * b * (a * a + b * b) / 12.0
}

/// Transport energies of the two fixtures from closed-form rectangle moments.
pub fn cvt_fixture_energies() -> [(CvtFixture, f64); 2] {
    let squares = 4.0 * rectangle_moment(0.5, 0.5);
    let strips = 4.0 * rectangle_moment(0.25, 1.0);
    assert!(squares < strips, "2x2 tessellation must have the lower energy");
    [(CvtFixture::TwoByTwo, squares), (CvtFixture::FourStrips, strips)]
}
