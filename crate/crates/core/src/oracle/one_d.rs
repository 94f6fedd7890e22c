use alloc::vec::Vec;

/// Global minimiser of `λM + W_p(1, ν)` on the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct OneDSolution {
    pub lambda: f64,
    pub p: f64,
    pub m_opt: usize,
    pub energy: f64,
    /// Midpoints of the uniform partition into `m_opt` intervals.
    pub sites: Vec<f64>,
}

/// Energy of the uniform `M`-point configuration: `λM + 2^{-p} M^{-p} / (p+1)`.
pub fn energy_1d(lambda: f64, p: f64, m: usize) -> f64 {
    let m = m as f64;
    lambda * m + libm::pow(2.0 * m, -p) / (p + 1.0)
}

/// Optimal point count from the stationary real `M = (2^p (p+1) λ / p)^{-1/(p+1)}`,
/// rounded to whichever neighbouring integer has the lower energy.
pub fn solve_1d(lambda: f64, p: f64) -> OneDSolution {
    assert!(lambda > 0.0 && p >= 1.0, "solve_1d needs lambda > 0 and p >= 1");
    let real = libm::pow(libm::pow(2.0, p) * (p + 1.0) * lambda / p, -1.0 / (p + 1.0));
    let lo = (libm::floor(real) as usize).max(1);
    let hi = (libm::ceil(real) as usize).max(1);
    let (m_opt, energy) = [lo, hi]
        .into_iter()
        .map(|m| (m, energy_1d(lambda, p, m)))
        .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let sites = (0..m_opt)
        .map(|i| (2 * i + 1) as f64 / (2 * m_opt) as f64)
        .collect();
    OneDSolution { lambda, p, m_opt, energy, sites }
}

/// Classical Lloyd step on `[0, 1]` for sorted distinct sites: each site
/// moves to the midpoint of its Voronoi interval.
pub fn lloyd_1d_step(sites: &[f64]) -> Vec<f64> {
    let n = sites.len();
    (0..n)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { 0.5 * (sites[i - 1] + sites[i]) };
            let right = if i + 1 == n { 1.0 } else { 0.5 * (sites[i] + sites[i + 1]) };
            0.5 * (left + right)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_instance() {
        let s = solve_1d(1.0 / 6000.0, 2.0);
        assert_eq!(s.m_opt, 10);
        assert!((s.energy - 0.0025).abs() <= f64::EPSILON * 0.0025);
        assert_eq!(s.sites.len(), 10);
        assert_eq!(s.sites[0], 0.05);
    }

    #[test]
    fn large_lambda_gives_one_point() {
        for lambda in [1.0, 3.0, 100.0] {
            assert_eq!(solve_1d(lambda, 2.0).m_opt, 1);
        }
        assert_eq!(solve_1d(5.0, 1.0).sites, vec![0.5]);
    }

    /// Exact Lloyd step on sites `num[i] / den` over the unit interval.
    fn rational_step(num: &[i64], den: i64) -> Vec<(i64, i64)> {
        let n = num.len();
        (0..n)
            .map(|i| {
                // (left + right) / 2 with left, right over 2·den
                let left = if i == 0 { 0 } else { num[i - 1] + num[i] };
                let right = if i + 1 == n { 2 * den } else { num[i] + num[i + 1] };
                (left + right, 4 * den)
            })
            .collect()
    }

    #[test]
    fn uniform_sites_are_lloyd_fixed_points() {
        for lambda in [1e-5, 3e-4, 0.02] {
            let s = solve_1d(lambda, 2.0);
            let m = s.m_opt as i64;
            let num: Vec<i64> = (0..m).map(|i| 2 * i + 1).collect();
            for (i, (p, q)) in rational_step(&num, 2 * m).into_iter().enumerate() {
                assert_eq!(p * (2 * m), num[i] * q);
            }
            for (a, b) in lloyd_1d_step(&s.sites).iter().zip(&s.sites) {
                assert!((a - b).abs() <= 2.0 * f64::EPSILON);
            }
        }
    }
}
