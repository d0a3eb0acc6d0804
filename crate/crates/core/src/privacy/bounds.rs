//! Standalone bounds: weak triangle inequality, adjacency of unbiased
//! limits, and the iteration saving over retraining.

use super::{NoiseSchedule, ProblemConstants};
use crate::error::{Error, Result};

/// `d_α(P, R) ≤ ((α − ½)/(α − 1))·(d_{2α}(P, Q) + d_{2α}(Q, R))`.
pub fn weak_triangle(alpha: f64, d1_at_2alpha: f64, d2_at_2alpha: f64) -> f64 {
    debug_assert!(alpha > 1.0);
    (alpha - 0.5) / (alpha - 1.0) * (d1_at_2alpha + d2_at_2alpha)
}

/// Rényi difference between the Gibbs limits of adjacent datasets when any
/// single loss term moves by at most `loss_sensitivity`: `2F/n`, for every
/// order.
pub fn adjacency_bound_unbiased(loss_sensitivity: f64, n: usize) -> f64 {
    2.0 * loss_sensitivity / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingBound {
    /// Lower bound on PNGD iterations saved compared with retraining.
    pub iterations: f64,
    /// `m²n² ≤ 16M²`: the bound is non-positive and reported as zero.
    pub vacuous: bool,
}

/// `(α/(mη))·log(m²n²/(16M²))`, strongly convex only.
pub fn retrain_saving_lower_bound(
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    alpha: f64,
) -> Result<SavingBound> {
    let m = pc.strong_convexity;
    if m <= 0.0 {
        return Err(Error::invalid(
            "saving bound needs a strongly convex objective",
        ));
    }
    if !(alpha > 1.0) {
        return Err(Error::invalid("alpha must exceed 1"));
    }
    let n = pc.n as f64;
    let ratio = (m * n) * (m * n) / (16.0 * pc.lipschitz * pc.lipschitz);
    let value = alpha / (m * ns.step) * ratio.ln();
    if value > 0.0 {
        Ok(SavingBound {
            iterations: value,
            vacuous: false,
        })
    } else {
        Ok(SavingBound {
            iterations: 0.0,
            vacuous: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::privacy::LearnIters;

    #[test]
    fn weak_triangle_values() {
        assert!((weak_triangle(1.5, 1.0, 1.0) - 4.0).abs() < 1e-15);
        assert!((weak_triangle(2.0, 0.3, 0.7) - 1.5).abs() < 1e-15);
        assert!((weak_triangle(1e12, 1.0, 1.0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn adjacency() {
        assert_eq!(adjacency_bound_unbiased(0.0, 10), 0.0);
        assert_eq!(adjacency_bound_unbiased(1.0, 2), 1.0);
        assert!((adjacency_bound_unbiased(0.5, 11982) - 8.3458e-5).abs() < 1e-9);
    }

    fn constants(m: f64, n: usize, clip: f64) -> ProblemConstants {
        ProblemConstants::new(1.0, m, clip, 10.0, n, 3, m).unwrap()
    }

    #[test]
    fn saving_boundary_is_vacuous() {
        // m n = 4M
        let pc = constants(0.5, 8, 1.0);
        let ns = NoiseSchedule::new(1.0, 0.1, LearnIters::Infinite, 0);
        let s = retrain_saving_lower_bound(&pc, &ns, 2.0).unwrap();
        assert!(s.vacuous);
        assert_eq!(s.iterations, 0.0);
    }

    #[test]
    fn doubling_n_adds_log4() {
        let ns = NoiseSchedule::new(0.5, 0.1, LearnIters::Infinite, 0);
        let a = retrain_saving_lower_bound(&constants(0.1, 1000, 1.0), &ns, 5.0).unwrap();
        let b = retrain_saving_lower_bound(&constants(0.1, 2000, 1.0), &ns, 5.0).unwrap();
        let want = 5.0 / (0.1 * 0.5) * 4f64.ln();
        assert!((b.iterations - a.iterations - want).abs() < 1e-10);
    }

    #[test]
    fn mnist_saving_matches_oracle() {
        let pc =
            ProblemConstants::new(0.25 + 0.0119, 0.0119, 1.0, 100.0, 11982, 724, 0.0119).unwrap();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.01);
        let s = retrain_saving_lower_bound(&pc, &ns, 20.0).unwrap();
        // (α/(mη))·ln(m²n²/16) evaluated at 40 digits by the oracle script
        let want = 3_146.012_841_883_958;
        assert!(
            (s.iterations / want - 1.0).abs() < 1e-12,
            "{}",
            s.iterations
        );
    }
}
