//! Calibration searches: least unlearning steps for a target, and least
//! noise for a step budget.

use super::{
    default_init_lsi, learn_epsilon0, rdp_to_dp, unlearn_epsilon, NoiseSchedule, ProblemConstants,
    Regime,
};
use crate::error::{Error, Result};

pub const DEFAULT_K_MAX: u64 = 1_000_000;

/// Least `K ≤ k_max` such that the `(ε, δ)` guarantee after `K` unlearning
/// steps is at most `target`. The learning bound uses `ns.learn_iters` and
/// the default initialization LSI constant.
///
/// Gallops `K = 1, 2, 4, …` until the target is met, then bisects the last
/// interval.
pub fn find_min_k(
    target: f64,
    delta: f64,
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    group: u32,
    k_max: u64,
) -> Result<u64> {
    if !(target > 0.0) {
        return Err(Error::invalid("target epsilon must be positive"));
    }
    if k_max < 1 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let c0 = default_init_lsi(pc, ns, regime);
    let eps0 = learn_epsilon0(pc, ns, regime, group, ns.learn_iters, c0)?;
    let meets = |k: u64| -> Result<bool> {
        let bound = unlearn_epsilon(&eps0, pc, ns, regime, c0, k)?;
        Ok(rdp_to_dp(&bound, delta)?.epsilon <= target)
    };
    least_satisfying(k_max, target, meets)
}

/// Smallest `k ∈ [0, k_max]` with `meets(k)`, assuming `meets` is monotone.
pub(crate) fn least_satisfying(
    k_max: u64,
    target: f64,
    mut meets: impl FnMut(u64) -> Result<bool>,
) -> Result<u64> {
    if meets(0)? {
        return Ok(0);
    }
    let mut lo = 0u64; // fails
    let mut hi = 1u64;
    loop {
        if hi >= k_max {
            if meets(k_max)? {
                hi = k_max;
                break;
            }
            return Err(Error::BudgetUnreachable { target, k_max });
        }
        if meets(hi)? {
            break;
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Bracket and stopping rule for [`binary_search_sigma`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSearch {
    pub lo: f64,
    pub hi: f64,
    /// Stop once `(hi − lo)/lo` drops below this.
    pub rel_tol: f64,
}

impl Default for SigmaSearch {
    fn default() -> Self {
        Self {
            lo: 1e-6,
            hi: 100.0,
            rel_tol: 1e-4,
        }
    }
}

/// Smallest noise level `σ` (to within `search.rel_tol`) whose least
/// unlearning step count for `target` fits in `k_budget`. The noise field of
/// `ns` is ignored.
#[allow(clippy::too_many_arguments)]
pub fn binary_search_sigma(
    target: f64,
    delta: f64,
    k_budget: u64,
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    group: u32,
    search: SigmaSearch,
) -> Result<f64> {
    if !(search.lo > 0.0 && search.lo < search.hi && search.rel_tol > 0.0) {
        return Err(Error::invalid(
            "sigma search needs 0 < lo < hi and rel_tol > 0",
        ));
    }
    let feasible = |sigma: f64| -> Result<bool> {
        let ns = ns.with_sigma(sigma);
        match find_min_k(target, delta, pc, &ns, regime, group, k_budget.max(1)) {
            Ok(k) => Ok(k <= k_budget),
            Err(Error::BudgetUnreachable { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    if !feasible(search.hi)? {
        return Err(Error::NoFeasibleSigma {
            sigma_hi: search.hi,
            k_budget,
        });
    }
    let (mut lo, mut hi) = (search.lo, search.hi);
    if feasible(lo)? {
        return Ok(lo);
    }
    while (hi - lo) / lo >= search.rel_tol {
        let mid = (lo * hi).sqrt();
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mnist() -> ProblemConstants {
        ProblemConstants::new(0.25 + 0.0119, 0.0119, 1.0, 100.0, 11982, 724, 0.0119).unwrap()
    }
    const MNIST_DELTA: f64 = 8.3458e-5;

    #[test]
    fn zero_when_already_private() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 1.0);
        let k = find_min_k(1.0, MNIST_DELTA, &pc, &ns, Regime::StronglyConvex, 1, 10).unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn table_sigma_gives_unit_epsilon_after_one_step() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.0096);
        let c0 = default_init_lsi(&pc, &ns, Regime::StronglyConvex);
        let e0 = learn_epsilon0(&pc, &ns, Regime::StronglyConvex, 1, ns.learn_iters, c0).unwrap();
        let b = unlearn_epsilon(&e0, &pc, &ns, Regime::StronglyConvex, c0, 1).unwrap();
        let eps = rdp_to_dp(&b, MNIST_DELTA).unwrap().epsilon;
        assert!((eps - 1.0).abs() < 0.01, "eps = {eps}");
    }

    #[test]
    fn calibrated_sigma_needs_exactly_one_step() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 1.0);
        let sigma = binary_search_sigma(
            1.0,
            MNIST_DELTA,
            1,
            &pc,
            &ns,
            Regime::StronglyConvex,
            1,
            SigmaSearch::default(),
        )
        .unwrap();
        let at = |s: f64| {
            find_min_k(
                1.0,
                MNIST_DELTA,
                &pc,
                &ns.with_sigma(s),
                Regime::StronglyConvex,
                1,
                100,
            )
            .unwrap()
        };
        assert_eq!(at(sigma), 1);
        assert!(at(sigma * 0.999) > 1);
    }

    #[test]
    fn unreachable_target() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.001);
        let err = find_min_k(1e-6, MNIST_DELTA, &pc, &ns, Regime::StronglyConvex, 1, 50);
        assert!(matches!(
            err,
            Err(Error::BudgetUnreachable { k_max: 50, .. })
        ));
    }

    #[test]
    fn least_satisfying_is_exact() {
        for threshold in [0u64, 1, 2, 3, 17, 64, 65, 999] {
            let k = least_satisfying(1000, 1.0, |k| Ok(k >= threshold)).unwrap();
            assert_eq!(k, threshold);
        }
        assert!(least_satisfying(1000, 1.0, |k| Ok(k >= 1001)).is_err());
        assert_eq!(
            least_satisfying(1000, 1.0, |k| Ok(k >= 1000)).unwrap(),
            1000
        );
    }

    #[test]
    fn infeasible_upper_bracket() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 1.0);
        let search = SigmaSearch {
            lo: 1e-6,
            hi: 1e-4,
            rel_tol: 1e-4,
        };
        let err = binary_search_sigma(
            1.0,
            MNIST_DELTA,
            1,
            &pc,
            &ns,
            Regime::StronglyConvex,
            1,
            search,
        );
        assert!(matches!(err, Err(Error::NoFeasibleSigma { .. })));
    }
}
