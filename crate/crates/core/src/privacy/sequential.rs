//! Accounting for a stream of unlearning requests handled one after another
//! by fine-tuning.
//!
//! After request `i` the bound is
//! `ε⁽ⁱ⁾(α) = exp(−(1/α)·ΣR_k)·((α−½)/(α−1))·(ε₀(2α) + ε⁽ⁱ⁻¹⁾(2α))`
//! with base case `ε⁽¹⁾(α) = exp(−(1/α)·ΣR_k)·ε₀(α)`.

use super::search::least_satisfying;
use super::{
    decay_sum, default_init_lsi, learn_epsilon0, rdp_to_dp, NoiseSchedule, ProblemConstants,
    Regime, RenyiBound,
};
use crate::error::{Error, Result};

/// Split `total` removals into requests of `batch` points; the final request
/// is smaller when `batch` does not divide `total`.
pub fn split_batches(total: u32, batch: u32) -> Result<Vec<u32>> {
    if batch == 0 || total == 0 {
        return Err(Error::invalid(
            "total removals and batch size must be positive",
        ));
    }
    let mut out = vec![batch; (total / batch) as usize];
    if !total.is_multiple_of(batch) {
        out.push(total % batch);
    }
    Ok(out)
}

struct Ingredients<'a> {
    pc: &'a ProblemConstants,
    ns: &'a NoiseSchedule,
    regime: Regime,
    c0: f64,
}

impl Ingredients<'_> {
    fn eps0(&self, group: u32) -> Result<RenyiBound> {
        learn_epsilon0(
            self.pc,
            self.ns,
            self.regime,
            group,
            self.ns.learn_iters,
            self.c0,
        )
    }

    fn link(&self, previous: Option<&RenyiBound>, group: u32, k: u64) -> Result<RenyiBound> {
        let eps0 = self.eps0(group)?;
        let undecayed = match previous {
            None => eps0,
            Some(prev) => RenyiBound::WeakTriangle {
                first: Box::new(eps0),
                second: Box::new(prev.clone()),
            },
        };
        let rate = decay_sum(self.pc, self.ns, self.regime, self.c0, k)?;
        Ok(undecayed.decayed(rate))
    }
}

/// Bound after the last of `k_list.len()` requests, request `i` removing
/// `batches[i]` points and fine-tuning for `k_list[i]` steps.
pub fn sequential_bound(
    ns: &NoiseSchedule,
    batches: &[u32],
    k_list: &[u64],
    pc: &ProblemConstants,
    regime: Regime,
) -> Result<RenyiBound> {
    if k_list.is_empty() {
        return Err(Error::invalid("need at least one request"));
    }
    if batches.len() < k_list.len() {
        return Err(Error::invalid("fewer batch sizes than requests"));
    }
    let parts = Ingredients {
        pc,
        ns,
        regime,
        c0: default_init_lsi(pc, ns, regime),
    };
    let mut bound: Option<RenyiBound> = None;
    for (&k, &b) in k_list.iter().zip(batches) {
        bound = Some(parts.link(bound.as_ref(), b, k)?);
    }
    Ok(bound.expect("non-empty"))
}

/// `ε⁽ⁱ⁾(α)` for uniform batches of size `batch`, using the first `request`
/// entries of `k_list`.
pub fn sequential_epsilon(
    alpha: f64,
    ns: &NoiseSchedule,
    batch: u32,
    request: usize,
    k_list: &[u64],
    pc: &ProblemConstants,
    regime: Regime,
) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::invalid("alpha must exceed 1"));
    }
    if request == 0 || k_list.len() < request {
        return Err(Error::invalid("request index must lie in 1..=k_list.len()"));
    }
    let batches = vec![batch; request];
    Ok(sequential_bound(ns, &batches, &k_list[..request], pc, regime)?.eval(alpha))
}

/// Least unlearning steps for each request in turn so that every
/// intermediate model meets `target`. Earlier entries are frozen before the
/// next request is searched.
#[allow(clippy::too_many_arguments)]
pub fn sequential_k_schedule(
    target: f64,
    delta: f64,
    ns: &NoiseSchedule,
    total: u32,
    batch: u32,
    pc: &ProblemConstants,
    regime: Regime,
    k_max: u64,
) -> Result<Vec<u64>> {
    if !(target > 0.0) {
        return Err(Error::invalid("target epsilon must be positive"));
    }
    let batches = split_batches(total, batch)?;
    let parts = Ingredients {
        pc,
        ns,
        regime,
        c0: default_init_lsi(pc, ns, regime),
    };
    let mut ks = Vec::with_capacity(batches.len());
    let mut previous: Option<RenyiBound> = None;
    for (i, &b) in batches.iter().enumerate() {
        let k = least_satisfying(k_max, target, |k| {
            let bound = parts.link(previous.as_ref(), b, k)?;
            Ok(rdp_to_dp(&bound, delta)?.epsilon <= target)
        })
        .inspect_err(|e| log::debug!("request {} of {}: {e}", i + 1, batches.len()))?;
        previous = Some(parts.link(previous.as_ref(), b, k)?);
        ks.push(k);
    }
    Ok(ks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::privacy::{find_min_k, unlearn_epsilon, weak_triangle, DEFAULT_K_MAX};

    fn mnist() -> ProblemConstants {
        ProblemConstants::new(0.25 + 0.0119, 0.0119, 1.0, 100.0, 11982, 724, 0.0119).unwrap()
    }

    #[test]
    fn batches_split() {
        assert_eq!(split_batches(100, 20).unwrap(), vec![20; 5]);
        assert_eq!(split_batches(7, 3).unwrap(), vec![3, 3, 1]);
        assert!(split_batches(7, 0).is_err());
    }

    #[test]
    fn base_case_matches_single_request() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.03);
        let c0 = default_init_lsi(&pc, &ns, Regime::StronglyConvex);
        let e0 = learn_epsilon0(&pc, &ns, Regime::StronglyConvex, 5, ns.learn_iters, c0).unwrap();
        let single = unlearn_epsilon(&e0, &pc, &ns, Regime::StronglyConvex, c0, 40).unwrap();
        for alpha in [1.5, 3.0, 40.0] {
            let seq =
                sequential_epsilon(alpha, &ns, 5, 1, &[40], &pc, Regime::StronglyConvex).unwrap();
            assert_eq!(seq, single.eval(alpha));
            let want = (-ns.step * pc.strong_convexity * 40.0 / alpha).exp() * e0.eval(alpha);
            assert!((seq / want - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn second_request_without_steps_is_pure_triangle() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.03);
        let alpha = 3.0;
        let first =
            sequential_epsilon(2.0 * alpha, &ns, 5, 1, &[7, 0], &pc, Regime::StronglyConvex)
                .unwrap();
        let c0 = default_init_lsi(&pc, &ns, Regime::StronglyConvex);
        let e0 = learn_epsilon0(&pc, &ns, Regime::StronglyConvex, 5, ns.learn_iters, c0).unwrap();
        let got =
            sequential_epsilon(alpha, &ns, 5, 2, &[7, 0], &pc, Regime::StronglyConvex).unwrap();
        let want = weak_triangle(alpha, e0.eval(2.0 * alpha), first);
        assert!((got / want - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_batch_schedule_is_find_min_k() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.03);
        let delta = 1.0 / 11982.0;
        let ks = sequential_k_schedule(
            1.0,
            delta,
            &ns,
            20,
            20,
            &pc,
            Regime::StronglyConvex,
            DEFAULT_K_MAX,
        )
        .unwrap();
        let k = find_min_k(
            1.0,
            delta,
            &pc,
            &ns,
            Regime::StronglyConvex,
            20,
            DEFAULT_K_MAX,
        )
        .unwrap();
        assert_eq!(ks, vec![k]);
    }

    #[test]
    fn uneven_final_batch_uses_its_size() {
        let pc = mnist();
        let ns = NoiseSchedule::inverse_smoothness(&pc, 0.03);
        let delta = 1.0 / 11982.0;
        let uneven = sequential_k_schedule(
            1.0,
            delta,
            &ns,
            12,
            5,
            &pc,
            Regime::StronglyConvex,
            DEFAULT_K_MAX,
        )
        .unwrap();
        let even = sequential_k_schedule(
            1.0,
            delta,
            &ns,
            15,
            5,
            &pc,
            Regime::StronglyConvex,
            DEFAULT_K_MAX,
        )
        .unwrap();
        assert_eq!(uneven.len(), 3);
        assert_eq!(uneven[..2], even[..2]);
        assert!(uneven[2] <= even[2]);
    }
}
