//! Log-Sobolev constant tracking along the unlearning chain and the
//! resulting per-step privacy recuperation rates.

use super::{KahanSum, NoiseSchedule, ProblemConstants, Regime, RenyiBound};
use crate::error::{Error, Result};

/// Largest exponent whose `exp` is finite in f64.
const EXP_LIMIT: f64 = 709.782_712_893_384;

/// Uniform LSI bound for any law on the radius-`R` ball convolved with
/// `N(0, ξ I)` after a gradient step of size `η` with clip norm `M`:
/// `6·(4(R+ηM)² + ξ)·exp(4(R+ηM)²/ξ)`.
pub fn lsi_cap(radius: f64, clip: f64, step: f64, xi: f64) -> Result<f64> {
    if !(radius >= 0.0 && clip >= 0.0 && step >= 0.0) {
        return Err(Error::invalid("lsi_cap needs R, M, η ≥ 0"));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::invalid("lsi_cap needs ξ > 0"));
    }
    let reach = radius + step * clip;
    let spread = 4.0 * reach * reach;
    let exponent = spread / xi;
    if exponent > EXP_LIMIT {
        return Err(Error::CapOverflow { exponent });
    }
    let value = 6.0 * (spread + xi) * exponent.exp();
    if !value.is_finite() {
        return Err(Error::CapOverflow { exponent });
    }
    Ok(value)
}

/// LSI constants `C_0, …, C_K` of the unlearning iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct LsiTrace {
    pub constants: Vec<f64>,
    /// `None` when the cap overflows f64; the uncapped recursion is then the
    /// bound in force.
    pub cap: Option<f64>,
}

impl LsiTrace {
    pub fn last(&self) -> f64 {
        *self.constants.last().expect("trace is never empty")
    }
}

fn optional_cap(pc: &ProblemConstants, ns: &NoiseSchedule, xi: f64) -> Result<Option<f64>> {
    match lsi_cap(pc.radius, pc.lipschitz, ns.step, xi) {
        Ok(c) => Ok(Some(c)),
        Err(Error::CapOverflow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_inputs(ns: &NoiseSchedule, c0: f64) -> Result<()> {
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::invalid("initial LSI constant must be positive"));
    }
    if !(ns.step > 0.0 && ns.sigma > 0.0) {
        return Err(Error::invalid("step and sigma must be positive"));
    }
    Ok(())
}

/// One step of the unlearning LSI recursion (uncapped).
fn next_constant(pc: &ProblemConstants, ns: &NoiseSchedule, regime: Regime, c: f64) -> f64 {
    let noise = 2.0 * ns.step * ns.sigma * ns.sigma;
    match regime {
        Regime::StronglyConvex => c,
        Regime::Convex => c + noise,
        Regime::NonConvex => {
            let lip = 1.0 + ns.step * pc.smoothness;
            lip * lip * c + noise
        }
    }
}

pub fn lsi_unlearn_trace(
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    c0: f64,
    k: u64,
) -> Result<LsiTrace> {
    check_inputs(ns, c0)?;
    let cap = optional_cap(pc, ns, 2.0 * ns.step * ns.sigma * ns.sigma)?;
    let mut constants = Vec::with_capacity(k as usize + 1);
    if regime == Regime::StronglyConvex {
        constants.resize(k as usize + 1, c0);
        return Ok(LsiTrace { constants, cap });
    }
    let clamp = |c: f64| cap.map_or(c, |cap| c.min(cap));
    let mut c = clamp(c0);
    constants.push(c);
    for _ in 0..k {
        c = clamp(next_constant(pc, ns, regime, c));
        if !c.is_finite() {
            let xi = 2.0 * ns.step * ns.sigma * ns.sigma;
            let reach = pc.radius + ns.step * pc.lipschitz;
            return Err(Error::CapOverflow {
                exponent: 4.0 * reach * reach / xi,
            });
        }
        constants.push(c);
    }
    Ok(LsiTrace { constants, cap })
}

/// Privacy recuperation rate `R_k` at LSI constant `C_k`.
pub fn unlearn_rate(pc: &ProblemConstants, ns: &NoiseSchedule, regime: Regime, c_k: f64) -> f64 {
    let noise = 2.0 * ns.step * ns.sigma * ns.sigma;
    match regime {
        Regime::StronglyConvex => noise / c_k,
        Regime::Convex => (noise / c_k).ln_1p(),
        Regime::NonConvex => {
            let lip = 1.0 + ns.step * pc.smoothness;
            (noise / (lip * lip * c_k)).ln_1p()
        }
    }
}

/// `Σ_{k<K} R_k` along the LSI trace started at `c0`, without materializing
/// the trace once it reaches its fixed point.
pub fn decay_sum(
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    c0: f64,
    k: u64,
) -> Result<f64> {
    check_inputs(ns, c0)?;
    if k == 0 {
        return Ok(0.0);
    }
    if regime == Regime::StronglyConvex {
        return Ok(k as f64 * unlearn_rate(pc, ns, regime, c0));
    }
    let cap = optional_cap(pc, ns, 2.0 * ns.step * ns.sigma * ns.sigma)?;
    let clamp = |c: f64| cap.map_or(c, |cap| c.min(cap));
    let mut total = KahanSum::default();
    let mut c = clamp(c0);
    for done in 0..k {
        let rate = unlearn_rate(pc, ns, regime, c);
        if Some(c) == cap {
            total.add((k - done) as f64 * rate);
            return Ok(total.value());
        }
        total.add(rate);
        c = clamp(next_constant(pc, ns, regime, c));
        if !c.is_finite() {
            let xi = 2.0 * ns.step * ns.sigma * ns.sigma;
            let reach = pc.radius + ns.step * pc.lipschitz;
            return Err(Error::CapOverflow {
                exponent: 4.0 * reach * reach / xi,
            });
        }
    }
    Ok(total.value())
}

/// Privacy loss after `k` unlearning steps starting from the learning
/// bound `eps0`: `α ↦ exp(−(1/α)·Σ R_k)·ε₀(α)`.
pub fn unlearn_epsilon(
    eps0: &RenyiBound,
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    c0: f64,
    k: u64,
) -> Result<RenyiBound> {
    if k == 0 {
        return Ok(eps0.clone());
    }
    let rate_sum = decay_sum(pc, ns, regime, c0, k)?;
    Ok(eps0.clone().decayed(rate_sum))
}
