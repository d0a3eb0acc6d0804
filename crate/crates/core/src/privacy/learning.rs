//! RDP of the learning chain, `ε₀`.

use super::{lsi_cap, LearnIters, NoiseSchedule, ProblemConstants, Regime, RenyiBound};
use crate::error::{Error, Result};

/// LSI constant assumed for the learning initialization: `2σ²/m` in the
/// strongly convex regime, `ησ²` otherwise.
pub fn default_init_lsi(pc: &ProblemConstants, ns: &NoiseSchedule, regime: Regime) -> f64 {
    let var = ns.sigma * ns.sigma;
    match regime {
        Regime::StronglyConvex => 2.0 * var / pc.strong_convexity,
        Regime::Convex | Regime::NonConvex => ns.step * var,
    }
}

/// RDP curve of PNGD learning for group size `group` after `iters` steps from
/// an initialization satisfying `init_lsi`-LSI.
///
/// Strongly convex: `α ↦ 4αS²M²/(mσ²n²)·(1 − exp(−mηT))`.
///
/// Convex / non-convex: `α ↦ (2αηS²M²/(σ²n²))·Σ_t Π_{t'≥t}(1 + ησ²/C_{t',1})⁻¹`,
/// where the LSI constants follow the half-step recursion capped at
/// `lsi_cap(R, M, η, ησ²)`. The sum-product is accumulated backwards as
/// `s ← q_t·(s + 1)`, which needs no long summation.
pub fn learn_epsilon0(
    pc: &ProblemConstants,
    ns: &NoiseSchedule,
    regime: Regime,
    group: u32,
    iters: LearnIters,
    init_lsi: f64,
) -> Result<RenyiBound> {
    if group == 0 {
        return Err(Error::invalid("group size must be at least 1"));
    }
    ns.validate(pc, regime, init_lsi)?;
    if !(init_lsi.is_finite() && init_lsi > 0.0) {
        return Err(Error::invalid("initial LSI constant must be positive"));
    }
    let s = group as f64;
    let n = pc.n as f64;
    let m_clip = pc.lipschitz;
    let var = ns.sigma * ns.sigma;

    if regime == Regime::StronglyConvex {
        let m = pc.strong_convexity;
        let limit = 4.0 * s * s * m_clip * m_clip / (m * var * n * n);
        let slope = match iters {
            LearnIters::Infinite => limit,
            LearnIters::Finite(t) => limit * -(-m * ns.step * t as f64).exp_m1(),
        };
        return Ok(RenyiBound::Linear { slope });
    }

    let noise = ns.step * var;
    let prefactor = 2.0 * ns.step * s * s * m_clip * m_clip / (var * n * n);
    let cap = lsi_cap(pc.radius, pc.lipschitz, ns.step, noise);

    let t = match iters {
        // Once C_{t,1} sits at the cap the recursion s ← q̄(s + 1) has the
        // fixed point q̄/(1 − q̄) = C̄/(ησ²), independent of the transient.
        LearnIters::Infinite => {
            let cap = cap?;
            return Ok(RenyiBound::Linear {
                slope: prefactor * cap / noise,
            });
        }
        LearnIters::Finite(t) => t,
    };
    let cap = match cap {
        Ok(c) => Some(c),
        Err(Error::CapOverflow { .. }) => None,
        Err(e) => return Err(e),
    };
    let clamp = |c: f64| cap.map_or(c, |cap| c.min(cap));
    let lip = match regime {
        Regime::NonConvex => 1.0 + ns.step * pc.smoothness,
        _ => 1.0,
    };
    let mut c = clamp(init_lsi);
    let mut acc = 0.0;
    for step in 0..t {
        let half = clamp(lip * lip * c + noise);
        if !half.is_finite() {
            let reach = pc.radius + ns.step * pc.lipschitz;
            return Err(Error::CapOverflow {
                exponent: 4.0 * reach * reach / noise,
            });
        }
        let ratio = noise / half;
        acc = (acc + 1.0) / (1.0 + ratio);
        c = clamp(half + noise);
        if Some(half) == cap {
            // the remaining steps apply the same affine map; q rounds to 1
            // for large caps, so work with ln q = −ln(1 + ησ²/C̄)
            let rest = (t - step - 1) as f64;
            let log_q_rest = -rest * ratio.ln_1p();
            acc = acc * log_q_rest.exp() - log_q_rest.exp_m1() / ratio;
            break;
        }
    }
    Ok(RenyiBound::Linear {
        slope: prefactor * acc,
    })
}
