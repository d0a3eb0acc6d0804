//! Delete-to-Descent baseline: noiseless projected gradient descent for
//! learning, then a few gradient steps on the updated data followed by a
//! Gaussian perturbation for each deletion request.
//!
//! Both noise calibrations are stated for add/remove adjacency and are
//! evaluated as written.

use rand::Rng;

use crate::error::{Error, Result};
use crate::models::{Dataset, Objective};
use crate::pngd::{project_ball, ModelParams};
use crate::privacy::ProblemConstants;
use crate::rng::fill_standard_normal;

/// Adjacency convention the calibrations were derived under.
pub const ADJACENCY: &str = "add/remove";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2DConfig {
    /// Contraction factor `(L − m)/(L + m)`.
    pub gamma: f64,
    /// Step size `2/(L + m)`.
    pub step: f64,
    /// Gradient steps per request.
    pub iters: u64,
    /// Keep the noiseless iterate between requests.
    pub internal_state: bool,
}

impl D2DConfig {
    pub fn new(
        smoothness: f64,
        strong_convexity: f64,
        iters: u64,
        internal_state: bool,
    ) -> Result<Self> {
        Ok(Self {
            gamma: contraction(smoothness, strong_convexity)?,
            step: 2.0 / (smoothness + strong_convexity),
            iters,
            internal_state,
        })
    }

    pub fn for_constants(pc: &ProblemConstants, iters: u64, internal_state: bool) -> Result<Self> {
        Self::new(pc.smoothness, pc.strong_convexity, iters, internal_state)
    }
}

fn contraction(l: f64, m: f64) -> Result<f64> {
    if !(m > 0.0 && l >= m && l.is_finite()) {
        return Err(Error::invalid("D2D needs 0 < m ≤ L"));
    }
    let g = (l - m) / (l + m);
    if g <= 0.0 {
        return Err(Error::invalid("D2D needs L > m so that 0 < γ < 1"));
    }
    Ok(g)
}

fn check_privacy(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    Ok(())
}

/// `√(a + x) − √(a + y)` for `x > y`, without cancellation.
fn sqrt_gap(a: f64, x: f64, y: f64) -> f64 {
    (x - y) / ((a + x).sqrt() + (a + y).sqrt())
}

/// `γ^I / (1 − γ^I)`.
fn geometric_ratio(gamma: f64, iters: f64) -> f64 {
    let log_pow = iters * gamma.ln();
    log_pow.exp() / -log_pow.exp_m1()
}

/// Noise for the variant that keeps the noiseless iterate:
/// `σ = 4√2·M·γ^I / (m n (1 − γ^I)(√(log(1/δ) + ε) − √log(1/δ)))`.
#[allow(clippy::too_many_arguments)]
pub fn d2d_sigma_thm9(
    eps: f64,
    delta: f64,
    iters: u64,
    clip: f64,
    m: f64,
    n: usize,
    l: f64,
) -> Result<f64> {
    check_privacy(eps, delta)?;
    if iters == 0 {
        return Err(Error::invalid(
            "D2D needs at least one gradient step per request",
        ));
    }
    let gamma = contraction(l, m)?;
    let ld = -delta.ln();
    let gap = sqrt_gap(ld, eps, 0.0);
    Ok(
        4.0 * std::f64::consts::SQRT_2 * clip * geometric_ratio(gamma, iters as f64)
            / (m * n as f64 * gap),
    )
}

/// Calibration for the variant that publishes only noisy iterates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm28Calibration {
    pub sigma: f64,
    /// Real-valued lower bound on the initial gradient steps.
    pub i_min: f64,
    /// `max(⌈i_min⌉, 1)`.
    pub iters: u64,
    gamma: f64,
    dim: usize,
    delta: f64,
}

impl Thm28Calibration {
    /// Additional steps for request `i ≥ 1`: `log(log(4di/δ))/log(1/γ)`.
    pub fn extra_iterations(&self, request: u64) -> f64 {
        let inner = (4.0 * self.dim as f64 * request as f64 / self.delta).ln();
        inner.ln() / -self.gamma.ln()
    }

    /// Gradient steps run for request `i ≥ 1`, rounded up.
    pub fn request_iterations(&self, request: u64) -> u64 {
        (self.iters as f64 + self.extra_iterations(request)).ceil() as u64
    }

    /// Running totals of gradient steps over requests `1..=requests`.
    pub fn cumulative_iterations(&self, requests: u64) -> Vec<u64> {
        (1..=requests)
            .scan(0u64, |acc, i| {
                *acc += self.request_iterations(i);
                Some(*acc)
            })
            .collect()
    }
}

/// Noise and iteration counts for the variant without internal state:
/// `I ≥ log(√(2d)(1−γ)⁻¹ / (√(2log(2/δ)+ε) − √(2log(2/δ)))) / log(1/γ)` and
/// `σ = 8Mγ^I / (mn(1−γ^I)(√(2log(2/δ)+3ε) − √(2log(2/δ)+2ε)))`.
#[allow(clippy::too_many_arguments)]
pub fn d2d_sigma_thm28(
    eps: f64,
    delta: f64,
    clip: f64,
    m: f64,
    n: usize,
    l: f64,
    dim: usize,
) -> Result<Thm28Calibration> {
    check_privacy(eps, delta)?;
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let gamma = contraction(l, m)?;
    let a = 2.0 * (2.0 / delta).ln();
    let arg = (2.0 * dim as f64).sqrt() / (1.0 - gamma) / sqrt_gap(a, eps, 0.0);
    if !(arg.is_finite() && arg > 0.0) {
        return Err(Error::InfeasibleBudget(format!(
            "iteration bound argument {arg} is not a positive finite number"
        )));
    }
    let i_min = arg.ln() / -gamma.ln();
    let iters = i_min.ceil().max(1.0);
    let sigma = 8.0 * clip * geometric_ratio(gamma, iters)
        / (m * n as f64 * sqrt_gap(a, 3.0 * eps, 2.0 * eps));
    Ok(Thm28Calibration {
        sigma,
        i_min,
        iters: iters as u64,
        gamma,
        dim,
        delta,
    })
}

fn gradient_descent(
    params: &mut ModelParams,
    data: &Dataset,
    objective: &dyn Objective,
    steps: u64,
    step: f64,
    radius: f64,
) {
    let mut grad = vec![0.0; params.weights.len()];
    for _ in 0..steps {
        objective.gradient(data, &params.weights, &mut grad);
        for (x, g) in params.weights.iter_mut().zip(&grad) {
            *x -= step * g;
        }
        project_ball(&mut params.weights, radius);
    }
}

/// Noiseless projected gradient descent for `t` steps from `init`.
pub fn d2d_train(
    data: &Dataset,
    objective: &dyn Objective,
    cfg: &D2DConfig,
    t: u64,
    radius: f64,
    init: &ModelParams,
) -> Result<ModelParams> {
    objective.check(data)?;
    if init.weights.len() != objective.param_len() {
        return Err(Error::DimensionMismatch {
            expected: objective.param_len(),
            got: init.weights.len(),
        });
    }
    let mut p = init.clone();
    gradient_descent(&mut p, data, objective, t, cfg.step, radius);
    Ok(p)
}

/// Parameters carried between requests. Without internal state only the
/// published (noisy) iterate exists.
#[derive(Debug, Clone, PartialEq)]
pub struct D2DState {
    published: ModelParams,
    internal: Option<ModelParams>,
}

impl D2DState {
    /// State right after training. The trained iterate is published without
    /// noise; only unlearning outputs carry a guarantee.
    pub fn trained(params: ModelParams, cfg: &D2DConfig) -> Self {
        Self {
            internal: cfg.internal_state.then(|| params.clone()),
            published: params,
        }
    }

    pub fn published(&self) -> &ModelParams {
        &self.published
    }

    pub fn has_internal(&self) -> bool {
        self.internal.is_some()
    }
}

/// One request: `iters` projected gradient steps on `new_data` from the
/// internal iterate (or the published one), then add `N(0, σ²I)`.
#[allow(clippy::too_many_arguments)]
pub fn d2d_unlearn<R: Rng + ?Sized>(
    state: &D2DState,
    new_data: &Dataset,
    objective: &dyn Objective,
    cfg: &D2DConfig,
    iters: u64,
    sigma: f64,
    radius: f64,
    rng: &mut R,
) -> Result<D2DState> {
    objective.check(new_data)?;
    let mut p = match (&state.internal, cfg.internal_state) {
        (Some(internal), true) => internal.clone(),
        _ => state.published.clone(),
    };
    gradient_descent(&mut p, new_data, objective, iters, cfg.step, radius);
    let internal = cfg.internal_state.then(|| p.clone());
    let mut noise = vec![0.0; p.weights.len()];
    fill_standard_normal(rng, &mut noise);
    for (x, z) in p.weights.iter_mut().zip(&noise) {
        *x += sigma * z;
    }
    Ok(D2DState {
        published: p,
        internal,
    })
}
