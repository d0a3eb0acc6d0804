//! Rényi-DP / Rényi-unlearning accountant for projected noisy gradient descent.
//!
//! Everything in this module is a pure function of its arguments. The
//! currency is [`RenyiBound`], a closed-form privacy-loss curve `α ↦ ε(α)`
//! that can be evaluated at any order `α > 1`. Learning produces a linear
//! curve `ε₀(α)`; each round of unlearning wraps it in an exponential decay
//! factor; sequential requests chain curves through the weak triangle
//! inequality at doubled order.

mod bounds;
mod conversion;
mod learning;
mod lsi;
mod search;
mod sequential;

pub use bounds::{
    adjacency_bound_unbiased, retrain_saving_lower_bound, weak_triangle, SavingBound,
};
pub use conversion::{rdp_to_dp, DpConversion, ALPHA_GRID_POINTS, ALPHA_MAX, ALPHA_MIN_OFFSET};
pub use learning::{default_init_lsi, learn_epsilon0};
pub use lsi::{decay_sum, lsi_cap, lsi_unlearn_trace, unlearn_epsilon, unlearn_rate, LsiTrace};
pub use search::{binary_search_sigma, find_min_k, SigmaSearch, DEFAULT_K_MAX};
pub use sequential::{sequential_bound, sequential_epsilon, sequential_k_schedule, split_batches};

use crate::error::{Error, Result};

/// Constants of the objective consumed by every accountant formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConstants {
    /// Gradient-Lipschitz constant `L`.
    pub smoothness: f64,
    /// Strong convexity `m`; zero for merely convex objectives.
    pub strong_convexity: f64,
    /// Per-sample gradient clip norm `M`.
    pub lipschitz: f64,
    /// Projection ball radius `R`.
    pub radius: f64,
    /// Dataset size.
    pub n: usize,
    pub dim: usize,
    /// ℓ2 regularization strength `λ`.
    pub reg: f64,
}

impl ProblemConstants {
    pub fn new(
        smoothness: f64,
        strong_convexity: f64,
        lipschitz: f64,
        radius: f64,
        n: usize,
        dim: usize,
        reg: f64,
    ) -> Result<Self> {
        let pc = Self {
            smoothness,
            strong_convexity,
            lipschitz,
            radius,
            n,
            dim,
            reg,
        };
        pc.validate()?;
        Ok(pc)
    }

    /// Binary ℓ2-regularized logistic regression on unit-norm features:
    /// `L = 1/4 + λ`, `m = λ`, `M = 1`.
    pub fn binary_logistic(n: usize, dim: usize, reg: f64, radius: f64) -> Result<Self> {
        Self::new(0.25 + reg, reg, 1.0, radius, n, dim, reg)
    }

    /// Multiclass softmax regression on unit-norm features:
    /// `L = 1 + λ`, `m = λ`, `M = 2`.
    pub fn multiclass_logistic(n: usize, dim: usize, reg: f64, radius: f64) -> Result<Self> {
        Self::new(1.0 + reg, reg, 2.0, radius, n, dim, reg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.smoothness) {
            return Err(Error::invalid("smoothness L must be positive"));
        }
        if !(self.strong_convexity.is_finite() && self.strong_convexity >= 0.0) {
            return Err(Error::invalid("strong convexity m must be non-negative"));
        }
        if self.strong_convexity > self.smoothness {
            return Err(Error::invalid(
                "strong convexity m must not exceed smoothness L",
            ));
        }
        if !positive(self.lipschitz) {
            return Err(Error::invalid("clip norm M must be positive"));
        }
        if !positive(self.radius) {
            return Err(Error::invalid("radius R must be positive"));
        }
        if self.n == 0 || self.dim == 0 {
            return Err(Error::invalid("n and d must be at least 1"));
        }
        if !(self.reg.is_finite() && self.reg >= 0.0) {
            return Err(Error::invalid("regularization must be non-negative"));
        }
        Ok(())
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

/// Which case of the unlearning analysis applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    StronglyConvex,
    Convex,
    NonConvex,
}

impl Regime {
    pub fn check(self, pc: &ProblemConstants) -> Result<()> {
        match self {
            Regime::StronglyConvex if pc.strong_convexity <= 0.0 => {
                Err(Error::invalid("strongly convex regime requires m > 0"))
            }
            Regime::Convex if pc.strong_convexity != 0.0 => {
                Err(Error::invalid("convex regime requires m = 0"))
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "stronglyconvex" | "sc" => Ok(Regime::StronglyConvex),
            "convex" => Ok(Regime::Convex),
            "nonconvex" => Ok(Regime::NonConvex),
            other => Err(Error::invalid(format!("unknown regime `{other}`"))),
        }
    }
}

/// Number of learning iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnIters {
    Finite(u64),
    /// Train until the chain has reached its stationary law.
    Infinite,
}

/// Optimizer and accountant hyperparameters `(η, σ, T, K)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSchedule {
    pub step: f64,
    pub sigma: f64,
    pub learn_iters: LearnIters,
    pub unlearn_iters: u64,
}

impl NoiseSchedule {
    pub fn new(step: f64, sigma: f64, learn_iters: LearnIters, unlearn_iters: u64) -> Self {
        Self {
            step,
            sigma,
            learn_iters,
            unlearn_iters,
        }
    }

    /// `η = 1/L`, the step used throughout the logistic experiments.
    pub fn inverse_smoothness(pc: &ProblemConstants, sigma: f64) -> Self {
        Self::new(1.0 / pc.smoothness, sigma, LearnIters::Infinite, 0)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_unlearn_iters(mut self, k: u64) -> Self {
        self.unlearn_iters = k;
        self
    }

    /// Check the step-size condition of `regime`. `init_lsi` is the LSI
    /// constant `C_LSI` of the starting law; it only matters for the strongly
    /// convex case, where `σ²/m < C_LSI` and
    /// `η ≤ min(2/m·(1 − σ²/(m·C_LSI)), 1/L)` are required.
    pub fn validate(&self, pc: &ProblemConstants, regime: Regime, init_lsi: f64) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::invalid("step size must be positive"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("noise sigma must be positive"));
        }
        regime.check(pc)?;
        // relative slack so that η = 1/L passes after rounding
        let le = |a: f64, b: f64| a <= b * (1.0 + 1e-12);
        match regime {
            Regime::StronglyConvex => {
                let m = pc.strong_convexity;
                let floor = self.sigma * self.sigma / m;
                if !(init_lsi > floor) {
                    return Err(Error::invalid(format!(
                        "strongly convex regime needs C_LSI > σ²/m = {floor:e}, got {init_lsi:e}"
                    )));
                }
                let limit = (2.0 / m * (1.0 - floor / init_lsi)).min(1.0 / pc.smoothness);
                if !le(self.step, limit) {
                    return Err(Error::invalid(format!(
                        "step {} exceeds strongly convex limit {limit}",
                        self.step
                    )));
                }
            }
            Regime::Convex => {
                if !le(self.step, 2.0 / pc.smoothness) {
                    return Err(Error::invalid("convex regime requires η ≤ 2/L"));
                }
            }
            Regime::NonConvex => {}
        }
        Ok(())
    }
}

/// A privacy-loss curve `α ↦ ε(α)` over `α > 1`, kept in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum RenyiBound {
    /// `α ↦ slope·α`; every learning bound has this shape.
    Linear { slope: f64 },
    /// `α ↦ exp(−rate_sum/α)·inner(α)`, the effect of unlearning steps whose
    /// rates sum to `rate_sum`.
    Decayed {
        rate_sum: f64,
        inner: Box<RenyiBound>,
    },
    /// `α ↦ ((α − ½)/(α − 1))·(first(2α) + second(2α))`.
    WeakTriangle {
        first: Box<RenyiBound>,
        second: Box<RenyiBound>,
    },
}

impl RenyiBound {
    pub fn zero() -> Self {
        RenyiBound::Linear { slope: 0.0 }
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        match self {
            RenyiBound::Linear { slope } => slope * alpha,
            RenyiBound::Decayed { rate_sum, inner } => {
                let base = inner.eval(alpha);
                if base == 0.0 {
                    0.0
                } else {
                    (-rate_sum / alpha).exp() * base
                }
            }
            RenyiBound::WeakTriangle { first, second } => {
                weak_triangle(alpha, first.eval(2.0 * alpha), second.eval(2.0 * alpha))
            }
        }
    }

    pub fn decayed(self, rate_sum: f64) -> Self {
        if rate_sum == 0.0 {
            return self;
        }
        match self {
            RenyiBound::Decayed { rate_sum: r, inner } => RenyiBound::Decayed {
                rate_sum: r + rate_sum,
                inner,
            },
            other => RenyiBound::Decayed {
                rate_sum,
                inner: Box::new(other),
            },
        }
    }

    /// Number of weak-triangle links, i.e. sequential requests minus one.
    pub fn depth(&self) -> usize {
        match self {
            RenyiBound::Linear { .. } => 0,
            RenyiBound::Decayed { inner, .. } => inner.depth(),
            RenyiBound::WeakTriangle { first, second } => 1 + first.depth().max(second.depth()),
        }
    }
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}
