//! Projected noisy gradient descent:
//! `x ← Π_{C_R}(x − η∇f(x) + √(2ησ²)·W)` with `W` standard Gaussian.
//!
//! The same chain trains from an initialization and, restarted from the
//! trained parameters on an updated dataset, performs unlearning.

use rand::Rng;

use crate::error::{Error, Result};
use crate::models::{Dataset, Objective};
use crate::privacy::{LearnIters, NoiseSchedule};
use crate::rng::fill_standard_normal;

/// Default projection radius. Large enough to stay inactive for logistic
/// regression on unit-norm features.
pub const DEFAULT_RADIUS: f64 = 100.0;
/// Default mean of every coordinate of the Gaussian initialization.
pub const DEFAULT_INIT_MEAN: f64 = 1000.0;

/// Row-major `rows × cols` parameter matrix; `cols == 1` for vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub weights: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl ModelParams {
    pub fn zeros((rows, cols): (usize, usize)) -> Self {
        Self {
            weights: vec![0.0; rows * cols],
            rows,
            cols,
        }
    }

    pub fn from_vec(weights: Vec<f64>) -> Self {
        let rows = weights.len();
        Self {
            weights,
            rows,
            cols: 1,
        }
    }

    /// Euclidean (Frobenius) norm.
    pub fn norm(&self) -> f64 {
        l2(&self.weights)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Scale `v` onto the ball of `radius` when it lies outside.
pub fn project_ball(v: &mut [f64], radius: f64) {
    debug_assert!(radius > 0.0);
    let n = l2(v);
    if n > radius {
        let s = radius / n;
        v.iter_mut().for_each(|x| *x *= s);
    }
}

/// Scale `g` down to norm `clip` when it is longer.
pub fn clip_to_norm(g: &mut [f64], clip: f64) {
    project_ball(g, clip)
}

/// One update in place. Draws exactly `params.weights.len()` Gaussians from
/// `rng`, even when `sigma == 0`, so noise streams stay aligned.
#[allow(clippy::too_many_arguments)]
pub fn pngd_step<R: Rng + ?Sized>(
    params: &mut ModelParams,
    data: &Dataset,
    objective: &dyn Objective,
    step: f64,
    sigma: f64,
    radius: f64,
    rng: &mut R,
    scratch: &mut Scratch,
) {
    let w = &mut params.weights;
    objective.gradient(data, w, &mut scratch.grad);
    fill_standard_normal(rng, &mut scratch.noise);
    let scale = (2.0 * step * sigma * sigma).sqrt();
    for ((x, g), z) in w.iter_mut().zip(&scratch.grad).zip(&scratch.noise) {
        *x += -step * g + scale * z;
    }
    project_ball(w, radius);
}

/// Reusable buffers for [`pngd_step`].
#[derive(Debug, Clone)]
pub struct Scratch {
    grad: Vec<f64>,
    noise: Vec<f64>,
}

impl Scratch {
    pub fn new(len: usize) -> Self {
        Self {
            grad: vec![0.0; len],
            noise: vec![0.0; len],
        }
    }
}

/// `steps` consecutive updates.
#[allow(clippy::too_many_arguments)]
pub fn run_chain<R: Rng + ?Sized>(
    params: &mut ModelParams,
    data: &Dataset,
    objective: &dyn Objective,
    steps: u64,
    step: f64,
    sigma: f64,
    radius: f64,
    rng: &mut R,
) {
    let mut scratch = Scratch::new(params.weights.len());
    for _ in 0..steps {
        pngd_step(
            params,
            data,
            objective,
            step,
            sigma,
            radius,
            rng,
            &mut scratch,
        );
    }
}

/// Gaussian initialization `N(mean·1, variance·I)`, projected onto the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSpec {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Params(ModelParams),
    Gaussian(InitSpec),
}

impl InitSpec {
    pub fn sample<R: Rng + ?Sized>(
        &self,
        shape: (usize, usize),
        radius: f64,
        rng: &mut R,
    ) -> ModelParams {
        let mut p = ModelParams::zeros(shape);
        fill_standard_normal(rng, &mut p.weights);
        let sd = self.variance.sqrt();
        p.weights.iter_mut().for_each(|x| *x = self.mean + sd * *x);
        project_ball(&mut p.weights, radius);
        p
    }
}

fn check_shape(p: &ModelParams, objective: &dyn Objective) -> Result<()> {
    if p.weights.len() != objective.param_len() {
        return Err(Error::DimensionMismatch {
            expected: objective.param_len(),
            got: p.weights.len(),
        });
    }
    Ok(())
}

/// Run `ns.learn_iters` updates on `data` from `init`. The initialization
/// draw and the chain share `rng`.
pub fn train<R: Rng + ?Sized>(
    data: &Dataset,
    objective: &dyn Objective,
    ns: &NoiseSchedule,
    radius: f64,
    init: &Init,
    rng: &mut R,
) -> Result<ModelParams> {
    let LearnIters::Finite(t) = ns.learn_iters else {
        return Err(Error::invalid("training needs a finite iteration count"));
    };
    objective.check(data)?;
    let mut params = match init {
        Init::Params(p) => p.clone(),
        Init::Gaussian(spec) => spec.sample(objective.shape(), radius, rng),
    };
    check_shape(&params, objective)?;
    run_chain(
        &mut params,
        data,
        objective,
        t,
        ns.step,
        ns.sigma,
        radius,
        rng,
    );
    Ok(params)
}

/// Fine-tune `params` for `k` updates on the post-request dataset.
#[allow(clippy::too_many_arguments)]
pub fn unlearn<R: Rng + ?Sized>(
    params: &ModelParams,
    new_data: &Dataset,
    objective: &dyn Objective,
    k: u64,
    ns: &NoiseSchedule,
    radius: f64,
    rng: &mut R,
) -> Result<ModelParams> {
    objective.check(new_data)?;
    check_shape(params, objective)?;
    let mut out = params.clone();
    run_chain(
        &mut out, new_data, objective, k, ns.step, ns.sigma, radius, rng,
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::QuadraticObjective;
    use crate::rng::RngState;

    fn dummy() -> Dataset {
        Dataset::new(vec![1.0, 0.0], vec![0], 2, 2, true).unwrap()
    }

    #[test]
    fn projection_examples() {
        let mut v = [3.0, 4.0];
        project_ball(&mut v, 10.0);
        assert_eq!(v, [3.0, 4.0]);
        project_ball(&mut v, 5.0);
        assert_eq!(v, [3.0, 4.0]);
        project_ball(&mut v, 1.0);
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
        let mut z = [0.0, 0.0];
        clip_to_norm(&mut z, 1.0);
        assert_eq!(z, [0.0, 0.0]);
        let mut g = [0.0, 4.0];
        clip_to_norm(&mut g, 2.0);
        assert_eq!(g, [0.0, 2.0]);
    }

    #[test]
    fn noiseless_quadratic_halves_each_step() {
        let obj = QuadraticObjective::new(vec![0.0, 0.0], 1.0).unwrap();
        let mut p = ModelParams::from_vec(vec![1.0, 0.0]);
        let mut rng = RngState::new(1).rng();
        run_chain(&mut p, &dummy(), &obj, 1, 0.5, 0.0, 10.0, &mut rng);
        assert_eq!(p.weights, vec![0.5, 0.0]);
        run_chain(&mut p, &dummy(), &obj, 9, 0.5, 0.0, 10.0, &mut rng);
        assert_eq!(p.weights, vec![0.5f64.powi(10), 0.0]);
    }

    #[test]
    fn zero_step_keeps_params() {
        let obj = QuadraticObjective::new(vec![0.3, -0.2], 1.0).unwrap();
        let mut p = ModelParams::from_vec(vec![1.0, 2.0]);
        let mut rng = RngState::new(1).rng();
        run_chain(&mut p, &dummy(), &obj, 5, 0.0, 0.0, 10.0, &mut rng);
        assert_eq!(p.weights, vec![1.0, 2.0]);
    }

    #[test]
    fn zero_iterations_return_init() {
        let obj = QuadraticObjective::new(vec![0.0, 0.0], 1.0).unwrap();
        let ns = NoiseSchedule::new(0.5, 1.0, LearnIters::Finite(0), 0);
        let init = ModelParams::from_vec(vec![7.0, 1.0]);
        let mut rng = RngState::new(1).rng();
        let out = train(
            &dummy(),
            &obj,
            &ns,
            100.0,
            &Init::Params(init.clone()),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out, init);
        assert_eq!(
            unlearn(&init, &dummy(), &obj, 0, &ns, 100.0, &mut rng).unwrap(),
            init
        );
    }

    #[test]
    fn infinite_training_is_rejected() {
        let obj = QuadraticObjective::new(vec![0.0], 1.0).unwrap();
        let ns = NoiseSchedule::new(0.5, 1.0, LearnIters::Infinite, 0);
        let init = Init::Params(ModelParams::from_vec(vec![0.0]));
        let data = Dataset::new(vec![1.0], vec![0], 1, 2, true).unwrap();
        assert!(train(&data, &obj, &ns, 1.0, &init, &mut RngState::new(0).rng()).is_err());
    }

    #[test]
    fn gaussian_init_is_projected() {
        let spec = InitSpec {
            mean: DEFAULT_INIT_MEAN,
            variance: 1.0,
        };
        let p = spec.sample((5, 1), DEFAULT_RADIUS, &mut RngState::new(3).rng());
        assert!((p.norm() - DEFAULT_RADIUS).abs() < 1e-9);
    }
}
