use super::dataset::{norm, Dataset};
use crate::error::{Error, Result};
use crate::privacy::ProblemConstants;

/// Regularization used when none is given: `10⁻⁶·n`.
pub fn default_reg(n: usize) -> f64 {
    1e-6 * n as f64
}

/// A full-batch objective `f(w) = (1/n)·Σ l(w; dᵢ) + (λ/2)‖w‖²` together
/// with the constants the accountant needs.
///
/// Parameters are a row-major `rows × cols` matrix flattened into a slice.
pub trait Objective: Send + Sync {
    fn shape(&self) -> (usize, usize);

    fn param_len(&self) -> usize {
        let (r, c) = self.shape();
        r * c
    }

    /// Gradient oracle of the update: the mean of the per-sample data
    /// gradients, each clipped to the clip norm, plus the regularizer.
    fn gradient(&self, data: &Dataset, w: &[f64], out: &mut [f64]);

    /// Mean unclipped loss including the regularizer.
    fn loss(&self, data: &Dataset, w: &[f64]) -> f64;

    /// Predicted class index of one feature row.
    fn predict(&self, x: &[f64], w: &[f64]) -> u32;

    /// Constants of this objective on `n` samples inside a ball of `radius`.
    fn constants(&self, n: usize, radius: f64) -> Result<ProblemConstants>;

    /// Check `data` is usable with this objective.
    fn check(&self, data: &Dataset) -> Result<()>;
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_unit_rows(data: &Dataset, dim: usize, allow_unnormalized: bool) -> Result<()> {
    if data.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: data.dim(),
        });
    }
    if !allow_unnormalized && !data.is_normalized() {
        return Err(Error::invalid(
            "features must be unit norm for the clip constant to hold",
        ));
    }
    Ok(())
}

/// ℓ2-regularized binary logistic regression with labels `y ∈ {−1, +1}`:
/// `l(w; x, y) = log(1 + exp(−y wᵀx))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticObjective {
    pub dim: usize,
    pub reg: f64,
    pub clip: f64,
    pub allow_unnormalized: bool,
}

impl LogisticObjective {
    pub fn new(dim: usize, reg: f64) -> Self {
        Self {
            dim,
            reg,
            clip: 1.0,
            allow_unnormalized: false,
        }
    }

    /// Objective for `data` with `λ = 10⁻⁶·n`; rejects unnormalized or
    /// non-binary data.
    pub fn for_data(data: &Dataset) -> Result<Self> {
        let obj = Self::new(data.dim(), default_reg(data.len()));
        obj.check(data)?;
        Ok(obj)
    }

    /// Unclipped data-term gradient `(σ(y wᵀx) − 1)·y·x`.
    pub fn sample_gradient(&self, x: &[f64], y: f64, w: &[f64], out: &mut [f64]) {
        let coef = (sigmoid(y * dot(w, x)) - 1.0) * y;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = coef * xi;
        }
    }

    pub fn sample_loss(&self, x: &[f64], y: f64, w: &[f64]) -> f64 {
        softplus(-y * dot(w, x))
    }
}

impl Objective for LogisticObjective {
    fn shape(&self) -> (usize, usize) {
        (self.dim, 1)
    }

    fn gradient(&self, data: &Dataset, w: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for i in 0..data.len() {
            let x = data.row(i);
            let y = data.sign(i);
            let coef = (sigmoid(y * dot(w, x)) - 1.0) * y;
            let size = coef.abs() * norm(x);
            let scaled = if size > self.clip {
                coef * self.clip / size
            } else {
                coef
            };
            for (o, xi) in out.iter_mut().zip(x) {
                *o += scaled * xi;
            }
        }
        let inv_n = 1.0 / data.len() as f64;
        for (o, wi) in out.iter_mut().zip(w) {
            *o = *o * inv_n + self.reg * wi;
        }
    }

    fn loss(&self, data: &Dataset, w: &[f64]) -> f64 {
        let data_loss: f64 = (0..data.len())
            .map(|i| self.sample_loss(data.row(i), data.sign(i), w))
            .sum();
        data_loss / data.len() as f64 + 0.5 * self.reg * dot(w, w)
    }

    fn predict(&self, x: &[f64], w: &[f64]) -> u32 {
        // ties go to the positive class
        u32::from(dot(w, x) >= 0.0)
    }

    fn constants(&self, n: usize, radius: f64) -> Result<ProblemConstants> {
        let mut pc = ProblemConstants::binary_logistic(n, self.dim, self.reg, radius)?;
        pc.lipschitz = self.clip;
        Ok(pc)
    }

    fn check(&self, data: &Dataset) -> Result<()> {
        if data.classes() != 2 {
            return Err(Error::invalid(format!(
                "binary objective needs two classes, data has {}",
                data.classes()
            )));
        }
        check_unit_rows(data, self.dim, self.allow_unnormalized)
    }
}

/// ℓ2-regularized softmax cross-entropy over `c` classes. Parameters form a
/// `d × c` matrix `W`; logits are `Wᵀx`.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassObjective {
    pub dim: usize,
    pub classes: usize,
    pub reg: f64,
    pub clip: f64,
    pub allow_unnormalized: bool,
}

impl MulticlassObjective {
    pub fn new(dim: usize, classes: usize, reg: f64) -> Self {
        Self {
            dim,
            classes,
            reg,
            clip: 2.0,
            allow_unnormalized: false,
        }
    }

    pub fn for_data(data: &Dataset) -> Result<Self> {
        let obj = Self::new(data.dim(), data.classes() as usize, default_reg(data.len()));
        obj.check(data)?;
        Ok(obj)
    }

    fn logits(&self, x: &[f64], w: &[f64], z: &mut [f64]) {
        z.fill(0.0);
        for (xj, wrow) in x.iter().zip(w.chunks(self.classes)) {
            for (zk, wjk) in z.iter_mut().zip(wrow) {
                *zk += xj * wjk;
            }
        }
    }

    /// Softmax probabilities into `p`; returns `logsumexp(z)`.
    fn softmax(&self, x: &[f64], w: &[f64], p: &mut [f64]) -> f64 {
        self.logits(x, w, p);
        let max = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for v in p.iter_mut() {
            *v = (*v - max).exp();
            total += *v;
        }
        p.iter_mut().for_each(|v| *v /= total);
        max + total.ln()
    }

    /// Unclipped data-term gradient `x ⊗ (softmax(Wᵀx) − e_label)`.
    pub fn sample_gradient(&self, x: &[f64], label: u32, w: &[f64], out: &mut [f64]) {
        let mut p = vec![0.0; self.classes];
        self.softmax(x, w, &mut p);
        p[label as usize] -= 1.0;
        for (xj, orow) in x.iter().zip(out.chunks_mut(self.classes)) {
            for (o, pk) in orow.iter_mut().zip(&p) {
                *o = xj * pk;
            }
        }
    }

    pub fn sample_loss(&self, x: &[f64], label: u32, w: &[f64]) -> f64 {
        let mut z = vec![0.0; self.classes];
        self.logits(x, w, &mut z);
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        lse - z[label as usize]
    }
}

impl Objective for MulticlassObjective {
    fn shape(&self) -> (usize, usize) {
        (self.dim, self.classes)
    }

    fn gradient(&self, data: &Dataset, w: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        let mut p = vec![0.0; self.classes];
        for i in 0..data.len() {
            let x = data.row(i);
            self.softmax(x, w, &mut p);
            p[data.label(i) as usize] -= 1.0;
            // ‖x ⊗ p‖_F = ‖x‖·‖p‖
            let size = norm(x) * norm(&p);
            let scale = if size > self.clip {
                self.clip / size
            } else {
                1.0
            };
            for (xj, orow) in x.iter().zip(out.chunks_mut(self.classes)) {
                let s = scale * xj;
                for (o, pk) in orow.iter_mut().zip(&p) {
                    *o += s * pk;
                }
            }
        }
        let inv_n = 1.0 / data.len() as f64;
        for (o, wi) in out.iter_mut().zip(w) {
            *o = *o * inv_n + self.reg * wi;
        }
    }

    fn loss(&self, data: &Dataset, w: &[f64]) -> f64 {
        let data_loss: f64 = (0..data.len())
            .map(|i| self.sample_loss(data.row(i), data.label(i), w))
            .sum();
        data_loss / data.len() as f64 + 0.5 * self.reg * dot(w, w)
    }

    fn predict(&self, x: &[f64], w: &[f64]) -> u32 {
        let mut z = vec![0.0; self.classes];
        self.logits(x, w, &mut z);
        // first maximal logit wins ties
        let mut best = 0;
        for (k, v) in z.iter().enumerate() {
            if *v > z[best] {
                best = k;
            }
        }
        best as u32
    }

    fn constants(&self, n: usize, radius: f64) -> Result<ProblemConstants> {
        let mut pc = ProblemConstants::multiclass_logistic(n, self.dim, self.reg, radius)?;
        pc.lipschitz = self.clip;
        Ok(pc)
    }

    fn check(&self, data: &Dataset) -> Result<()> {
        if data.classes() as usize != self.classes {
            return Err(Error::DimensionMismatch {
                expected: self.classes,
                got: data.classes() as usize,
            });
        }
        check_unit_rows(data, self.dim, self.allow_unnormalized)
    }
}

/// `f(x) = (m/2)‖x − center‖²`, independent of the data. Exact-answer
/// oracle for the optimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    pub center: Vec<f64>,
    pub curvature: f64,
}

impl QuadraticObjective {
    pub fn new(center: Vec<f64>, curvature: f64) -> Result<Self> {
        if !(curvature > 0.0 && curvature.is_finite()) {
            return Err(Error::invalid("curvature must be positive"));
        }
        Ok(Self { center, curvature })
    }
}

impl Objective for QuadraticObjective {
    fn shape(&self) -> (usize, usize) {
        (self.center.len(), 1)
    }

    fn gradient(&self, _data: &Dataset, w: &[f64], out: &mut [f64]) {
        for ((o, wi), ci) in out.iter_mut().zip(w).zip(&self.center) {
            *o = self.curvature * (wi - ci);
        }
    }

    fn loss(&self, _data: &Dataset, w: &[f64]) -> f64 {
        let sq: f64 = w
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        0.5 * self.curvature * sq
    }

    fn predict(&self, x: &[f64], w: &[f64]) -> u32 {
        u32::from(dot(w, x) >= 0.0)
    }

    /// `L = m = curvature`; the gradient bound on the ball is
    /// `m·(R + ‖center‖)`.
    fn constants(&self, n: usize, radius: f64) -> Result<ProblemConstants> {
        let m = self.curvature;
        ProblemConstants::new(
            m,
            m,
            m * (radius + norm(&self.center)),
            radius,
            n,
            self.center.len(),
            0.0,
        )
    }

    fn check(&self, _data: &Dataset) -> Result<()> {
        Ok(())
    }
}
