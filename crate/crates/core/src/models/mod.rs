//! Objectives, datasets and unlearning requests.

mod dataset;
mod objective;
mod request;

pub use dataset::{Dataset, NORM_TOL};
pub use objective::{
    default_reg, LogisticObjective, MulticlassObjective, Objective, QuadraticObjective,
};
pub use request::{apply_request, UnlearningRequest};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub accuracy: f64,
}

/// Mean loss and classification accuracy of `w` on `data`.
pub fn evaluate(objective: &dyn Objective, w: &[f64], data: &Dataset) -> Result<Evaluation> {
    if w.len() != objective.param_len() {
        return Err(Error::DimensionMismatch {
            expected: objective.param_len(),
            got: w.len(),
        });
    }
    if data.dim() != objective.shape().0 {
        return Err(Error::DimensionMismatch {
            expected: objective.shape().0,
            got: data.dim(),
        });
    }
    if data.is_empty() {
        return Err(Error::invalid("cannot evaluate on an empty dataset"));
    }
    let correct = (0..data.len())
        .filter(|&i| objective.predict(data.row(i), w) == data.label(i))
        .count();
    Ok(Evaluation {
        loss: objective.loss(data, w),
        accuracy: correct as f64 / data.len() as f64,
    })
}
