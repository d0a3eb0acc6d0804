//! Langevin unlearning: certified approximate unlearning by fine-tuning with
//! projected noisy gradient descent.
//!
//! * [`privacy`]: the Rényi accountant (learning and unlearning bounds,
//!   sequential composition, `(ε, δ)` conversion, calibration searches).
//! * [`pngd`]: the noisy gradient engine used for learning and unlearning.
//! * [`models`]: logistic objectives, datasets and unlearning requests.
//! * [`d2d`]: the Delete-to-Descent baseline.
//! * [`harness`]: experiment orchestration and result emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod d2d;
pub mod error;
pub mod harness;
pub mod models;
pub mod pngd;
pub mod privacy;
pub mod rng;

pub use error::{Error, Result};
