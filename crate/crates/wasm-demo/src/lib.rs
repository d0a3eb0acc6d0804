//! Browser bindings for the privacy accountant: noise calibration, the
//! unlearning guarantee as a function of fine-tuning steps, and the step
//! schedule for a stream of removal requests.
//!
//! Each export has a plain Rust counterpart returning `Result<_, String>` so
//! the logic is testable off the browser.

use langevin_unlearning::harness::{
    accountant_constants, calibrate_langevin, certified_epsilon, ExperimentConfig, Preset,
    TABLE_TARGETS,
};
use langevin_unlearning::privacy::{
    sequential_k_schedule, LearnIters, NoiseSchedule, ProblemConstants, Regime, DEFAULT_K_MAX,
};
use wasm_bindgen::prelude::*;

struct Setup {
    cfg: ExperimentConfig,
    pc: ProblemConstants,
    delta: f64,
}

fn setup(preset: &str, k_budget: u64) -> Result<Setup, String> {
    let preset: Preset = preset.parse().map_err(|e| format!("{e}"))?;
    let cfg = ExperimentConfig {
        preset,
        k_budget,
        ..Default::default()
    };
    let (pc, delta) = accountant_constants(&cfg).map_err(|e| e.to_string())?;
    Ok(Setup { cfg, pc, delta })
}

impl Setup {
    fn schedule(&self, sigma: f64) -> NoiseSchedule {
        NoiseSchedule::new(
            1.0 / self.pc.smoothness,
            sigma,
            LearnIters::Finite(self.cfg.learn_iters),
            0,
        )
    }
}

fn check_sigma(sigma: f64) -> Result<(), String> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err("sigma must be positive".into())
    }
}

pub fn table_targets() -> Vec<f64> {
    TABLE_TARGETS.to_vec()
}

/// Least noise reaching each table target within `k_budget` steps; `NaN`
/// where no noise level in the search bracket does.
pub fn sigma_table_native(preset: &str, k_budget: u64) -> Result<Vec<f64>, String> {
    let s = setup(preset, k_budget)?;
    Ok(TABLE_TARGETS
        .iter()
        .map(|&t| calibrate_langevin(&s.cfg, &s.pc, s.delta, t, 1).map_or(f64::NAN, |c| c.sigma))
        .collect())
}

/// `(ε, δ)` guarantee after `K = 0, stride, 2·stride, …` steps, `points`
/// values in all.
pub fn epsilon_curve_native(
    preset: &str,
    sigma: f64,
    group: u32,
    stride: u64,
    points: usize,
) -> Result<Vec<f64>, String> {
    check_sigma(sigma)?;
    if group == 0 || stride == 0 {
        return Err("group and stride must be positive".into());
    }
    let s = setup(preset, 1)?;
    let ns = s.schedule(sigma);
    (0..points as u64)
        .map(|i| {
            certified_epsilon(
                &s.pc,
                &ns,
                Regime::StronglyConvex,
                group,
                i * stride,
                s.delta,
            )
            .map_err(|e| e.to_string())
        })
        .collect()
}

/// Steps per request for `total` removals handled `batch` at a time.
pub fn sequential_schedule_native(
    preset: &str,
    sigma: f64,
    target: f64,
    total: u32,
    batch: u32,
) -> Result<Vec<u64>, String> {
    check_sigma(sigma)?;
    let s = setup(preset, 1)?;
    let ns = s.schedule(sigma);
    sequential_k_schedule(
        target,
        s.delta,
        &ns,
        total,
        batch,
        &s.pc,
        Regime::StronglyConvex,
        DEFAULT_K_MAX,
    )
    .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = tableTargets)]
pub fn table_targets_js() -> Vec<f64> {
    table_targets()
}

#[wasm_bindgen(js_name = sigmaTable)]
pub fn sigma_table(preset: &str, k_budget: u32) -> Result<Vec<f64>, JsError> {
    sigma_table_native(preset, u64::from(k_budget)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = epsilonCurve)]
pub fn epsilon_curve(
    preset: &str,
    sigma: f64,
    group: u32,
    stride: u32,
    points: u32,
) -> Result<Vec<f64>, JsError> {
    epsilon_curve_native(preset, sigma, group, u64::from(stride), points as usize)
        .map_err(|e| JsError::new(&e))
}

/// Steps per request, as doubles for JavaScript.
#[wasm_bindgen(js_name = sequentialSchedule)]
pub fn sequential_schedule(
    preset: &str,
    sigma: f64,
    target: f64,
    total: u32,
    batch: u32,
) -> Result<Vec<f64>, JsError> {
    sequential_schedule_native(preset, sigma, target, total, batch)
        .map(|ks| ks.into_iter().map(|k| k as f64).collect())
        .map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_one_sigma_per_target() {
        let sigmas = sigma_table_native("mnist38", 1).unwrap();
        assert_eq!(sigmas.len(), table_targets().len());
        assert!(sigmas.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn curve_is_non_increasing() {
        let curve = epsilon_curve_native("mnist38", 0.03, 1, 50, 40).unwrap();
        assert_eq!(curve.len(), 40);
        assert!(curve.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn schedule_covers_every_request() {
        let ks = sequential_schedule_native("mnist38", 0.03, 1.0, 25, 10).unwrap();
        assert_eq!(ks.len(), 3);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(sigma_table_native("imagenet", 1).is_err());
        assert!(epsilon_curve_native("mnist38", -1.0, 1, 1, 3).is_err());
        assert!(sequential_schedule_native("mnist38", 0.03, 1.0, 5, 0).is_err());
    }
}
