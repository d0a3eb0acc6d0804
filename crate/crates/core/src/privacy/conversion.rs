//! Conversion of a Rényi curve into an `(ε, δ)` guarantee.

use super::RenyiBound;
use crate::error::{Error, Result};

pub const ALPHA_GRID_POINTS: usize = 2000;
/// Smallest probed order is `1 + ALPHA_MIN_OFFSET`.
pub const ALPHA_MIN_OFFSET: f64 = 1e-6;
pub const ALPHA_MAX: f64 = 1e6;
const GOLDEN_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConversion {
    pub epsilon: f64,
    /// Order attaining the minimum.
    pub alpha: f64,
}

/// `min_{α>1} ε(α) + log(1/δ)/(α − 1)`.
///
/// The orders are searched on a 2000-point grid log-spaced in `α − 1` over
/// `[1e-6, 1e6 − 1]`, and the best grid cell is refined by golden-section
/// search to relative width 1e-10. The returned value never exceeds the
/// objective at any probed grid point.
pub fn rdp_to_dp(bound: &RenyiBound, delta: f64) -> Result<DpConversion> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let log_inv_delta = -delta.ln();
    let objective = |alpha: f64| {
        let v = bound.eval(alpha) + log_inv_delta / (alpha - 1.0);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    // grid coordinate u = log10(α − 1)
    let u_lo = ALPHA_MIN_OFFSET.log10();
    let u_hi = (ALPHA_MAX - 1.0).log10();
    let du = (u_hi - u_lo) / (ALPHA_GRID_POINTS - 1) as f64;
    let alpha_at = |u: f64| 1.0 + 10f64.powf(u);
    let grid_alpha = |i: usize| {
        if i == ALPHA_GRID_POINTS - 1 {
            ALPHA_MAX
        } else {
            alpha_at(u_lo + du * i as f64)
        }
    };

    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..ALPHA_GRID_POINTS {
        let v = objective(grid_alpha(i));
        if v < best {
            best = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == ALPHA_GRID_POINTS - 1 {
        return Ok(DpConversion {
            epsilon: best,
            alpha: grid_alpha(best_i),
        });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = u_lo + du * (best_i - 1) as f64;
    let mut b = u_lo + du * (best_i + 1) as f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(alpha_at(c));
    let mut fd = objective(alpha_at(d));
    while alpha_at(b) - alpha_at(a) > GOLDEN_REL_TOL * alpha_at(a) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(alpha_at(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(alpha_at(d));
        }
    }
    let (u, f) = if fc < fd { (c, fc) } else { (d, fd) };
    if f < best {
        Ok(DpConversion {
            epsilon: f,
            alpha: alpha_at(u),
        })
    } else {
        Ok(DpConversion {
            epsilon: best,
            alpha: grid_alpha(best_i),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_curve_hits_alpha_max() {
        let delta: f64 = 1e-5;
        let r = rdp_to_dp(&RenyiBound::zero(), delta).unwrap();
        assert_eq!(r.alpha, ALPHA_MAX);
        assert!((r.epsilon - (-delta.ln()) / (ALPHA_MAX - 1.0)).abs() < 1e-18);
    }

    #[test]
    fn linear_curve_closed_form() {
        // min_α sα + c/(α−1) is attained at α = 1 + √(c/s) with value s + 2√(sc)
        let s: f64 = 0.01;
        let delta: f64 = 1e-4;
        let c = -delta.ln();
        let r = rdp_to_dp(&RenyiBound::Linear { slope: s }, delta).unwrap();
        let want = s + 2.0 * (s * c).sqrt();
        assert!(
            (r.epsilon / want - 1.0).abs() < 1e-12,
            "{} vs {want}",
            r.epsilon
        );
        assert!((r.alpha / (1.0 + (c / s).sqrt()) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(rdp_to_dp(&RenyiBound::zero(), 0.0).is_err());
        assert!(rdp_to_dp(&RenyiBound::zero(), 1.0).is_err());
    }
}
