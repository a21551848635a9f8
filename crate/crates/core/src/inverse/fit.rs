//! Least-squares amplitudes of known sine frequencies.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::InverseError;

#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeFit {
    pub amplitudes: Vec<f64>,
    /// Ratio of extreme singular values of the sine design matrix.
    pub condition: f64,
    /// `|S A - y| / |y|` (0 for a zero channel).
    pub residual: f64,
    pub ridge_used: bool,
}

/// Fit `y(t_k) ~ sum_m A_m sin(w_m t_k)` with `t_k = k dt`.
///
/// Fails when the design matrix condition number exceeds `cap`, unless
/// `ridge > 0`, in which case Tikhonov damping `ridge * sigma_max^2` is used.
pub fn recover_modal_amplitudes(
    y: &[f64],
    dt: f64,
    frequencies: &[f64],
    cap: f64,
    ridge: f64,
) -> Result<AmplitudeFit, InverseError> {
    if !(ridge >= 0.0) {
        return Err(InverseError::Regularization(ridge));
    }
    let rows = y.len();
    let cols = frequencies.len();
    if rows < cols {
        return Err(InverseError::TooFewSamples { need: cols, got: rows });
    }
    let s = DMatrix::from_fn(rows, cols, |k, m| (frequencies[m] * k as f64 * dt).sin());
    let svd = s.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let duration = (rows.max(1) - 1) as f64 * dt;
    let ridge_used = condition > cap;
    if ridge_used && ridge == 0.0 {
        return Err(InverseError::IllConditioned { condition, cap, duration });
    }
    let u = svd.u.as_ref().expect("left singular vectors");
    let vt = svd.v_t.as_ref().expect("right singular vectors");
    let rhs = DVector::from_column_slice(y);
    let uty = u.transpose() * &rhs;
    let alpha = if ridge_used { ridge * smax * smax } else { 0.0 };
    let scaled = DVector::from_fn(sv.len(), |i, _| {
        let sigma = sv[i];
        if ridge_used {
            sigma / (sigma * sigma + alpha) * uty[i]
        } else {
            uty[i] / sigma
        }
    });
    let a = vt.transpose() * scaled;
    let fitted = s * &a;
    let ynorm = rhs.norm();
    let residual = if ynorm > 0.0 { (fitted - &rhs).norm() / ynorm } else { 0.0 };
    Ok(AmplitudeFit { amplitudes: a.iter().copied().collect(), condition, residual, ridge_used })
}
