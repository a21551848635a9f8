//! Second-kind Volterra equation `g(0) K(t) + int_0^t g'(t - s) K(s) ds = D(t)`
//! and the matching forward convolution.

use crate::error::InverseError;
use crate::forward::TimeProfile;

/// Default onset guard: `|g(0)|` must reach this fraction of `max |g|`.
pub const ONSET_THRESHOLD: f64 = 1e-8;

pub(crate) fn check_onset(g: &TimeProfile, threshold: f64) -> Result<(), InverseError> {
    let g0 = g.g0().abs();
    if !(g0 >= threshold * g.max_abs()) || g0 == 0.0 {
        return Err(InverseError::VanishingOnset { g0, threshold });
    }
    Ok(())
}

/// Solve for `K` on the grid of `d` by forward substitution with trapezoidal
/// convolution weights. `g` must share the time step and cover `d`.
pub fn volterra_deconvolve(d: &[f64], g: &TimeProfile) -> Result<Vec<f64>, InverseError> {
    volterra_deconvolve_with(d, g, ONSET_THRESHOLD)
}

pub fn volterra_deconvolve_with(d: &[f64], g: &TimeProfile, threshold: f64) -> Result<Vec<f64>, InverseError> {
    check_onset(g, threshold)?;
    if g.len() < d.len() {
        return Err(InverseError::Shape(format!("load profile has {} samples, series has {}", g.len(), d.len())));
    }
    let n = d.len();
    let dt = g.dt;
    let gp = &g.derivative;
    let mut k = vec![0.0; n];
    if n == 0 {
        return Ok(k);
    }
    let pivot = g.g0() + 0.5 * dt * gp[0];
    k[0] = d[0] / g.g0();
    for i in 1..n {
        let mut s = 0.5 * gp[i] * k[0];
        for j in 1..i {
            s += gp[i - j] * k[j];
        }
        k[i] = (d[i] - dt * s) / pivot;
    }
    Ok(k)
}

/// `U(t_i) = int_0^{t_i} g(t_i - s) K(s) ds` by the trapezoid rule.
pub fn convolve(kernel: &[f64], g: &TimeProfile) -> Vec<f64> {
    let n = kernel.len().min(g.len());
    let gs = &g.samples;
    let mut out = vec![0.0; n];
    for i in 1..n {
        let mut s = 0.5 * (gs[i] * kernel[0] + gs[0] * kernel[i]);
        for j in 1..i {
            s += gs[i - j] * kernel[j];
        }
        out[i] = g.dt * s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::TimeShape;

    #[test]
    fn constant_load_passes_through() {
        let g = TimeProfile::from_shape(TimeShape::Constant { amplitude: 1.0 }, 1.0, 0.01).unwrap();
        let d: Vec<f64> = (0..g.len()).map(|k| (k as f64 * 0.3).sin()).collect();
        let k = volterra_deconvolve(&d, &g).unwrap();
        assert_eq!(k, d);
    }

    #[test]
    fn exponential_kernel_recovers_constant() {
        let c = 0.7;
        let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 1.0 }, 2.0, 1e-3).unwrap();
        let d: Vec<f64> = g.times().iter().map(|t| c * (-t).exp()).collect();
        let k = volterra_deconvolve(&d, &g).unwrap();
        for v in &k {
            assert!((v - c).abs() < 1e-6 * c, "{v}");
        }
        assert!(volterra_deconvolve(&vec![0.0; g.len()], &g).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn vanishing_onset_is_refused() {
        let g = TimeProfile::from_shape(TimeShape::HalfSine { amplitude: 1.0, duration: 1.0 }, 1.0, 0.01).unwrap();
        let err = volterra_deconvolve(&vec![0.0; g.len()], &g).unwrap_err();
        assert!(matches!(err, InverseError::VanishingOnset { .. }));
        assert!(err.to_string().contains("g(0) != 0"));
    }
}
