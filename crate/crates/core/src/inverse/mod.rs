//! Inverse problem: recover the load distribution `f` from ring measurements
//! when the time profile `g` (with `g(0) != 0`) and the web are known.
//!
//! Pipeline: time derivative of the data, angular separation, Volterra
//! deconvolution of `g`, least-squares sine amplitudes at the known
//! frequencies, modal coefficients, field reconstruction, localization.

mod angular;
mod fit;
mod volterra;

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use angular::{angular_decompose, angular_recompose, uniform_angles};
pub use fit::{recover_modal_amplitudes, AmplitudeFit};
pub use volterra::{convolve, volterra_deconvolve, volterra_deconvolve_with, ONSET_THRESHOLD};

use crate::error::{InverseError, PipelineError, Stage};
use crate::forward::{
    differentiate, reconstruct_field_from_coeffs, Channel, ModalCoefficients, PolarField, PolarGrid, RingMeasurement,
    TimeProfile, MIN_SAMPLES,
};
use crate::spectral::{min_gap, ModalBasis};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructionConfig {
    pub n_theta: usize,
    pub n_rad: usize,
    /// Tikhonov weight relative to the largest squared singular value; only
    /// applied when the condition cap is exceeded.
    pub ridge: f64,
    /// Modes with `|u(rho*)| < nodal_threshold * max |u|` at every radius are skipped.
    pub nodal_threshold: f64,
    /// Order of the finite-difference time derivative (2 or 4).
    pub derivative_order: usize,
    pub condition_cap: f64,
    pub onset_threshold: f64,
    /// Output grid: radial and angular point counts.
    pub out_rho: usize,
    pub out_theta: usize,
    /// Relative tolerance for ties in the localization peak.
    pub tie_tolerance: f64,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            n_theta: 8,
            n_rad: 12,
            ridge: 0.0,
            nodal_threshold: 1e-3,
            derivative_order: 4,
            condition_cap: 1e8,
            onset_threshold: ONSET_THRESHOLD,
            out_rho: 48,
            out_theta: 96,
            tie_tolerance: 1e-9,
        }
    }
}

impl ReconstructionConfig {
    pub fn with_truncation(n_theta: usize, n_rad: usize) -> Self {
        ReconstructionConfig { n_theta, n_rad, ..Default::default() }
    }
}

/// Observation time long enough for the amplitude fit: four periods of the
/// narrowest spectral gap.
pub fn recommended_duration(basis: &ModalBasis) -> f64 {
    4.0 * 2.0 * PI / min_gap(basis).unwrap_or(1.0)
}

/// Time step resolving the fastest mode of the truncation with ~60 samples
/// per period.
pub fn recommended_dt(basis: &ModalBasis, n_theta: usize, n_rad: usize) -> f64 {
    let w = (0..=n_theta.min(basis.n_theta))
        .map(|n| basis.pair(n, n_rad.min(basis.n_rad)).lambda.sqrt())
        .fold(0.0, f64::max);
    0.1 / w
}

/// `dU/dt` for every radius and angle.
pub fn time_derivative(m: &RingMeasurement, order: usize) -> Result<Vec<Vec<Vec<f64>>>, InverseError> {
    if m.steps < MIN_SAMPLES {
        return Err(InverseError::TooFewSamples { need: MIN_SAMPLES, got: m.steps });
    }
    let d = |y: &Vec<f64>| match order {
        2 => differentiate2(y, m.dt),
        _ => differentiate(y, m.dt),
    };
    Ok(m.u.iter().map(|ring| ring.iter().map(d).collect()).collect())
}

fn differentiate2(y: &[f64], dt: f64) -> Vec<f64> {
    let n = y.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
    }
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
    d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedMode {
    pub channel: Channel,
    pub n: usize,
    pub m: usize,
    /// Largest `|u(rho*)| / max |u|` over the radii.
    pub relative_value: f64,
}

/// Modal coefficients from per-radius amplitudes: `amplitudes[r][channel][m - 1]`
/// fitted at `radii[r]`, channels in [`Channel::all`] order.
pub fn recover_coefficients(
    amplitudes: &[Vec<Vec<f64>>],
    basis: &ModalBasis,
    radii: &[f64],
    n_theta: usize,
    n_rad: usize,
    nodal_threshold: f64,
) -> (ModalCoefficients, Vec<SkippedMode>) {
    let radial: Vec<Vec<Vec<f64>>> = radii.iter().map(|&r| basis.radial_values(r)).collect();
    let mut coeffs = ModalCoefficients::zeros(n_theta, n_rad);
    let mut skipped = Vec::new();
    for (ci, c) in Channel::all(n_theta).into_iter().enumerate() {
        let n = c.order();
        for m in 1..=n_rad {
            let pair = basis.pair(n, m);
            let peak = pair.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            let w = pair.lambda.sqrt();
            let (mut num, mut den, mut best) = (0.0, 0.0, 0.0_f64);
            for (r, vals) in radial.iter().enumerate() {
                let u = vals[n][m - 1];
                best = best.max(u.abs() / peak);
                if u.abs() >= nodal_threshold * peak {
                    let s = w * u;
                    num += amplitudes[r][ci][m - 1] * s;
                    den += s * s;
                }
            }
            if den > 0.0 {
                coeffs.set(c, m, num / den);
            } else {
                skipped.push(SkippedMode { channel: c, n, m, relative_value: best });
            }
        }
    }
    (coeffs, skipped)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub rho: f64,
    pub theta: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Localization {
    /// `None` for an all-zero field.
    pub peak: Option<Peak>,
    /// Every grid point tying with the peak, the reported one first.
    pub ties: Vec<Peak>,
}

/// Argmax of `|f|` over the grid; ties (within `tolerance` relative) go to
/// the smallest radius, then the smallest angle.
pub fn localize_field(field: &PolarField, tolerance: f64) -> Localization {
    let max = field.max_abs();
    if max == 0.0 || !max.is_finite() {
        return Localization { peak: None, ties: Vec::new() };
    }
    let mut ties = Vec::new();
    for (i, &rho) in field.grid.rho.iter().enumerate() {
        for (j, &theta) in field.grid.theta.iter().enumerate() {
            let v = field.values[i][j];
            if v.abs() >= max * (1.0 - tolerance) {
                ties.push(Peak { rho, theta, value: v });
            }
        }
    }
    Localization { peak: ties.first().cloned(), ties }
}

/// Localization of a reconstruction result.
pub fn localize(result: &ReconstructionResult) -> Localization {
    result.localization.clone()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub radius: f64,
    pub channel: String,
    pub condition: f64,
    pub residual: f64,
    pub ridge_used: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionResult {
    pub coefficients: ModalCoefficients,
    #[serde(skip)]
    pub field: PolarField,
    pub localization: Localization,
    pub channels: Vec<ChannelReport>,
    pub skipped: Vec<SkippedMode>,
    pub max_condition: f64,
    pub elapsed_seconds: f64,
}

fn at(stage: Stage) -> impl Fn(InverseError) -> PipelineError {
    move |source| PipelineError { stage, source }
}

/// Full inversion of a ring measurement.
pub fn invert(
    measurement: &RingMeasurement,
    basis: &ModalBasis,
    g: &TimeProfile,
    config: &ReconstructionConfig,
) -> Result<ReconstructionResult, PipelineError> {
    let start = Instant::now();
    let (n_theta, n_rad) = (config.n_theta, config.n_rad);
    let validation = at(Stage::Validation);
    if n_theta > basis.n_theta || n_rad > basis.n_rad || n_rad == 0 {
        return Err(validation(InverseError::Truncation { n_theta, n_rad }));
    }
    if !(config.ridge >= 0.0) {
        return Err(validation(InverseError::Regularization(config.ridge)));
    }
    volterra::check_onset(g, config.onset_threshold).map_err(&validation)?;
    if (g.dt - measurement.dt).abs() > 1e-9 * measurement.dt {
        return Err(validation(InverseError::TimeGridMismatch { measurement: measurement.dt, profile: g.dt }));
    }
    if g.len() < measurement.steps {
        return Err(validation(InverseError::Shape(format!(
            "load profile covers {} samples, measurement has {}",
            g.len(),
            measurement.steps
        ))));
    }
    let dudt = time_derivative(measurement, config.derivative_order).map_err(at(Stage::TimeDerivative))?;
    let channels: Vec<Vec<(Channel, Vec<f64>)>> = dudt
        .iter()
        .map(|ring| angular_decompose(ring, n_theta))
        .collect::<Result<_, _>>()
        .map_err(at(Stage::AngularDecomposition))?;
    let jobs: Vec<(usize, usize)> =
        (0..channels.len()).flat_map(|r| (0..channels[r].len()).map(move |c| (r, c))).collect();
    let kernels: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(r, c)| volterra_deconvolve_with(&channels[r][c].1, g, config.onset_threshold))
        .collect::<Result<_, _>>()
        .map_err(at(Stage::Deconvolution))?;
    let freqs: Vec<Vec<f64>> = (0..=n_theta).map(|n| basis.frequencies(n)[..n_rad].to_vec()).collect();
    let fits: Vec<AmplitudeFit> = jobs
        .par_iter()
        .zip(&kernels)
        .map(|(&(r, c), k)| {
            let n = channels[r][c].0.order();
            recover_modal_amplitudes(k, measurement.dt, &freqs[n], config.condition_cap, config.ridge)
        })
        .collect::<Result<_, _>>()
        .map_err(at(Stage::AmplitudeFit))?;
    let mut amplitudes = vec![Vec::new(); channels.len()];
    let mut reports = Vec::with_capacity(jobs.len());
    for (&(r, c), fit) in jobs.iter().zip(&fits) {
        reports.push(ChannelReport {
            radius: measurement.radii[r],
            channel: channels[r][c].0.label(),
            condition: fit.condition,
            residual: fit.residual,
            ridge_used: fit.ridge_used,
        });
        amplitudes[r].push(fit.amplitudes.clone());
    }
    let (coefficients, skipped) =
        recover_coefficients(&amplitudes, basis, &measurement.radii, n_theta, n_rad, config.nodal_threshold);
    let grid = PolarGrid::uniform(basis.params.radius, config.out_rho, config.out_theta);
    let field = reconstruct_field_from_coeffs(&coefficients, basis, &grid)
        .map_err(|e| PipelineError { stage: Stage::FieldReconstruction, source: e.into() })?;
    let localization = localize_field(&field, config.tie_tolerance);
    Ok(ReconstructionResult {
        coefficients,
        field,
        localization,
        max_condition: reports.iter().map(|r| r.condition).fold(0.0, f64::max),
        channels: reports,
        skipped,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::TimeShape;

    #[test]
    fn derivative_of_line_and_constant() {
        let steps = 20;
        let m = RingMeasurement {
            radii: vec![0.1],
            angles: vec![0.0, 1.0],
            dt: 0.1,
            steps,
            u: vec![vec![(0..steps).map(|k| k as f64 * 0.1).collect(), vec![2.0; steps]]],
            meta: crate::forward::MeasurementMeta {
                n_theta: 0,
                n_rad: 1,
                noise: 0.0,
                seed: 0,
                dt: 0.1,
                params_hash: String::new(),
                warnings: vec![],
            },
        };
        for order in [2, 4] {
            let d = time_derivative(&m, order).unwrap();
            assert!(d[0][0].iter().all(|v| (v - 1.0).abs() < 1e-12));
            assert!(d[0][1].iter().all(|v| v.abs() < 1e-12));
        }
        let short = RingMeasurement { steps: 4, u: vec![vec![vec![0.0; 4]]], ..m };
        assert!(matches!(time_derivative(&short, 4), Err(InverseError::TooFewSamples { .. })));
    }

    #[test]
    fn localization_ties_and_zero() {
        let grid = PolarGrid::uniform(1.0, 5, 4);
        let mut values = vec![vec![0.0; 4]; 5];
        values[3][1] = 2.0;
        values[1][2] = -2.0;
        let field = PolarField { grid: grid.clone(), values };
        let loc = localize_field(&field, 1e-12);
        let p = loc.peak.unwrap();
        assert_eq!((p.rho, p.theta), (0.25, PI));
        assert_eq!(loc.ties.len(), 2);
        let zero = PolarField { grid, values: vec![vec![0.0; 4]; 5] };
        assert!(localize_field(&zero, 1e-12).peak.is_none());
    }

    #[test]
    fn onset_guard_is_tagged() {
        let basis = ModalBasis::build(&crate::model::WebParameters::demo(), 257, 1, 2).unwrap();
        let g = TimeProfile::from_shape(TimeShape::HalfSine { amplitude: 1.0, duration: 1.0 }, 1.0, 0.01).unwrap();
        let coeffs = ModalCoefficients::zeros(1, 2);
        let spec = crate::forward::RingSpec::default_for(1.0, 1);
        let m = crate::forward::synthesize_ring(&basis, &coeffs, &g, &spec).unwrap();
        let err = invert(&m, &basis, &g, &ReconstructionConfig::with_truncation(1, 2)).unwrap_err();
        assert_eq!(err.stage, Stage::Validation);
        assert!(matches!(err.source, InverseError::VanishingOnset { .. }));
    }
}
