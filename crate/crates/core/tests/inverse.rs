use std::f64::consts::PI;

use orbweb::error::{InverseError, Stage};
use orbweb::forward::{
    project_source, synthesize_ring, Channel, ModalCoefficients, RingMeasurement, RingSpec, SourceField, TimeProfile,
    TimeShape,
};
use orbweb::inverse::{
    invert, recommended_dt, recommended_duration, recover_modal_amplitudes, volterra_deconvolve, ReconstructionConfig,
};
use orbweb::spectral::ModalBasis;
use orbweb::WebParameters;
use proptest::prelude::*;

struct Setup {
    basis: ModalBasis,
    g: TimeProfile,
    truth: ModalCoefficients,
}

fn setup(n_theta: usize, n_rad: usize) -> Setup {
    let basis = ModalBasis::build(&WebParameters::demo(), 1024, n_theta, n_rad).unwrap();
    let shape = TimeShape::Exponential { amplitude: 1.0, rate: 1.0 };
    let g =
        TimeProfile::from_shape(shape, recommended_duration(&basis), recommended_dt(&basis, n_theta, n_rad)).unwrap();
    let truth = project_source(&SourceField::bump(0.35, 2.0, 0.12, 1.0), &basis).unwrap();
    Setup { basis, g, truth }
}

fn measure(s: &Setup, radii: Vec<f64>, noise: f64, seed: u64) -> RingMeasurement {
    let spec = RingSpec { radii, angles: 2 * s.basis.n_theta + 3, noise, seed };
    synthesize_ring(&s.basis, &s.truth, &s.g, &spec).unwrap()
}

fn config(s: &Setup) -> ReconstructionConfig {
    ReconstructionConfig::with_truncation(s.basis.n_theta, s.basis.n_rad)
}

fn coefficient_error(s: &Setup, m: &RingMeasurement) -> f64 {
    invert(m, &s.basis, &s.g, &config(s)).unwrap().coefficients.relative_error(&s.truth)
}

#[test]
fn two_radii_recover_the_coefficients() {
    let s = setup(4, 6);
    let m = measure(&s, vec![0.15, 0.2], 0.0, 0);
    assert!(coefficient_error(&s, &m) <= 1e-3);
}

#[test]
fn error_grows_linearly_with_noise() {
    let s = setup(3, 5);
    let peak = measure(&s, vec![0.17], 0.0, 0).max_abs();
    let mean = |sigma: f64| -> f64 {
        (0..8).map(|seed| coefficient_error(&s, &measure(&s, vec![0.17], sigma * peak, seed))).sum::<f64>() / 8.0
    };
    let (low, high) = (mean(1e-4), mean(1e-3));
    let ratio = high / low;
    assert!((7.0..14.0).contains(&ratio), "errors {low:e} {high:e}");
}

#[test]
fn noisy_inversion_is_unbiased_on_average() {
    // Averaging coefficient estimates over independent noise draws shrinks
    // the error roughly like 1 / sqrt(draws).
    let s = setup(2, 4);
    let peak = measure(&s, vec![0.17], 0.0, 0).max_abs();
    let draws = 16;
    let mut mean = vec![0.0; s.truth.flatten().len()];
    let mut single = 0.0;
    for seed in 0..draws {
        let est = invert(&measure(&s, vec![0.17], 1e-3 * peak, seed), &s.basis, &s.g, &config(&s)).unwrap();
        single += est.coefficients.relative_error(&s.truth) / draws as f64;
        for (acc, v) in mean.iter_mut().zip(est.coefficients.flatten()) {
            *acc += v / draws as f64;
        }
    }
    let truth = s.truth.flatten();
    let diff: f64 = mean.iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = truth.iter().map(|b| b * b).sum::<f64>().sqrt();
    assert!(diff / norm < 0.5 * single, "{} vs {single}", diff / norm);
}

#[test]
fn node_radius_is_skipped_not_divided_by() {
    let s = setup(2, 4);
    // Interior zero of the second n = 1 mode.
    let pair = s.basis.pair(1, 2);
    let i = (2..pair.values.len()).find(|&i| pair.values[i - 1] * pair.values[i] < 0.0).unwrap();
    let (mut lo, mut hi) = (s.basis.grid.nodes[i - 1], s.basis.grid.nodes[i]);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if s.basis.value(1, 2, lo) * s.basis.value(1, 2, mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let m = measure(&s, vec![0.5 * (lo + hi)], 0.0, 0);
    let r = invert(&m, &s.basis, &s.g, &config(&s)).unwrap();
    assert!(r.skipped.iter().any(|k| k.n == 1 && k.m == 2 && k.channel == Channel::Cos(1)));
    assert!(r.skipped.iter().any(|k| k.n == 1 && k.m == 2 && k.channel == Channel::Sin(1)));
    assert!(r.coefficients.flatten().iter().all(|c| c.is_finite()));
}

#[test]
fn guards_report_their_stage() {
    let s = setup(2, 3);
    let mut m = measure(&s, vec![0.17], 0.0, 0);
    let short = TimeProfile::from_shape(TimeShape::HalfSine { amplitude: 1.0, duration: 1.0 }, s.g.duration(), s.g.dt);
    let e = invert(&m, &s.basis, &short.unwrap(), &config(&s)).unwrap_err();
    assert_eq!(e.stage, Stage::Validation);
    assert!(matches!(e.source, InverseError::VanishingOnset { .. }));

    let too_fine = ReconstructionConfig::with_truncation(4, 3);
    assert!(invert(&m, &s.basis, &s.g, &too_fine).is_err());

    for radius in m.u.iter_mut() {
        radius.truncate(4);
    }
    m.angles.truncate(4);
    let e = invert(&m, &s.basis, &s.g, &config(&s)).unwrap_err();
    assert!(matches!(e.source, InverseError::Aliasing { need: 5, .. }), "{e}");
}

#[test]
fn short_records_hit_the_condition_cap() {
    let s = setup(1, 6);
    let m = measure(&s, vec![0.17], 0.0, 0);
    let keep = 40;
    let short = RingMeasurement {
        steps: keep,
        u: m.u.iter().map(|r| r.iter().map(|a| a[..keep].to_vec()).collect()).collect(),
        ..m
    };
    let cfg = ReconstructionConfig { condition_cap: 10.0, ..config(&s) };
    let e = invert(&short, &s.basis, &s.g, &cfg).unwrap_err();
    assert!(matches!(e.source, InverseError::IllConditioned { .. }), "{e}");
    let ridged = ReconstructionConfig { ridge: 1e-6, ..cfg };
    let r = invert(&short, &s.basis, &s.g, &ridged).unwrap();
    assert!(r.channels.iter().any(|c| c.ridge_used));
}

#[test]
fn single_bump_is_localized() {
    let s = setup(8, 12);
    let m = measure(&s, vec![1.0 / 6.0 * 0.9, 1.0 / 6.0, 1.0 / 6.0 * 1.1], 0.0, 0);
    let r = invert(&m, &s.basis, &s.g, &config(&s)).unwrap();
    let peak = r.localization.peak.unwrap();
    let grid = &r.field.grid;
    let dtheta = (peak.theta - 2.0).rem_euclid(2.0 * PI);
    assert!((peak.rho - 0.35).abs() <= grid.rho_step(), "{peak:?}");
    assert!(dtheta.min(2.0 * PI - dtheta) <= grid.theta_step(), "{peak:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volterra_inverts_the_forward_operator(
        rate in 0.0f64..3.0,
        a in -2.0f64..2.0,
        w in 0.5f64..5.0,
    ) {
        // K = a cos(w t) under g = exp(-rate t):
        // D = a cos(w t) - a rate int_0^t exp(-rate (t - s)) cos(w s) ds.
        let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate }, 2.0, 1e-3).unwrap();
        let times = g.times();
        let d: Vec<f64> = times
            .iter()
            .map(|&t| {
                let conv = (rate * (w * t).cos() + w * (w * t).sin() - rate * (-rate * t).exp()) / (rate * rate + w * w);
                a * (w * t).cos() - a * rate * conv
            })
            .collect();
        let k = volterra_deconvolve(&d, &g).unwrap();
        for (t, v) in times.iter().zip(&k) {
            prop_assert!((v - a * (w * t).cos()).abs() <= 1e-5 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn amplitude_fit_is_exact_on_clean_sines(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let dt = 0.01;
        let y: Vec<f64> = (0..1500).map(|k| {
            let t = k as f64 * dt;
            a * (1.3 * t).sin() + b * (2.9 * t).sin()
        }).collect();
        let fit = recover_modal_amplitudes(&y, dt, &[1.3, 2.9], 1e8, 0.0).unwrap();
        prop_assert!((fit.amplitudes[0] - a).abs() < 1e-9 && (fit.amplitudes[1] - b).abs() < 1e-9);
    }
}
