use std::f64::consts::PI;

use orbweb::forward::{
    duhamel, evaluate_displacement, project_source, reconstruct_at, reconstruct_field_from_coeffs, synthesize_ring,
    Channel, ModalCoefficients, PolarGrid, RingSpec, SourceField, TimeProfile, TimeShape,
};
use orbweb::spectral::ModalBasis;
use orbweb::WebParameters;
use proptest::prelude::*;

fn demo_basis(nodes: usize, n_theta: usize, n_rad: usize) -> ModalBasis {
    ModalBasis::build(&WebParameters::demo(), nodes, n_theta, n_rad).unwrap()
}

fn load(duration: f64) -> TimeProfile {
    TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 0.5 }, duration, 5e-3).unwrap()
}

#[test]
fn modal_response_satisfies_its_ode() {
    // theta'' + lambda theta = lambda g, checked with a fourth-order stencil.
    for lambda in [1.0f64, 10.0, 100.0] {
        let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 0.7 }, 4.0, 1e-3).unwrap();
        let th = duhamel(lambda, &g, &g.times()).unwrap();
        let dt2 = g.dt * g.dt;
        let mut worst = 0.0f64;
        for k in 2..th.len() - 2 {
            let acc = (-th[k - 2] + 16.0 * th[k - 1] - 30.0 * th[k] + 16.0 * th[k + 1] - th[k + 2]) / (12.0 * dt2);
            worst = worst.max((acc + lambda * th[k] - lambda * g.samples[k]).abs());
        }
        assert!(worst <= 1e-6 * lambda, "lambda {lambda}: {worst:e}");
    }
}

#[test]
fn response_is_linear_in_the_load() {
    let basis = demo_basis(512, 3, 5);
    let g = load(3.0);
    let f1 = SourceField::bump(0.3, 1.0, 0.1, 1.0);
    let f2 = SourceField::bump(0.6, 4.0, 0.2, -0.5);
    let (c1, c2) = (project_source(&f1, &basis).unwrap(), project_source(&f2, &basis).unwrap());
    let c12 = project_source(&SourceField::Sum(vec![f1, f2]), &basis).unwrap();
    let queries: Vec<(f64, f64, f64)> =
        (0..20).map(|k| (0.04 * k as f64 + 0.1, 0.3 * k as f64, 0.14 * k as f64)).collect();
    let u1 = evaluate_displacement(&basis, &c1, &g, &queries).unwrap();
    let u2 = evaluate_displacement(&basis, &c2, &g, &queries).unwrap();
    let u12 = evaluate_displacement(&basis, &c12, &g, &queries).unwrap();
    let scale = u12.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for k in 0..queries.len() {
        assert!((u12[k] - u1[k] - u2[k]).abs() <= 1e-12 * scale);
    }
}

#[test]
fn axisymmetric_load_gives_angle_independent_data() {
    let basis = demo_basis(512, 4, 6);
    let f = SourceField::function("ring", |r, _| (-(r - 0.4).powi(2) / 0.02).exp());
    let coeffs = project_source(&f, &basis).unwrap();
    let m = synthesize_ring(&basis, &coeffs, &load(2.0), &RingSpec::default_for(1.0, 4)).unwrap();
    let peak = m.max_abs();
    assert!(peak > 0.0);
    for radius in &m.u {
        for row in radius {
            for (a, b) in row.iter().zip(&radius[0]) {
                assert!((a - b).abs() <= 1e-10 * peak);
            }
        }
    }
}

#[test]
fn noiseless_ring_equals_direct_evaluation() {
    let basis = demo_basis(512, 2, 4);
    let g = load(1.0);
    let coeffs = project_source(&SourceField::bump(0.2, 0.5, 0.1, 1.0), &basis).unwrap();
    let spec = RingSpec::default_for(1.0, 2);
    let m = synthesize_ring(&basis, &coeffs, &g, &spec).unwrap();
    let angles = spec.angle_values();
    let times = g.times();
    for (i, &r) in m.radii.iter().enumerate() {
        let q: Vec<_> = angles.iter().flat_map(|&a| times.iter().map(move |&t| (r, a, t))).collect();
        let direct = evaluate_displacement(&basis, &coeffs, &g, &q).unwrap();
        let synth: Vec<f64> = m.u[i].iter().flatten().copied().collect();
        assert_eq!(synth, direct);
    }
}

#[test]
fn cos3_load_excites_only_its_channel() {
    let basis = demo_basis(512, 4, 4);
    let f = SourceField::function("cos 3", |r, t| r * (1.0 - r) * (3.0 * t).cos());
    let c = project_source(&f, &basis).unwrap();
    let scale = c.flatten().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for ch in Channel::all(4) {
        for m in 1..=4 {
            if ch != Channel::Cos(3) {
                assert!(c.get(ch, m).abs() <= 1e-12 * scale, "{ch:?} {m}");
            }
        }
    }
    assert!(c.get(Channel::Cos(3), 1).abs() > 0.0);
}

#[test]
fn eigenfunction_load_projects_to_one_coefficient() {
    let params = WebParameters { hub_mass: 0.0, ..WebParameters::demo() };
    let basis = ModalBasis::build(&params, 2048, 0, 5).unwrap();
    let k = 3;
    let lambda = basis.pair(0, k).lambda;
    let b = basis.clone();
    let f = SourceField::function("eigenfunction", move |r, _| {
        if r == 0.0 {
            0.0
        } else {
            params.linear_mass_density(r).unwrap() * b.value(0, k, r) / r
        }
    });
    let c = project_source(&f, &basis).unwrap();
    for m in 1..=5 {
        let expected = if m == k { 1.0 / lambda } else { 0.0 };
        assert!((c.get(Channel::Axial, m) - expected).abs() <= 1e-6 / lambda, "m {m}: {}", c.get(Channel::Axial, m));
    }
}

#[test]
fn band_limited_field_survives_projection() {
    // Without a hub mass the axisymmetric products carry no point term, so a
    // field inside the truncation projects back onto its own coefficients.
    let params = WebParameters { hub_mass: 0.0, ..WebParameters::demo() };
    let basis = ModalBasis::build(&params, 2048, 2, 3).unwrap();
    let mut coeffs = ModalCoefficients::zeros(2, 3);
    coeffs.set(Channel::Axial, 1, 0.02);
    coeffs.set(Channel::Cos(1), 2, -0.01);
    coeffs.set(Channel::Sin(2), 3, 0.005);
    let (b, c) = (basis.clone(), coeffs.clone());
    let f = SourceField::function("band limited", move |r, t| reconstruct_at(&c, &b, r, t));
    let back = project_source(&f, &basis).unwrap();
    assert!(back.relative_error(&coeffs) <= 1e-6, "{}", back.relative_error(&coeffs));
}

#[test]
fn single_coefficient_field_is_one_term() {
    let params = WebParameters::demo();
    let basis = ModalBasis::build(&params, 512, 1, 2).unwrap();
    let mut c = ModalCoefficients::zeros(1, 2);
    c.set(Channel::Cos(1), 1, 1.0);
    let grid = PolarGrid::uniform(1.0, 11, 8);
    let field = reconstruct_field_from_coeffs(&c, &basis, &grid).unwrap();
    let lambda = basis.pair(1, 1).lambda;
    for (i, &r) in grid.rho.iter().enumerate() {
        for (j, &t) in grid.theta.iter().enumerate() {
            let expected = if r == 0.0 {
                0.0
            } else {
                lambda * basis.value(1, 1, r) * t.cos() * params.linear_mass_density(r).unwrap() / r
            };
            assert!((field.values[i][j] - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }
}

#[test]
fn zero_source_gives_zero_measurement() {
    let basis = demo_basis(256, 1, 2);
    let c = project_source(&SourceField::zero(), &basis).unwrap();
    assert!(c.is_zero());
    let m = synthesize_ring(&basis, &c, &load(1.0), &RingSpec::default_for(1.0, 1)).unwrap();
    assert_eq!(m.max_abs(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn duhamel_starts_from_rest(lambda in 0.1f64..500.0, rate in 0.0f64..3.0) {
        let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate }, 1.0, 1e-2).unwrap();
        let th = duhamel(lambda, &g, &[0.0, 0.5, 1.0]).unwrap();
        prop_assert_eq!(th[0], 0.0);
        prop_assert!(th.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn duhamel_scales_with_the_load(lambda in 0.1f64..200.0, a in -5.0f64..5.0) {
        let g = TimeProfile::from_shape(TimeShape::RaisedCosine { amplitude: 1.0, duration: 0.5 }, 1.0, 1e-2).unwrap();
        let times = g.times();
        let base = duhamel(lambda, &g, &times).unwrap();
        let scaled = duhamel(lambda, &g.scaled(a), &times).unwrap();
        for (x, y) in base.iter().zip(&scaled) {
            prop_assert!((a * x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn rim_is_clamped(theta in 0.0f64..(2.0 * PI), t in 0.0f64..1.0) {
        let basis = demo_basis(256, 2, 3);
        let g = load(1.0);
        let c = project_source(&SourceField::bump(0.5, 1.0, 0.2, 1.0), &basis).unwrap();
        let u = evaluate_displacement(&basis, &c, &g, &[(1.0, theta, t)]).unwrap();
        prop_assert_eq!(u[0], 0.0);
    }
}
