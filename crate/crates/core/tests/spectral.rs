use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use orbweb::spectral::asymptotics::{index_shift, rate_sequence};
use orbweb::spectral::{
    center_condition_residual, liouville_length, solve_radial, spectrum_gap_diagnostic, ModalBasis, RadialGrid,
    SpectralOptions,
};
use orbweb::{PrestressProfile, WebParameters};
use proptest::prelude::*;

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

fn travel_time_oracle(p: &WebParameters) -> f64 {
    let f = |r: f64| (p.linear_mass_density(r).unwrap() / (p.c_rho * p.radial_prestress(r).unwrap())).sqrt();
    adaptive_simpson(&f, 0.0, p.radius, 1e-14)
}

#[test]
fn travel_time_matches_adaptive_quadrature() {
    let unfinished = WebParameters { profile: PrestressProfile::Unfinished { k: 0.8 }, ..WebParameters::demo() };
    for p in [WebParameters::demo(), unfinished] {
        let j = liouville_length(&p).unwrap();
        let oracle = travel_time_oracle(&p);
        assert!((j - oracle).abs() <= 1e-10 * oracle, "{j} vs {oracle}");
    }
}

/// Lowest eigenvalues of a plain finite-difference discretization on a
/// uniform radius grid, solved densely.
fn dense_eigenvalues(p: &WebParameters, n: usize, cells: usize, count: usize) -> Vec<f64> {
    let h = p.radius / cells as f64;
    let stiff = |r: f64| p.c_rho * p.radial_prestress(r).unwrap();
    let first = if n == 0 { 0 } else { 1 };
    let idx: Vec<usize> = (first..cells).collect();
    let size = idx.len();
    let mut k = DMatrix::<f64>::zeros(size, size);
    let mut mass = vec![0.0; size];
    for (a, &i) in idx.iter().enumerate() {
        let r = i as f64 * h;
        let right = stiff(r + 0.5 * h) / h;
        k[(a, a)] += right;
        if a + 1 < size {
            k[(a, a + 1)] -= right;
            k[(a + 1, a)] -= right;
            k[(a + 1, a + 1)] += right;
        }
        if i > 0 {
            let left = stiff(r - 0.5 * h) / h;
            if a == 0 {
                k[(a, a)] += left;
            }
            let hoop = p.c_theta * p.circumferential_prestress(r).unwrap();
            k[(a, a)] += h * (n * n) as f64 * hoop / r;
        }
        let w = if i == 0 { 0.5 * h } else { h };
        mass[a] = w * p.linear_mass_density(r).unwrap();
        if i == 0 {
            mass[a] += p.hub_mass / (2.0 * PI);
        }
    }
    let scaled = DMatrix::from_fn(size, size, |a, b| k[(a, b)] / (mass[a] * mass[b]).sqrt());
    let mut eig: Vec<f64> = SymmetricEigen::new(scaled).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig.truncate(count);
    eig
}

fn computed(p: &WebParameters, n: usize, count: usize) -> Vec<f64> {
    let grid = RadialGrid::liouville(p, 1024).unwrap();
    solve_radial(p, &grid, n, count, &SpectralOptions::default()).unwrap().iter().map(|q| q.lambda).collect()
}

#[test]
fn dense_oracle_agrees_and_hub_mass_lowers_the_spectrum() {
    let light = WebParameters { hub_mass: 0.0, ..WebParameters::demo() };
    let heavy = WebParameters { hub_mass: 1.0, ..WebParameters::demo() };
    let (dl, dh) = (dense_eigenvalues(&light, 0, 600, 6), dense_eigenvalues(&heavy, 0, 600, 6));
    let (cl, ch) = (computed(&light, 0, 6), computed(&heavy, 0, 6));
    for m in 0..6 {
        assert!(dh[m] <= dl[m] && ch[m] <= cl[m], "m = {}", m + 1);
        assert!((cl[m] - dl[m]).abs() <= 1e-3 * dl[m], "{} vs {}", cl[m], dl[m]);
        assert!((ch[m] - dh[m]).abs() <= 1e-3 * dh[m], "{} vs {}", ch[m], dh[m]);
    }
}

#[test]
fn first_eigenvalue_grows_with_angular_order() {
    let p = WebParameters::demo();
    let dense: Vec<f64> = (1..=3).map(|n| dense_eigenvalues(&p, n, 600, 1)[0]).collect();
    let ours: Vec<f64> = (1..=3).map(|n| computed(&p, n, 1)[0]).collect();
    for w in [&dense, &ours] {
        assert!(w[1] >= w[0] && w[2] >= w[1], "{w:?}");
    }
    for (a, b) in dense.iter().zip(&ours) {
        assert!((a - b).abs() <= 1e-2 * a, "{a} vs {b}");
    }
}

#[test]
fn constant_coefficient_gap_is_exact() {
    let (p0, r0, radius) = (3.0, 0.75, 2.0);
    let basis = ModalBasis::build(&WebParameters::constant_coefficients(p0, r0, radius), 2048, 0, 8).unwrap();
    let gap = spectrum_gap_diagnostic(&basis)[0].min_gap;
    let exact = PI * (p0 / r0).sqrt() / radius;
    assert!((gap - exact).abs() <= 1e-6 * exact, "{gap} vs {exact}");
}

#[test]
fn basis_invariants_on_the_demo_web() {
    let p = WebParameters::demo();
    let basis = ModalBasis::build(&p, 1024, 4, 10).unwrap();
    for (n, class) in basis.classes.iter().enumerate() {
        assert!(class.windows(2).all(|w| w[0].lambda < w[1].lambda));
        for pair in class {
            assert!(pair.lambda > 0.0 && pair.residual <= 1e-6, "{n} {} {}", pair.m, pair.residual);
            if n == 0 {
                assert!(center_condition_residual(pair, &p) < 1e-3, "m {}", pair.m);
            } else {
                assert_eq!(pair.values[0], 0.0);
            }
            assert_eq!(*pair.values.last().unwrap(), 0.0);
        }
    }
    assert!(spectrum_gap_diagnostic(&basis).iter().all(|g| g.min_gap > 0.0));
}

#[test]
fn center_condition_converges_at_second_order() {
    let p = WebParameters::demo();
    let residual = |nodes| {
        let basis = ModalBasis::build(&p, nodes, 0, 6).unwrap();
        center_condition_residual(&basis.classes[0][5], &p)
    };
    let ratio = residual(1024) / residual(2048);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn asymptotic_rate_sequences_stay_bounded() {
    // m |sqrt(lambda) - m pi / J| for n = 0 and m^0.9 |...| for n >= 1.
    let p = WebParameters::demo();
    let grid = RadialGrid::liouville(&p, 2048).unwrap();
    let j = liouville_length(&p).unwrap();
    for (n, exponent) in [(0, 1.0), (1, 0.9), (3, 0.9)] {
        let pairs = solve_radial(&p, &grid, n, 41, &SpectralOptions::default()).unwrap();
        let seq: Vec<f64> = rate_sequence(&pairs, j, index_shift(n, &p), exponent)
            .into_iter()
            .filter(|(k, _)| (10..=40).contains(k))
            .map(|(_, v)| v)
            .collect();
        let ratio = seq.iter().cloned().fold(0.0, f64::max) / seq[0];
        assert!(ratio <= 3.0, "n = {n}: {seq:?}");
    }
}

#[test]
fn unfinished_web_has_a_separated_spectrum() {
    let p = WebParameters { profile: PrestressProfile::Unfinished { k: 0.5 }, ..WebParameters::demo() };
    let basis = ModalBasis::build(&p, 1024, 3, 8).unwrap();
    assert!(spectrum_gap_diagnostic(&basis).iter().all(|g| g.min_gap > 0.0));
    let o = basis.orthonormality().unwrap();
    assert!(o.max_off_diagonal < 1e-8 && o.max_diagonal_error < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constant_spectrum_for_any_coefficients(p0 in 0.1f64..10.0, r0 in 0.1f64..10.0, radius in 0.2f64..5.0) {
        let params = WebParameters::constant_coefficients(p0, r0, radius);
        let grid = RadialGrid::liouville(&params, 1024).unwrap();
        let pairs = solve_radial(&params, &grid, 0, 5, &SpectralOptions::default()).unwrap();
        for (k, pair) in pairs.iter().enumerate() {
            let exact = p0 / r0 * ((2 * k + 1) as f64 * PI / (2.0 * radius)).powi(2);
            prop_assert!((pair.lambda - exact).abs() <= 1e-7 * exact);
        }
    }

    #[test]
    fn finished_webs_are_orthonormal(
        c_theta in 1.0f64..20.0,
        t_script in 0.0f64..0.1,
        hub_mass in 0.0f64..50.0,
    ) {
        let p = WebParameters { c_theta, t_script, hub_mass, ..WebParameters::demo() };
        let basis = ModalBasis::build(&p, 512, 2, 5).unwrap();
        let o = basis.orthonormality().unwrap();
        prop_assert!(o.max_off_diagonal < 1e-8 && o.max_diagonal_error < 1e-8);
        for class in &basis.classes {
            prop_assert!(class.windows(2).all(|w| w[0].lambda < w[1].lambda));
        }
    }
}
