//! Checks of computed spectra against their high-frequency asymptotics.

use std::f64::consts::PI;

use super::grid::{GridKind, RadialGrid};
use super::solver::RadialEigenpair;
use crate::model::WebParameters;

/// Number of eigenvalues below the asymptotic sequence: the hub mass adds one
/// low axisymmetric mode, after which `sqrt(mu_m) ~ (m - 1) pi`.
pub fn index_shift(n: usize, params: &WebParameters) -> usize {
    usize::from(n == 0 && params.hub_mass > 0.0)
}

/// Leading-order `sqrt(mu)` of the canonical problem for asymptotic index `k`.
pub fn canonical_wavenumber(n: usize, k: usize, params: &WebParameters) -> f64 {
    if n == 0 && params.hub_mass == 0.0 {
        (k as f64 - 0.5) * PI
    } else {
        k as f64 * PI
    }
}

/// `k |sqrt(lambda) - k pi / J|^{exponent}`-style rate sequence: returns
/// `(k, k^exponent |sqrt(lambda_k) - k pi / J|)` for each pair, with `k` the
/// asymptotic index (`pair.m - index_shift`).
pub fn rate_sequence(pairs: &[RadialEigenpair], j: f64, shift: usize, exponent: f64) -> Vec<(usize, f64)> {
    pairs
        .iter()
        .filter(|p| p.m > shift)
        .map(|p| {
            let k = p.m - shift;
            let kf = k as f64;
            (k, kf.powf(exponent) * (p.lambda.sqrt() - kf * PI / j).abs())
        })
        .collect()
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Absolute correlation of the canonical variable `z = (r p)^{1/4} u` with
/// `sqrt(2) sin(k pi (1 - x))` on a Liouville grid.
pub fn canonical_correlation(
    pair: &RadialEigenpair,
    params: &WebParameters,
    grid: &RadialGrid,
    k: usize,
) -> Option<f64> {
    if grid.kind != GridKind::Liouville {
        return None;
    }
    let h = grid.step;
    let last = grid.len() - 1;
    let (mut zz, mut ss, mut zs) = (0.0, 0.0, 0.0);
    for (i, (&r, u)) in grid.nodes.iter().zip(&pair.values).enumerate() {
        let w = if i == 0 || i == last { 0.5 * h } else { h };
        let a = (params.linear_mass_density_unchecked(r) * params.stiffness(r)).powf(0.25);
        let z = a * u;
        let s = 2f64.sqrt() * (k as f64 * PI * (1.0 - i as f64 * h)).sin();
        zz += w * z * z;
        ss += w * s * s;
        zs += w * z * s;
    }
    Some(zs.abs() / (zz * ss).sqrt())
}
