//! Radial eigenproblems of the membrane for each angular index.

use std::f64::consts::PI;

use serde::Serialize;

use super::grid::RadialGrid;
use super::tridiag::SymTridiagonal;
use crate::error::SpectralError;
use crate::model::WebParameters;

/// Nodes per resolved mode on the coarsest grid used.
const NODES_PER_MODE: usize = 16;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectralOptions {
    /// Combine the eigenvalues of the grid and of a grid with half as many
    /// cells to cancel the leading `h^2` error term.
    pub extrapolate: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { extrapolate: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialEigenpair {
    pub n: usize,
    /// Radial index, from 1.
    pub m: usize,
    pub lambda: f64,
    /// Eigenvalue of the discrete problem on the grid the values live on.
    pub grid_lambda: f64,
    /// Samples at the grid nodes.
    #[serde(skip)]
    pub values: Vec<f64>,
    /// Spline second derivatives with respect to the radius.
    #[serde(skip)]
    pub curvature: Vec<f64>,
    pub value_at_zero: f64,
    pub derivative_at_zero: f64,
    /// `|K u - lambda B u| / (lambda |B u|)` on the grid.
    pub residual: f64,
}

struct Pencil {
    /// First unknown node; unknowns run over `first..len - 1`.
    first: usize,
    k_diag: Vec<f64>,
    k_off: Vec<f64>,
    mass: Vec<f64>,
}

impl Pencil {
    fn new(params: &WebParameters, grid: &RadialGrid, n: usize) -> Self {
        let len = grid.len();
        let h = grid.step;
        let first = if n == 0 { 0 } else { 1 };
        let flux: Vec<f64> =
            grid.midpoints.iter().zip(&grid.jacobian_mid).map(|(&r, j)| params.stiffness(r) / (j * h)).collect();
        let nn = (n * n) as f64;
        let mut k_diag = Vec::with_capacity(len - 1 - first);
        let mut mass = Vec::with_capacity(len - 1 - first);
        for i in first..len - 1 {
            let r = grid.nodes[i];
            let mut d = flux[i];
            if i > 0 {
                d += flux[i - 1];
            }
            if n > 0 {
                d += h * grid.jacobian[i] * nn * params.hoop_stiffness(r) / r;
            }
            k_diag.push(d);
            let mut b = grid.weights[i] * params.linear_mass_density_unchecked(r);
            if i == 0 {
                b += params.hub_mass / (2.0 * PI);
            }
            mass.push(b);
        }
        let k_off = (first..len - 2).map(|i| -flux[i]).collect();
        Pencil { first, k_diag, k_off, mass }
    }

    fn len(&self) -> usize {
        self.k_diag.len()
    }

    fn apply_k(&self, u: &[f64]) -> Vec<f64> {
        SymTridiagonal::new(self.k_diag.clone(), self.k_off.clone()).apply(u)
    }

    /// Lowest `count` eigenpairs `(lambda_h, u)` with `u` on the unknowns.
    fn lowest(&self, n: usize, count: usize) -> Result<Vec<(f64, Vec<f64>)>, SpectralError> {
        let std = SymTridiagonal::from_pencil(&self.k_diag, &self.k_off, &self.mass);
        let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for k in 0..count {
            let lambda = std.eigenvalue(k).ok_or(SpectralError::Bracket { n, index: k + 1 })?;
            let prev = out.last().map(|p| p.0).unwrap_or(0.0);
            if !(lambda.is_finite() && lambda > prev) {
                return Err(SpectralError::Bracket { n, index: k + 1 });
            }
            let y = std.eigenvector(lambda);
            let mut u: Vec<f64> = y.iter().zip(&self.mass).map(|(y, b)| y / b.sqrt()).collect();
            // B-orthogonalize against the lower modes
            for (_, v) in &out {
                let c = self.b_dot(&u, v) / self.b_dot(v, v);
                u.iter_mut().zip(v).for_each(|(a, b)| *a -= c * b);
            }
            out.push((lambda, u));
        }
        Ok(out)
    }

    fn b_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).zip(&self.mass).map(|((a, b), m)| a * b * m).sum()
    }

    fn residual(&self, lambda: f64, u: &[f64]) -> f64 {
        let ku = self.apply_k(u);
        let bu: Vec<f64> = u.iter().zip(&self.mass).map(|(u, m)| u * m).collect();
        let num: f64 = ku.iter().zip(&bu).map(|(k, b)| (k - lambda * b).powi(2)).sum::<f64>().sqrt();
        let den: f64 = bu.iter().map(|b| b * b).sum::<f64>().sqrt();
        num / (lambda * den)
    }
}

/// Largest mode count the grid can deliver.
pub fn capacity(grid: &RadialGrid, options: &SpectralOptions) -> usize {
    let nodes = if options.extrapolate { coarse_count(grid.len()) } else { grid.len() };
    (nodes - 1) / NODES_PER_MODE
}

fn coarse_count(len: usize) -> usize {
    len.div_ceil(2)
}

/// Lowest `count` eigenpairs of the axisymmetric class (hub-mass condition at
/// the center, Dirichlet at the rim).
pub fn solve_radial_n0(
    params: &WebParameters,
    grid: &RadialGrid,
    count: usize,
) -> Result<Vec<RadialEigenpair>, SpectralError> {
    solve_radial(params, grid, 0, count, &SpectralOptions::default())
}

/// Lowest `count` eigenpairs of the class `n >= 1` (Dirichlet at both ends).
pub fn solve_radial_n(
    params: &WebParameters,
    grid: &RadialGrid,
    n: usize,
    count: usize,
) -> Result<Vec<RadialEigenpair>, SpectralError> {
    if n == 0 {
        return Err(SpectralError::AngularIndex(n));
    }
    solve_radial(params, grid, n, count, &SpectralOptions::default())
}

/// Lowest `count` eigenpairs of angular class `n`, normalized so that
/// `lambda <u, u> = 1` in the class scalar product.
pub fn solve_radial(
    params: &WebParameters,
    grid: &RadialGrid,
    n: usize,
    count: usize,
    options: &SpectralOptions,
) -> Result<Vec<RadialEigenpair>, SpectralError> {
    let params = params.validate()?;
    if count == 0 {
        return Err(SpectralError::EmptyRequest);
    }
    let cap = capacity(grid, options);
    if count > cap {
        return Err(SpectralError::Capacity { requested: count, capacity: cap });
    }
    let pencil = Pencil::new(&params, grid, n);
    debug_assert!(pencil.len() > count);
    let fine = pencil.lowest(n, count)?;
    let extrapolated: Vec<f64> = if options.extrapolate {
        let coarse_grid = grid.resampled(&params, coarse_count(grid.len()))?;
        let coarse = Pencil::new(&params, &coarse_grid, n).lowest(n, count)?;
        let (hf, hc) = (grid.step, coarse_grid.step);
        let w = hf * hf / (hc * hc - hf * hf);
        fine.iter().zip(&coarse).map(|(f, c)| f.0 + (f.0 - c.0) * w).collect()
    } else {
        fine.iter().map(|f| f.0).collect()
    };
    let mut pairs = Vec::with_capacity(count);
    for (k, ((grid_lambda, u), lambda)) in fine.into_iter().zip(extrapolated).enumerate() {
        if !(lambda > 0.0) || pairs.last().is_some_and(|p: &RadialEigenpair| lambda <= p.lambda) {
            return Err(SpectralError::Bracket { n, index: k + 1 });
        }
        let residual = pencil.residual(grid_lambda, &u);
        let mut values = vec![0.0; grid.len()];
        values[pencil.first..grid.len() - 1].copy_from_slice(&u);
        let mut pair = RadialEigenpair {
            n,
            m: k + 1,
            lambda,
            grid_lambda,
            values,
            curvature: Vec::new(),
            value_at_zero: 0.0,
            derivative_at_zero: 0.0,
            residual,
        };
        normalize_pair(&mut pair, &params, grid)?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Scale to `lambda <u, u> = 1`, fix the sign so that the first local maximum
/// of `|u|` seen from the hub is positive, and refresh the derived data.
pub(crate) fn normalize_pair(
    pair: &mut RadialEigenpair,
    params: &WebParameters,
    grid: &RadialGrid,
) -> Result<(), SpectralError> {
    let norm = if pair.n == 0 {
        super::grid::inner_product_gamma_m(&pair.values, &pair.values, params, grid)?
    } else {
        super::grid::inner_product_gamma(&pair.values, &pair.values, params, grid)?
    };
    let peak = pair.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if !(norm > 0.0 && norm.is_finite()) || peak == 0.0 {
        return Err(SpectralError::DegenerateMode { n: pair.n, m: pair.m });
    }
    let mut scale = 1.0 / (pair.lambda * norm).sqrt();
    let v = &pair.values;
    let floor = 1e-6 * peak;
    let first_peak = (0..v.len())
        .find(|&i| {
            let a = v[i].abs();
            a > floor && (i == 0 || a >= v[i - 1].abs()) && (i + 1 == v.len() || a >= v[i + 1].abs())
        })
        .unwrap_or(0);
    if v[first_peak] < 0.0 {
        scale = -scale;
    }
    if (scale - 1.0).abs() > 1e-15 {
        pair.values.iter_mut().for_each(|x| *x *= scale);
    }
    let u = &pair.values;
    pair.value_at_zero = u[0];
    pair.derivative_at_zero = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.step * grid.jacobian[0]);
    pair.curvature = crate::spline::not_a_knot(&grid.nodes, u);
    Ok(())
}

/// Residual of the hub condition `2 pi C_rho T_rho(0) u'(0) + lambda M u(0)`,
/// relative to `lambda M |u(0)|` plus the flux a wave of local wavenumber
/// `sqrt(lambda gamma(0) / p(0))` and amplitude `max |u|` would carry.
pub fn center_condition_residual(pair: &RadialEigenpair, params: &WebParameters) -> f64 {
    let p0 = params.stiffness(0.0);
    let flux = 2.0 * PI * p0 * pair.derivative_at_zero;
    let inertia = pair.lambda * params.hub_mass * pair.value_at_zero;
    let amplitude = pair.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let wavenumber = (pair.lambda * params.linear_mass_density_unchecked(0.0) / p0).sqrt();
    let scale = (inertia.abs() + 2.0 * PI * p0 * wavenumber * amplitude).max(f64::MIN_POSITIVE);
    (flux + inertia).abs() / scale
}
