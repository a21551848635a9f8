//! Projection of a load onto the modal basis and the inverse expansion back
//! to a field on a polar grid.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::coefficients::{Channel, ModalCoefficients};
use super::source::SourceField;
use crate::error::ForwardError;
use crate::spectral::ModalBasis;

/// Number of uniform angles used for the angular integrals of a projection
/// truncated at `n_theta`.
pub fn projection_angles(n_theta: usize) -> usize {
    (4 * n_theta).max(64)
}

/// Angular Fourier moments `rho int f(rho, theta) a(theta) dtheta` for every
/// channel, at every radial node of the basis grid. Indexed `[node][channel]`.
///
/// `f` is not evaluated at the hub: the limit of `rho f` there is taken by
/// quadratic extrapolation from the next three nodes, which is 0 for bounded
/// loads and finite for loads that grow like `1 / rho`.
fn angular_moments(f: &SourceField, basis: &ModalBasis, n_theta: usize) -> Result<Vec<Vec<f64>>, ForwardError> {
    let k = projection_angles(n_theta);
    let dtheta = 2.0 * PI / k as f64;
    let channels = Channel::all(n_theta);
    let nodes = &basis.grid.nodes;
    let mut moments: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&rho| {
            let mut out = vec![0.0; channels.len()];
            if rho == 0.0 {
                return Ok(out);
            }
            for j in 0..k {
                let theta = j as f64 * dtheta;
                let v = f.value(rho, theta);
                if !v.is_finite() {
                    return Err(ForwardError::NonFiniteSource { rho, theta });
                }
                for (o, c) in out.iter_mut().zip(&channels) {
                    *o += rho * v * c.angular(theta) * dtheta;
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    if nodes[0] == 0.0 {
        let x = [nodes[1], nodes[2], nodes[3]];
        let l = [
            x[1] * x[2] / ((x[0] - x[1]) * (x[0] - x[2])),
            x[0] * x[2] / ((x[1] - x[0]) * (x[1] - x[2])),
            x[0] * x[1] / ((x[2] - x[0]) * (x[2] - x[1])),
        ];
        let hub: Vec<f64> = (0..channels.len()).map(|ci| (0..3).map(|i| l[i] * moments[i + 1][ci]).sum()).collect();
        moments[0] = hub;
    }
    Ok(moments)
}

/// Modal coefficients of `f` at the basis truncation:
/// `F0 = (1/2pi) int int f u rho`, `FC, FS = (1/pi) int int f u cos|sin(n theta) rho`.
pub fn project_source(f: &SourceField, basis: &ModalBasis) -> Result<ModalCoefficients, ForwardError> {
    let n_theta = basis.n_theta;
    let moments = angular_moments(f, basis, n_theta)?;
    let mut coeffs = ModalCoefficients::zeros(n_theta, basis.n_rad);
    for (ci, c) in Channel::all(n_theta).into_iter().enumerate() {
        for m in 1..=basis.n_rad {
            let u = &basis.pair(c.order(), m).values;
            let integral: f64 =
                basis.grid.weights.iter().zip(u).zip(&moments).map(|((w, u), mom)| w * u * mom[ci]).sum();
            coeffs.set(c, m, integral / c.angular_norm());
        }
    }
    Ok(coeffs)
}

/// Uniform polar grid: `rho_i = i R / (n_rho - 1)`, `theta_j = 2 pi j / n_theta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarGrid {
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
}

impl PolarGrid {
    pub fn uniform(radius: f64, n_rho: usize, n_theta: usize) -> Self {
        PolarGrid {
            rho: (0..n_rho).map(|i| radius * i as f64 / (n_rho - 1) as f64).collect(),
            theta: (0..n_theta).map(|j| 2.0 * PI * j as f64 / n_theta as f64).collect(),
        }
    }

    pub fn rho_step(&self) -> f64 {
        self.rho[1] - self.rho[0]
    }

    pub fn theta_step(&self) -> f64 {
        2.0 * PI / self.theta.len() as f64
    }
}

/// Scalar field on a polar grid, `values[i][j]` at `(rho[i], theta[j])`.
#[derive(Clone, Debug, Serialize)]
pub struct PolarField {
    pub grid: PolarGrid,
    pub values: Vec<Vec<f64>>,
}

impl PolarField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Area-weighted `L2` norm (trapezoid in `rho`, uniform in `theta`).
    pub fn l2_norm(&self) -> f64 {
        self.l2_distance_to(|_, _| 0.0)
    }

    /// Area-weighted `L2` norm of `self - other`.
    pub fn l2_distance_to(&self, other: impl Fn(f64, f64) -> f64) -> f64 {
        let g = &self.grid;
        let dr = g.rho_step();
        let dt = g.theta_step();
        let last = g.rho.len() - 1;
        let mut s = 0.0;
        for (i, &r) in g.rho.iter().enumerate() {
            let w = if i == 0 || i == last { 0.5 * dr } else { dr };
            for (j, &t) in g.theta.iter().enumerate() {
                s += w * dt * r * (self.values[i][j] - other(r, t)).powi(2);
            }
        }
        s.sqrt()
    }
}

/// `F(rho, theta) = sum lambda F u (angular)`, the expansion of `rho f / gamma`.
pub fn expansion_at(coeffs: &ModalCoefficients, basis: &ModalBasis, rho: f64, theta: f64) -> f64 {
    let radial = basis.radial_values(rho);
    expansion_from_radial(coeffs, basis, &radial, theta)
}

fn expansion_from_radial(coeffs: &ModalCoefficients, basis: &ModalBasis, radial: &[Vec<f64>], theta: f64) -> f64 {
    let mut s = 0.0;
    for c in Channel::all(coeffs.n_theta) {
        let a = c.angular(theta);
        for m in 1..=coeffs.n_rad {
            let f = coeffs.get(c, m);
            if f != 0.0 {
                s += basis.pair(c.order(), m).lambda * f * radial[c.order()][m - 1] * a;
            }
        }
    }
    s
}

/// Reconstructed load `f = gamma F / rho` at one point (0 at the hub).
pub fn reconstruct_at(coeffs: &ModalCoefficients, basis: &ModalBasis, rho: f64, theta: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    basis.params.linear_mass_density_unchecked(rho) * expansion_at(coeffs, basis, rho, theta) / rho
}

/// Reconstructed load on `grid`.
pub fn reconstruct_field_from_coeffs(
    coeffs: &ModalCoefficients,
    basis: &ModalBasis,
    grid: &PolarGrid,
) -> Result<PolarField, ForwardError> {
    check_truncation(coeffs, basis)?;
    let values = grid
        .rho
        .par_iter()
        .map(|&rho| {
            if rho <= 0.0 {
                return vec![0.0; grid.theta.len()];
            }
            let radial = basis.radial_values(rho);
            let scale = basis.params.linear_mass_density_unchecked(rho) / rho;
            grid.theta.iter().map(|&t| scale * expansion_from_radial(coeffs, basis, &radial, t)).collect()
        })
        .collect();
    Ok(PolarField { grid: grid.clone(), values })
}

pub(crate) fn check_truncation(coeffs: &ModalCoefficients, basis: &ModalBasis) -> Result<(), ForwardError> {
    if coeffs.n_theta > basis.n_theta || coeffs.n_rad > basis.n_rad {
        Err(ForwardError::Truncation {
            coeff_theta: coeffs.n_theta,
            coeff_rad: coeffs.n_rad,
            basis_theta: basis.n_theta,
            basis_rad: basis.n_rad,
        })
    } else {
        Ok(())
    }
}

/// `int int rho^2 f^2 / gamma drho dtheta`, the squared energy-space norm of
/// `rho f / gamma`, on the basis grid with `projection_angles` angles.
pub fn energy_norm_squared(f: &SourceField, basis: &ModalBasis, angles: usize) -> f64 {
    let dtheta = 2.0 * PI / angles as f64;
    basis
        .grid
        .nodes
        .iter()
        .zip(&basis.grid.weights)
        .map(|(&r, w)| {
            let ring: f64 = (0..angles).map(|j| f.value(r, j as f64 * dtheta).powi(2)).sum::<f64>() * dtheta;
            w * r * r * ring / basis.params.linear_mass_density_unchecked(r)
        })
        .sum()
}

/// Relative `L2` error of projecting `f` onto the truncated basis, measured
/// on the reconstructed load over `grid`.
pub fn projection_error(f: &SourceField, basis: &ModalBasis, grid: &PolarGrid) -> Result<f64, ForwardError> {
    let coeffs = project_source(f, basis)?;
    let field = reconstruct_field_from_coeffs(&coeffs, basis, grid)?;
    let exact = PolarField {
        grid: grid.clone(),
        values: grid.rho.iter().map(|&r| grid.theta.iter().map(|&t| f.value(r, t)).collect()).collect(),
    };
    Ok(field.l2_distance_to(|r, t| f.value(r, t)) / exact.l2_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WebParameters;

    fn basis() -> ModalBasis {
        let p = WebParameters { hub_mass: 0.0, ..WebParameters::demo() };
        ModalBasis::build(&p, 513, 4, 6).unwrap()
    }

    #[test]
    fn zero_source_projects_to_zero() {
        let b = basis();
        assert!(project_source(&SourceField::zero(), &b).unwrap().is_zero());
    }

    #[test]
    fn single_harmonic_lands_in_one_channel() {
        let b = basis();
        let f = SourceField::function("h(rho) cos 3 theta", |r, t| r * (1.0 - r) * (3.0 * t).cos());
        let c = project_source(&f, &b).unwrap();
        for ch in Channel::all(4) {
            for m in 1..=6 {
                let v = c.get(ch, m);
                if ch != Channel::Cos(3) {
                    assert!(v.abs() < 1e-14, "{ch:?} {m}: {v}");
                }
            }
        }
        assert!(c.get(Channel::Cos(3), 1).abs() > 1e-4);
    }

    #[test]
    fn eigenfunction_source_gives_unit_coefficient() {
        let b = basis();
        let k = 3;
        let pair = b.pair(0, k).clone();
        let knots = b.grid.nodes.clone();
        let params = b.params;
        let f = SourceField::function("gamma u / rho", move |r, _| {
            let u = crate::spline::stencil(&knots, r).apply(&pair.values, &pair.curvature);
            if r == 0.0 {
                0.0
            } else {
                params.linear_mass_density_unchecked(r) * u / r
            }
        });
        let c = project_source(&f, &b).unwrap();
        // rho f = gamma u stays finite at the hub, where f itself blows up
        for m in 1..=6 {
            let expected = if m == k { 1.0 / b.pair(0, k).lambda } else { 0.0 };
            assert!((c.get(Channel::Axial, m) - expected).abs() < 1e-8 / b.pair(0, k).lambda, "m = {m}");
        }
    }

    #[test]
    fn one_term_series() {
        let b = basis();
        let mut c = ModalCoefficients::zeros(4, 6);
        c.set(Channel::Cos(1), 1, 1.0);
        let (r, t): (f64, f64) = (0.4, 0.3);
        let expected = b.pair(1, 1).lambda * b.value(1, 1, r) * t.cos() * b.params.linear_mass_density_unchecked(r) / r;
        assert!((reconstruct_at(&c, &b, r, t) - expected).abs() < 1e-12 * expected.abs());
        let g = PolarGrid::uniform(1.0, 5, 4);
        let field = reconstruct_field_from_coeffs(&ModalCoefficients::zeros(4, 6), &b, &g).unwrap();
        assert_eq!(field.max_abs(), 0.0);
    }
}
