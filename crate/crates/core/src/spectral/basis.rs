//! The truncated modal basis `{u_m^(n)}` over all angular classes.

use rayon::prelude::*;
use serde::Serialize;

use super::grid::{inner_product_gamma, inner_product_gamma_m, liouville_length, GridKind, RadialGrid};
use super::solver::{normalize_pair, solve_radial, RadialEigenpair, SpectralOptions};
use crate::error::SpectralError;
use crate::model::WebParameters;
use crate::spline::{stencil, Stencil};

/// Default number of radial grid nodes.
pub const DEFAULT_NODES: usize = 2048;

#[derive(Clone, Debug)]
pub struct ModalBasis {
    pub params: WebParameters,
    pub grid: RadialGrid,
    pub n_theta: usize,
    pub n_rad: usize,
    /// `classes[n][m - 1]`.
    pub classes: Vec<Vec<RadialEigenpair>>,
    pub normalized: bool,
    pub j: f64,
}

impl ModalBasis {
    /// Solve every class `0..=n_theta` for `n_rad` modes on a Liouville grid.
    pub fn build(params: &WebParameters, nodes: usize, n_theta: usize, n_rad: usize) -> Result<Self, SpectralError> {
        let grid = RadialGrid::build(params, GridKind::Liouville, nodes)?;
        Self::build_on(params, grid, n_theta, n_rad, &SpectralOptions::default())
    }

    pub fn build_on(
        params: &WebParameters,
        grid: RadialGrid,
        n_theta: usize,
        n_rad: usize,
        options: &SpectralOptions,
    ) -> Result<Self, SpectralError> {
        let params = params.validate()?;
        let classes = (0..=n_theta)
            .into_par_iter()
            .map(|n| solve_radial(&params, &grid, n, n_rad, options))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModalBasis { params, j: liouville_length(&params)?, grid, n_theta, n_rad, classes, normalized: true })
    }

    pub fn pair(&self, n: usize, m: usize) -> &RadialEigenpair {
        &self.classes[n][m - 1]
    }

    pub fn eigenvalues(&self, n: usize) -> Vec<f64> {
        self.classes[n].iter().map(|p| p.lambda).collect()
    }

    /// Angular frequencies `sqrt(lambda)` of class `n`.
    pub fn frequencies(&self, n: usize) -> Vec<f64> {
        self.classes[n].iter().map(|p| p.lambda.sqrt()).collect()
    }

    pub fn locate(&self, rho: f64) -> Stencil {
        stencil(&self.grid.nodes, rho)
    }

    /// `u_m^(n)(rho)` by cubic interpolation.
    pub fn value(&self, n: usize, m: usize, rho: f64) -> f64 {
        let p = self.pair(n, m);
        self.locate(rho).apply(&p.values, &p.curvature)
    }

    /// All radial mode values at `rho`, indexed `[n][m - 1]`.
    pub fn radial_values(&self, rho: f64) -> Vec<Vec<f64>> {
        let s = self.locate(rho);
        self.classes.iter().map(|c| c.iter().map(|p| s.apply(&p.values, &p.curvature)).collect()).collect()
    }

    /// Class scalar product of two sampled radial functions.
    pub fn inner_product(&self, n: usize, h1: &[f64], h2: &[f64]) -> Result<f64, SpectralError> {
        if n == 0 {
            inner_product_gamma_m(h1, h2, &self.params, &self.grid)
        } else {
            inner_product_gamma(h1, h2, &self.params, &self.grid)
        }
    }

    /// Largest deviations from `lambda_i <u_m, u_i> = delta_mi` over all classes.
    pub fn orthonormality(&self) -> Result<Orthonormality, SpectralError> {
        let mut report = Orthonormality { max_off_diagonal: 0.0, max_diagonal_error: 0.0 };
        for (n, class) in self.classes.iter().enumerate() {
            for a in class {
                for b in class {
                    let v = self.inner_product(n, &a.values, &b.values)? * b.lambda;
                    if a.m == b.m {
                        report.max_diagonal_error = report.max_diagonal_error.max((v - 1.0).abs());
                    } else {
                        report.max_off_diagonal = report.max_off_diagonal.max(v.abs());
                    }
                }
            }
        }
        Ok(report)
    }

    /// Largest relative ODE residual over the basis.
    pub fn max_residual(&self) -> f64 {
        self.classes.iter().flatten().map(|p| p.residual).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Orthonormality {
    pub max_off_diagonal: f64,
    pub max_diagonal_error: f64,
}

/// Rescale raw eigenpairs to `lambda <u, u> = 1` with the sign convention
/// applied, producing a basis. Classes must all hold the same number of modes.
pub fn normalize_basis(
    raw: Vec<Vec<RadialEigenpair>>,
    params: &WebParameters,
    grid: RadialGrid,
) -> Result<ModalBasis, SpectralError> {
    let params = params.validate()?;
    let mut classes = raw;
    for class in classes.iter_mut() {
        for pair in class.iter_mut() {
            if pair.values.len() != grid.len() {
                return Err(SpectralError::GridMismatch { got: pair.values.len(), expected: grid.len() });
            }
            normalize_pair(pair, &params, &grid)?;
        }
    }
    let n_theta = classes.len().saturating_sub(1);
    let n_rad = classes.iter().map(|c| c.len()).min().unwrap_or(0);
    Ok(ModalBasis { params, j: liouville_length(&params)?, grid, n_theta, n_rad, classes, normalized: true })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GapEntry {
    pub n: usize,
    /// `min_m (sqrt(lambda_{m+1}) - sqrt(lambda_m))`.
    pub min_gap: f64,
    /// Lower index `m` of the narrowest gap.
    pub at_m: usize,
}

/// Per-class minimum gap of the square-root spectrum. Classes with fewer than
/// two modes are left out.
pub fn spectrum_gap_diagnostic(basis: &ModalBasis) -> Vec<GapEntry> {
    basis
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() >= 2)
        .map(|(n, c)| {
            let (at_m, min_gap) = c
                .windows(2)
                .map(|w| (w[0].m, w[1].lambda.sqrt() - w[0].lambda.sqrt()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            GapEntry { n, min_gap, at_m }
        })
        .collect()
}

/// Smallest gap over every class, if any class has two modes.
pub fn min_gap(basis: &ModalBasis) -> Option<f64> {
    spectrum_gap_diagnostic(basis).iter().map(|g| g.min_gap).min_by(f64::total_cmp)
}
