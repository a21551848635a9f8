//! Liouville change of variables and the radial grids built from it.

use serde::Serialize;

use crate::error::SpectralError;
use crate::model::WebParameters;
use crate::quadrature::GaussLegendre;

/// Smallest accepted number of grid nodes.
pub const MIN_RESOLUTION: usize = 64;

/// `sqrt(r / p)` with `p = C_rho T_rho`, `r = gamma`: the local slowness of
/// radial waves.
pub(crate) fn slowness(params: &WebParameters, rho: f64) -> f64 {
    (params.linear_mass_density_unchecked(rho) / params.stiffness(rho)).sqrt()
}

/// Normalization integral `J = int_0^R sqrt(r/p) drho`.
pub fn liouville_length(params: &WebParameters) -> Result<f64, SpectralError> {
    let gl = GaussLegendre::new(16);
    let j = gl.composite(0.0, params.radius, 64, |s| slowness(params, s));
    if !(j.is_finite() && j > 0.0) {
        return Err(SpectralError::NonIntegrable { rho: params.radius });
    }
    Ok(j)
}

/// Radii at uniformly spaced Liouville coordinates `x_k = k / (samples - 1)`.
fn liouville_map(params: &WebParameters, j: f64, samples: usize) -> Result<Vec<f64>, SpectralError> {
    let gl = GaussLegendre::new(8);
    let dx = j / (samples - 1) as f64;
    let mut rho = Vec::with_capacity(samples);
    rho.push(0.0);
    let mut current = 0.0_f64;
    for k in 1..samples {
        let start = current;
        let s0 = slowness(params, start);
        if !(s0.is_finite() && s0 > 0.0) {
            return Err(SpectralError::NonIntegrable { rho: start });
        }
        let mut end = (start + dx / s0).min(params.radius * 1.5);
        for _ in 0..30 {
            let travelled = gl.integrate(start, end, |s| slowness(params, s));
            let step = (travelled - dx) / slowness(params, end);
            end -= step;
            if step.abs() <= 1e-15 * params.radius {
                break;
            }
        }
        if !end.is_finite() {
            return Err(SpectralError::NonIntegrable { rho: start });
        }
        current = end;
        rho.push(if k + 1 == samples { params.radius } else { end });
    }
    let drift = (current - params.radius).abs();
    if drift > 1e-9 * params.radius {
        return Err(SpectralError::NonIntegrable { rho: current });
    }
    Ok(rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GridKind {
    /// Uniform in the Liouville coordinate.
    Liouville,
    /// Uniform in the radius.
    Uniform,
}

/// Radial nodes on `[0, R]` together with the mapping data `d rho / d x`
/// from a uniform computational coordinate `x` on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct RadialGrid {
    pub kind: GridKind,
    /// Radii of the nodes; `nodes[0] = 0`, last node at `R`.
    pub nodes: Vec<f64>,
    /// Radii of the cell midpoints.
    pub midpoints: Vec<f64>,
    pub jacobian: Vec<f64>,
    pub jacobian_mid: Vec<f64>,
    /// Step of the computational coordinate.
    pub step: f64,
    /// Trapezoid weights in `x` mapped to `rho`: `int phi drho ~ sum w_i phi_i`.
    pub weights: Vec<f64>,
    pub radius: f64,
}

impl RadialGrid {
    pub fn build(params: &WebParameters, kind: GridKind, count: usize) -> Result<Self, SpectralError> {
        match kind {
            GridKind::Liouville => Self::liouville(params, count),
            GridKind::Uniform => Self::uniform(params, count),
        }
    }

    /// Nodes uniformly spaced in the Liouville coordinate.
    pub fn liouville(params: &WebParameters, count: usize) -> Result<Self, SpectralError> {
        check_resolution(count)?;
        Self::liouville_unchecked(params, count)
    }

    pub(crate) fn liouville_unchecked(params: &WebParameters, count: usize) -> Result<Self, SpectralError> {
        let params = params.validate()?;
        let j = liouville_length(&params)?;
        let fine = liouville_map(&params, j, 2 * count - 1)?;
        let nodes: Vec<f64> = fine.iter().step_by(2).copied().collect();
        let midpoints: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
        let jac = |rho: f64| j / slowness(&params, rho);
        let jacobian: Vec<f64> = nodes.iter().map(|&r| jac(r)).collect();
        let jacobian_mid: Vec<f64> = midpoints.iter().map(|&r| jac(r)).collect();
        Ok(Self::assemble(GridKind::Liouville, nodes, midpoints, jacobian, jacobian_mid, params.radius))
    }

    /// Nodes uniformly spaced in the radius.
    pub fn uniform(params: &WebParameters, count: usize) -> Result<Self, SpectralError> {
        check_resolution(count)?;
        Self::uniform_unchecked(params, count)
    }

    pub(crate) fn uniform_unchecked(params: &WebParameters, count: usize) -> Result<Self, SpectralError> {
        let params = params.validate()?;
        let r = params.radius;
        let h = 1.0 / (count - 1) as f64;
        let mut nodes: Vec<f64> = (0..count).map(|i| r * i as f64 * h).collect();
        nodes[count - 1] = r;
        let midpoints = (0..count - 1).map(|i| r * (i as f64 + 0.5) * h).collect();
        Ok(Self::assemble(GridKind::Uniform, nodes, midpoints, vec![r; count], vec![r; count - 1], r))
    }

    fn assemble(
        kind: GridKind,
        nodes: Vec<f64>,
        midpoints: Vec<f64>,
        jacobian: Vec<f64>,
        jacobian_mid: Vec<f64>,
        radius: f64,
    ) -> Self {
        let n = nodes.len();
        let step = 1.0 / (n - 1) as f64;
        let weights =
            crate::quadrature::trapezoid_weights(n, step).into_iter().zip(&jacobian).map(|(w, j)| w * j).collect();
        RadialGrid { kind, nodes, midpoints, jacobian, jacobian_mid, step, weights, radius }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same kind of grid on the same web with `count` nodes, skipping the
    /// resolution floor.
    pub(crate) fn resampled(&self, params: &WebParameters, count: usize) -> Result<Self, SpectralError> {
        match self.kind {
            GridKind::Liouville => Self::liouville_unchecked(params, count),
            GridKind::Uniform => Self::uniform_unchecked(params, count),
        }
    }

    /// Smallest node spacing.
    pub fn min_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// `int_0^R phi drho` with the grid weights.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        self.weights.iter().zip(samples).map(|(w, s)| w * s).sum()
    }
}

fn check_resolution(count: usize) -> Result<(), SpectralError> {
    if count < MIN_RESOLUTION {
        Err(SpectralError::Resolution { got: count, min: MIN_RESOLUTION })
    } else {
        Ok(())
    }
}

/// Singular part of the canonical form for angular index `n >= 1`.
#[derive(Clone, Debug)]
pub struct SingularPart {
    pub n: usize,
    /// Length scale of the `n >= 1` classes. Built with `p = C_rho T_rho`,
    /// so it coincides with `J`.
    pub g: f64,
    /// `V(x) = J^2 n^2 C_theta T_theta / (rho gamma)` at nodes `1..`; the
    /// hub entry is infinite.
    pub potential: Vec<f64>,
}

impl SingularPart {
    /// `max_i x_i |V(x_i)|` over the nodes away from the hub, the constant in
    /// `|V(x)| <= C / x`.
    pub fn coulomb_constant(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.potential).skip(1).map(|(x, v)| x * v.abs()).fold(0.0, f64::max)
    }
}

/// Liouville transform of the radial problem onto `x in [0, 1]`.
#[derive(Clone, Debug)]
pub struct LiouvilleTransform {
    pub j: f64,
    /// Uniform Liouville coordinates.
    pub x: Vec<f64>,
    /// Radius at each `x`.
    pub rho: Vec<f64>,
    /// Impedance `A = sqrt(r p)` at each `x`.
    pub impedance: Vec<f64>,
    /// Canonical potential `q = a'' / a`, `a = sqrt(A)`.
    pub potential: Vec<f64>,
    pub singular: Option<SingularPart>,
}

impl LiouvilleTransform {
    /// `x(rho)` by linear interpolation of the tabulated map.
    pub fn x_of_rho(&self, rho: f64) -> f64 {
        let i = self.rho.partition_point(|&r| r <= rho).clamp(1, self.rho.len() - 1) - 1;
        let t = (rho - self.rho[i]) / (self.rho[i + 1] - self.rho[i]);
        self.x[i] + t * (self.x[i + 1] - self.x[i])
    }

    /// `a(x) = A(x)^{1/2}`, the factor relating the canonical variable
    /// `z = a u` to the radial eigenfunction.
    pub fn canonical_factor(&self) -> Vec<f64> {
        self.impedance.iter().map(|a| a.sqrt()).collect()
    }
}

/// Build the Liouville transform for angular index `n` on `resolution` nodes.
pub fn build_liouville_transform(
    params: &WebParameters,
    n: usize,
    resolution: usize,
) -> Result<LiouvilleTransform, SpectralError> {
    let grid = RadialGrid::liouville(params, resolution)?;
    let j = liouville_length(params)?;
    let h = grid.step;
    let x: Vec<f64> = (0..grid.len()).map(|i| i as f64 * h).collect();
    let impedance: Vec<f64> =
        grid.nodes.iter().map(|&r| (params.linear_mass_density_unchecked(r) * params.stiffness(r)).sqrt()).collect();
    let a: Vec<f64> = impedance.iter().map(|v| v.sqrt()).collect();
    let last = a.len() - 1;
    let mut potential = vec![0.0; a.len()];
    for i in 1..last {
        potential[i] = (a[i + 1] - 2.0 * a[i] + a[i - 1]) / (h * h * a[i]);
    }
    potential[0] = 2.0 * potential[1] - potential[2];
    potential[last] = 2.0 * potential[last - 1] - potential[last - 2];
    let singular = (n >= 1).then(|| SingularPart {
        n,
        g: j,
        potential: grid
            .nodes
            .iter()
            .map(|&r| {
                if r == 0.0 {
                    f64::INFINITY
                } else {
                    j * j * (n * n) as f64 * params.hoop_stiffness(r) / (r * params.linear_mass_density_unchecked(r))
                }
            })
            .collect(),
    });
    Ok(LiouvilleTransform { j, x, rho: grid.nodes, impedance, potential, singular })
}

/// `int_0^R gamma h1 h2 drho + M / (2 pi) h1(0) h2(0)`.
pub fn inner_product_gamma_m(
    h1: &[f64],
    h2: &[f64],
    params: &WebParameters,
    grid: &RadialGrid,
) -> Result<f64, SpectralError> {
    let base = inner_product_gamma(h1, h2, params, grid)?;
    Ok(base + params.hub_mass / (2.0 * std::f64::consts::PI) * h1[0] * h2[0])
}

/// `int_0^R gamma h1 h2 drho`.
pub fn inner_product_gamma(
    h1: &[f64],
    h2: &[f64],
    params: &WebParameters,
    grid: &RadialGrid,
) -> Result<f64, SpectralError> {
    for h in [h1, h2] {
        if h.len() != grid.len() {
            return Err(SpectralError::GridMismatch { got: h.len(), expected: grid.len() });
        }
    }
    Ok(grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .zip(h1.iter().zip(h2))
        .map(|((&r, w), (a, b))| w * params.linear_mass_density_unchecked(r) * a * b)
        .sum())
}
