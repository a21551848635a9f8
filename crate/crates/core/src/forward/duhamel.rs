//! Modal response `theta(t) = sqrt(lambda) int_0^t sin(sqrt(lambda)(t - s)) g(s) ds`
//! by product integration: `g` is interpolated by local cubics and the
//! oscillatory kernel is integrated against each Lagrange basis polynomial.
//!
//! With `Z(t) = int_0^t exp(i w (t - s)) g(s) ds` and `w = sqrt(lambda)`,
//! `theta = w Im Z` and `Z(t_{j+1}) = exp(i w dt) Z(t_j) + sum_l W_l g_l`.

use num_complex::Complex64;

use super::time::TimeProfile;
use crate::error::ForwardError;
use crate::quadrature::GaussLegendre;

/// Stencil start for the interval `[t_j, t_{j+1}]` on a grid with `len` samples.
fn stencil_start(j: usize, len: usize) -> usize {
    j.saturating_sub(1).min(len - 4)
}

/// `int_0^delta exp(i w (delta - s)) L_l(s) ds` for the cubic Lagrange basis
/// through the nodes `offsets[l] * dt` (offsets relative to `t_j`).
fn local_weights(omega: f64, dt: f64, offsets: [f64; 4], delta: f64, gl: &GaussLegendre) -> [Complex64; 4] {
    let panels = ((omega * delta / 2.0).ceil() as usize).max(1);
    let mut w = [Complex64::new(0.0, 0.0); 4];
    let step = delta / panels as f64;
    for p in 0..panels {
        let lo = p as f64 * step;
        for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
            let s = lo + 0.5 * step * (x + 1.0);
            let kernel = Complex64::from_polar(0.5 * step * wt, omega * (delta - s));
            let u = s / dt;
            for l in 0..4 {
                let mut basis = 1.0;
                for k in 0..4 {
                    if k != l {
                        basis *= (u - offsets[k]) / (offsets[l] - offsets[k]);
                    }
                }
                w[l] += kernel * basis;
            }
        }
    }
    w
}

fn offsets(start: usize, j: usize) -> [f64; 4] {
    let base = start as f64 - j as f64;
    [base, base + 1.0, base + 2.0, base + 3.0]
}

/// Duhamel response of one mode, tabulated on the profile's time grid and
/// evaluable in between.
#[derive(Clone, Debug)]
pub struct DuhamelSeries {
    pub omega: f64,
    dt: f64,
    z: Vec<Complex64>,
}

impl DuhamelSeries {
    pub fn new(lambda: f64, g: &TimeProfile) -> Result<Self, ForwardError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ForwardError::NonPositiveEigenvalue(lambda));
        }
        let omega = lambda.sqrt();
        let dt = g.dt;
        let len = g.len();
        let gl = GaussLegendre::new(10);
        let first = local_weights(omega, dt, offsets(0, 0), dt, &gl);
        let interior = local_weights(omega, dt, [-1.0, 0.0, 1.0, 2.0], dt, &gl);
        let last = local_weights(omega, dt, offsets(len - 4, len - 2), dt, &gl);
        let rot = Complex64::from_polar(1.0, omega * dt);
        let mut z = Vec::with_capacity(len);
        z.push(Complex64::new(0.0, 0.0));
        for j in 0..len - 1 {
            let start = stencil_start(j, len);
            let w = if j == 0 {
                &first
            } else if j == len - 2 && start != j - 1 {
                &last
            } else {
                &interior
            };
            let mut next = rot * z[j];
            for (wl, gl) in w.iter().zip(&g.samples[start..start + 4]) {
                next += wl * gl;
            }
            z.push(next);
        }
        Ok(DuhamelSeries { omega, dt, z })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `theta(t_k)`.
    #[inline]
    pub fn at_index(&self, k: usize) -> f64 {
        self.omega * self.z[k].im
    }

    /// `theta'(t_k) = w^2 Re Z(t_k)`.
    pub fn rate_at_index(&self, k: usize) -> f64 {
        self.omega * self.omega * self.z[k].re
    }

    /// `theta(t)` for any `t` in the grid span; `None` outside it.
    pub fn at(&self, t: f64, g: &TimeProfile) -> Option<f64> {
        let len = self.len();
        let span = (len - 1) as f64 * self.dt;
        let snap = 1e-12 * self.dt;
        if !(t >= -snap && t <= span + snap) {
            return None;
        }
        let pos = (t / self.dt).max(0.0);
        let j = (pos.floor() as usize).min(len - 2);
        let delta = t - j as f64 * self.dt;
        if delta.abs() <= snap {
            return Some(self.at_index(j));
        }
        if (self.dt - delta).abs() <= snap {
            return Some(self.at_index(j + 1));
        }
        let start = stencil_start(j, len);
        let gl = GaussLegendre::new(10);
        let w = local_weights(self.omega, self.dt, offsets(start, j), delta, &gl);
        let mut z = Complex64::from_polar(1.0, self.omega * delta) * self.z[j];
        for (wl, gl) in w.iter().zip(&g.samples[start..start + 4]) {
            z += wl * gl;
        }
        Some(self.omega * z.im)
    }
}

/// `theta(t)` at each of `times` for eigenvalue `lambda`.
pub fn duhamel(lambda: f64, g: &TimeProfile, times: &[f64]) -> Result<Vec<f64>, ForwardError> {
    let series = DuhamelSeries::new(lambda, g)?;
    times
        .iter()
        .map(|&t| {
            series.at(t, g).ok_or(ForwardError::QueryOutOfRange {
                rho: f64::NAN,
                theta: f64::NAN,
                t,
                radius: f64::NAN,
                duration: g.duration(),
            })
        })
        .collect()
}
