//! Displacement series `U(rho, theta, t)` and synthetic ring measurements.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::coefficients::{Channel, ModalCoefficients};
use super::duhamel::DuhamelSeries;
use super::project::check_truncation;
use super::time::TimeProfile;
use crate::error::ForwardError;
use crate::spectral::ModalBasis;

/// Displacement of the web under `g(t) f` with `f` given by its coefficients.
pub struct DisplacementField<'a> {
    pub basis: &'a ModalBasis,
    pub coeffs: &'a ModalCoefficients,
    pub g: &'a TimeProfile,
    /// `responses[n][m - 1]`.
    responses: Vec<Vec<DuhamelSeries>>,
}

impl<'a> DisplacementField<'a> {
    pub fn new(basis: &'a ModalBasis, coeffs: &'a ModalCoefficients, g: &'a TimeProfile) -> Result<Self, ForwardError> {
        check_truncation(coeffs, basis)?;
        let responses = (0..=coeffs.n_theta)
            .map(|n| {
                (1..=coeffs.n_rad)
                    .map(|m| DuhamelSeries::new(basis.pair(n, m).lambda, g))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DisplacementField { basis, coeffs, g, responses })
    }

    pub fn response(&self, n: usize, m: usize) -> &DuhamelSeries {
        &self.responses[n][m - 1]
    }

    /// Radial mode values at `rho`, shared by every query on that circle.
    pub fn radial_values(&self, rho: f64) -> Vec<Vec<f64>> {
        self.basis.radial_values(rho)
    }

    /// `U` at `theta` and grid time `t_k` from precomputed radial values.
    pub fn value_from_radial(&self, radial: &[Vec<f64>], theta: f64, k: usize) -> f64 {
        self.sum(radial, theta, |s| s.at_index(k))
    }

    fn sum(&self, radial: &[Vec<f64>], theta: f64, time: impl Fn(&DuhamelSeries) -> f64) -> f64 {
        let mut total = 0.0;
        for c in Channel::all(self.coeffs.n_theta) {
            let n = c.order();
            let a = c.angular(theta);
            for m in 1..=self.coeffs.n_rad {
                let f = self.coeffs.get(c, m);
                if f != 0.0 {
                    total += time(&self.responses[n][m - 1]) * f * a * radial[n][m - 1];
                }
            }
        }
        total
    }

    /// `U(rho, theta, t)` for any point of `[0, R] x [0, 2 pi] x [0, duration]`.
    pub fn at(&self, rho: f64, theta: f64, t: f64) -> Result<f64, ForwardError> {
        let radius = self.basis.params.radius;
        let duration = self.g.duration();
        let out = || ForwardError::QueryOutOfRange { rho, theta, t, radius, duration };
        let eps = 1e-12;
        if !(rho >= 0.0 && rho <= radius * (1.0 + eps) && (0.0..=2.0 * PI + eps).contains(&theta)) {
            return Err(out());
        }
        let mut times = Vec::with_capacity(self.coeffs.n_theta + 1);
        for row in &self.responses {
            let mut r = Vec::with_capacity(row.len());
            for s in row {
                r.push(s.at(t, self.g).ok_or_else(out)?);
            }
            times.push(r);
        }
        let radial = self.radial_values(rho.min(radius));
        let mut total = 0.0;
        for c in Channel::all(self.coeffs.n_theta) {
            let n = c.order();
            let a = c.angular(theta);
            for m in 1..=self.coeffs.n_rad {
                total += times[n][m - 1] * self.coeffs.get(c, m) * a * radial[n][m - 1];
            }
        }
        Ok(total)
    }
}

/// `U` at each query `(rho, theta, t)`.
pub fn evaluate_displacement(
    basis: &ModalBasis,
    coeffs: &ModalCoefficients,
    g: &TimeProfile,
    queries: &[(f64, f64, f64)],
) -> Result<Vec<f64>, ForwardError> {
    let field = DisplacementField::new(basis, coeffs, g)?;
    queries.iter().map(|&(r, th, t)| field.at(r, th, t)).collect()
}

/// Sensor layout: radii, number of uniform angles, additive noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Standard deviation of the additive Gaussian noise.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

impl RingSpec {
    /// Three radii around `R / 6` and enough angles for `n_theta`.
    pub fn default_for(radius: f64, n_theta: usize) -> Self {
        let r = radius / 6.0;
        RingSpec { radii: vec![0.9 * r, r, 1.1 * r], angles: 2 * n_theta + 3, noise: 0.0, seed: 0 }
    }

    pub fn angle_values(&self) -> Vec<f64> {
        (0..self.angles).map(|j| 2.0 * PI * j as f64 / self.angles as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementMeta {
    pub n_theta: usize,
    pub n_rad: usize,
    pub noise: f64,
    pub seed: u64,
    pub dt: f64,
    pub params_hash: String,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Displacement samples `u[radius][angle][time]` on the sensor ring.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMeasurement {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    pub u: Vec<Vec<Vec<f64>>>,
    pub meta: MeasurementMeta,
}

impl RingMeasurement {
    pub fn times(&self) -> Vec<f64> {
        (0..self.steps).map(|k| k as f64 * self.dt).collect()
    }

    pub fn duration(&self) -> f64 {
        (self.steps - 1) as f64 * self.dt
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().flatten().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// Sample the displacement on the ring lattice at every time of `g`'s grid,
/// then add noise if requested. Radii outside `(0, R/2)` are accepted with a
/// warning.
pub fn synthesize_ring(
    basis: &ModalBasis,
    coeffs: &ModalCoefficients,
    g: &TimeProfile,
    spec: &RingSpec,
) -> Result<RingMeasurement, ForwardError> {
    let radius = basis.params.radius;
    if spec.radii.is_empty() {
        return Err(ForwardError::Ring("no sensor radii".into()));
    }
    let need = 2 * coeffs.n_theta + 1;
    if spec.angles < need {
        return Err(ForwardError::Ring(format!(
            "{} angles cannot resolve n_theta = {} (need {need})",
            spec.angles, coeffs.n_theta
        )));
    }
    if !(spec.noise >= 0.0 && spec.noise.is_finite()) {
        return Err(ForwardError::Ring(format!("noise level must be >= 0, got {}", spec.noise)));
    }
    let mut warnings = Vec::new();
    for &r in &spec.radii {
        if !(r > 0.0 && r <= radius) {
            return Err(ForwardError::Ring(format!("radius {r} outside (0, {radius}]")));
        }
        if r >= 0.5 * radius {
            warnings.push(format!("sensor radius {r} is not inside (0, R/2) = (0, {})", 0.5 * radius));
        }
    }
    let field = DisplacementField::new(basis, coeffs, g)?;
    let angles = spec.angle_values();
    let steps = g.len();
    let mut u: Vec<Vec<Vec<f64>>> = spec
        .radii
        .iter()
        .map(|&r| {
            let radial = field.radial_values(r);
            angles.iter().map(|&th| (0..steps).map(|k| field.value_from_radial(&radial, th, k)).collect()).collect()
        })
        .collect();
    if spec.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise).map_err(|e| ForwardError::Ring(e.to_string()))?;
        for v in u.iter_mut().flatten().flatten() {
            *v += normal.sample(&mut rng);
        }
    }
    Ok(RingMeasurement {
        radii: spec.radii.clone(),
        angles,
        dt: g.dt,
        steps,
        u,
        meta: MeasurementMeta {
            n_theta: coeffs.n_theta,
            n_rad: coeffs.n_rad,
            noise: spec.noise,
            seed: spec.seed,
            dt: g.dt,
            params_hash: basis.params.digest(),
            warnings,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{project_source, SourceField, TimeShape};
    use crate::model::WebParameters;

    fn setup() -> (ModalBasis, TimeProfile) {
        let b = ModalBasis::build(&WebParameters::demo(), 257, 3, 4).unwrap();
        let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 1.0 }, 1.0, 0.01).unwrap();
        (b, g)
    }

    #[test]
    fn rim_and_onset_are_quiet() {
        let (b, g) = setup();
        let c = project_source(&SourceField::bump(0.3, 0.5, 0.1, 1.0), &b).unwrap();
        let q = [(1.0, 0.3, 0.5), (0.2, 1.0, 0.0), (0.5, 2.0, 0.7)];
        let v = evaluate_displacement(&b, &c, &g, &q).unwrap();
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], 0.0);
        assert!(v[2] != 0.0);
        assert!(matches!(
            evaluate_displacement(&b, &c, &g, &[(0.5, 0.0, 2.0)]),
            Err(ForwardError::QueryOutOfRange { .. })
        ));
    }

    #[test]
    fn noiseless_ring_equals_direct_evaluation() {
        let (b, g) = setup();
        let c = project_source(&SourceField::bump(0.3, 0.5, 0.1, 1.0), &b).unwrap();
        let spec = RingSpec { radii: vec![0.15, 0.6], angles: 8, noise: 0.0, seed: 1 };
        let m = synthesize_ring(&b, &c, &g, &spec).unwrap();
        assert_eq!(m.meta.warnings.len(), 1);
        let field = DisplacementField::new(&b, &c, &g).unwrap();
        for (i, &r) in m.radii.iter().enumerate() {
            for (j, &th) in m.angles.iter().enumerate() {
                for k in [0, 17, 100] {
                    assert_eq!(m.u[i][j][k], field.at(r, th, g.time(k)).unwrap());
                }
            }
        }
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let (b, g) = setup();
        let c = ModalCoefficients::zeros(3, 4);
        let spec = RingSpec { radii: vec![0.15], angles: 7, noise: 0.1, seed: 9 };
        let a = synthesize_ring(&b, &c, &g, &spec).unwrap();
        let again = synthesize_ring(&b, &c, &g, &spec).unwrap();
        assert_eq!(a, again);
        assert!(a.max_abs() > 0.0);
        let quiet = synthesize_ring(&b, &c, &g, &RingSpec { noise: 0.0, ..spec.clone() }).unwrap();
        assert_eq!(quiet.max_abs(), 0.0);
        assert!(synthesize_ring(&b, &c, &g, &RingSpec { angles: 5, ..spec }).is_err());
    }
}
