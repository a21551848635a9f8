//! Time profiles `g(t)` of the load on a uniform grid.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::ForwardError;

/// Analytic shapes for `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeShape {
    /// `g(t) = amplitude`.
    Constant { amplitude: f64 },
    /// `g(t) = amplitude * exp(-rate t)`.
    Exponential { amplitude: f64, rate: f64 },
    /// `g(t) = amplitude (1 + cos(pi t / duration)) / 2` for `t < duration`, then 0.
    RaisedCosine { amplitude: f64, duration: f64 },
    /// `g(t) = amplitude sin(pi t / duration)` for `t < duration`, then 0.
    /// Vanishes at the onset.
    HalfSine { amplitude: f64, duration: f64 },
    /// `g(t) = amplitude sin(frequency t)`.
    Sine { amplitude: f64, frequency: f64 },
}

impl TimeShape {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TimeShape::Constant { amplitude } => amplitude,
            TimeShape::Exponential { amplitude, rate } => amplitude * (-rate * t).exp(),
            TimeShape::RaisedCosine { amplitude, duration } => {
                if t < duration {
                    0.5 * amplitude * (1.0 + (PI * t / duration).cos())
                } else {
                    0.0
                }
            }
            TimeShape::HalfSine { amplitude, duration } => {
                if t < duration {
                    amplitude * (PI * t / duration).sin()
                } else {
                    0.0
                }
            }
            TimeShape::Sine { amplitude, frequency } => amplitude * (frequency * t).sin(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            TimeShape::Constant { .. } => 0.0,
            TimeShape::Exponential { amplitude, rate } => -rate * amplitude * (-rate * t).exp(),
            TimeShape::RaisedCosine { amplitude, duration } => {
                if t < duration {
                    -0.5 * amplitude * PI / duration * (PI * t / duration).sin()
                } else {
                    0.0
                }
            }
            TimeShape::HalfSine { amplitude, duration } => {
                if t < duration {
                    amplitude * PI / duration * (PI * t / duration).cos()
                } else {
                    0.0
                }
            }
            TimeShape::Sine { amplitude, frequency } => amplitude * frequency * (frequency * t).cos(),
        }
    }

    fn check(&self) -> Result<(), ForwardError> {
        let (a, extra) = match *self {
            TimeShape::Constant { amplitude } => (amplitude, 1.0),
            TimeShape::Exponential { amplitude, rate } => (amplitude, if rate.is_finite() { 1.0 } else { f64::NAN }),
            TimeShape::RaisedCosine { amplitude, duration } | TimeShape::HalfSine { amplitude, duration } => {
                (amplitude, if duration > 0.0 { duration } else { f64::NAN })
            }
            TimeShape::Sine { amplitude, frequency } => (amplitude, if frequency.is_finite() { 1.0 } else { f64::NAN }),
        };
        if a.is_finite() && extra.is_finite() {
            Ok(())
        } else {
            Err(ForwardError::TimeProfile(format!("invalid shape parameters {self:?}")))
        }
    }
}

/// `g` sampled at `t_k = k dt`, `k = 0..len`, with its derivative.
#[derive(Clone, Debug)]
pub struct TimeProfile {
    pub dt: f64,
    pub samples: Vec<f64>,
    pub derivative: Vec<f64>,
    /// Analytic shape the samples came from, if any.
    pub shape: Option<TimeShape>,
}

/// Fewest samples a profile may have (the cubic interpolant needs four).
pub const MIN_SAMPLES: usize = 5;

impl TimeProfile {
    /// Sample `shape` on `[0, duration]` with step close to `dt`.
    pub fn from_shape(shape: TimeShape, duration: f64, dt: f64) -> Result<Self, ForwardError> {
        shape.check()?;
        if !(duration > 0.0 && dt > 0.0 && duration.is_finite()) {
            return Err(ForwardError::TimeProfile(format!("need duration > 0 and dt > 0, got {duration}, {dt}")));
        }
        let steps = ((duration / dt).ceil() as usize).max(MIN_SAMPLES - 1);
        Self::on_grid(shape, duration / steps as f64, steps + 1)
    }

    /// Exactly `len` samples of `shape` at spacing `dt`.
    pub fn on_grid(shape: TimeShape, dt: f64, len: usize) -> Result<Self, ForwardError> {
        shape.check()?;
        if !(dt > 0.0 && dt.is_finite()) || len < MIN_SAMPLES {
            return Err(ForwardError::TimeProfile(format!(
                "need dt > 0 and at least {MIN_SAMPLES} samples, got dt = {dt}, {len} samples"
            )));
        }
        let times = (0..len).map(|k| k as f64 * dt);
        Ok(TimeProfile {
            dt,
            samples: times.clone().map(|t| shape.value(t)).collect(),
            derivative: times.map(|t| shape.derivative(t)).collect(),
            shape: Some(shape),
        })
    }

    /// Tabulated profile; the derivative comes from finite differences.
    pub fn from_samples(dt: f64, samples: Vec<f64>) -> Result<Self, ForwardError> {
        if !(dt > 0.0) || samples.len() < MIN_SAMPLES {
            return Err(ForwardError::TimeProfile(format!(
                "need dt > 0 and at least {MIN_SAMPLES} samples, got dt = {dt}, {} samples",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(ForwardError::TimeProfile("non-finite sample".into()));
        }
        let derivative = differentiate(&samples, dt);
        Ok(TimeProfile { dt, samples, derivative, shape: None })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn g0(&self) -> f64 {
        self.samples[0]
    }

    pub fn duration(&self) -> f64 {
        (self.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |a, s| a.max(s.abs()))
    }

    /// Copy with every sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        TimeProfile {
            dt: self.dt,
            samples: self.samples.iter().map(|s| s * factor).collect(),
            derivative: self.derivative.iter().map(|s| s * factor).collect(),
            shape: None,
        }
    }
}

/// Fourth-order finite-difference derivative of uniformly spaced samples:
/// centered in the interior, one-sided on the two samples at each end.
pub fn differentiate(y: &[f64], dt: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= MIN_SAMPLES, "need at least {MIN_SAMPLES} samples");
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * dt);
    }
    let fwd0 = |y: &[f64]| (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * dt);
    let fwd1 = |y: &[f64]| (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * dt);
    d[0] = fwd0(&y[..5]);
    d[1] = fwd1(&y[..5]);
    let rev: Vec<f64> = y[n - 5..].iter().rev().copied().collect();
    d[n - 1] = -fwd0(&rev);
    d[n - 2] = -fwd1(&rev);
    d
}
