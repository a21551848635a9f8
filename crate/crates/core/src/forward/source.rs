//! Spatial load distributions `f(rho, theta)` (force per unit area).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Gaussian bump `amplitude * exp(-d^2 / (2 width^2))`, `d` the planar
/// distance to the center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub rho: f64,
    pub theta: f64,
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Bump {
    pub fn value(&self, rho: f64, theta: f64) -> f64 {
        let d2 = rho * rho + self.rho * self.rho - 2.0 * rho * self.rho * (theta - self.theta).cos();
        self.amplitude * (-d2.max(0.0) / (2.0 * self.width * self.width)).exp()
    }
}

type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum SourceField {
    Bump(Bump),
    /// Closure with a short description of its support.
    Function {
        f: Evaluator,
        support: String,
    },
    /// Samples on a polar grid (`values[i][j]` at `rho[i]`, `theta[j]`),
    /// interpolated bilinearly and periodically in angle.
    Sampled {
        rho: Vec<f64>,
        theta: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
    Sum(Vec<SourceField>),
}

impl fmt::Debug for SourceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.support())
    }
}

impl SourceField {
    pub fn bump(rho: f64, theta: f64, width: f64, amplitude: f64) -> Self {
        SourceField::Bump(Bump { rho, theta, width, amplitude })
    }

    pub fn function(support: &str, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        SourceField::Function { f: Arc::new(f), support: support.to_string() }
    }

    pub fn zero() -> Self {
        SourceField::Sum(Vec::new())
    }

    pub fn value(&self, rho: f64, theta: f64) -> f64 {
        match self {
            SourceField::Bump(b) => b.value(rho, theta),
            SourceField::Function { f, .. } => f(rho, theta),
            SourceField::Sampled { rho: r, theta: t, values } => sample_bilinear(r, t, values, rho, theta),
            SourceField::Sum(parts) => parts.iter().map(|p| p.value(rho, theta)).sum(),
        }
    }

    /// Human-readable support description.
    pub fn support(&self) -> String {
        match self {
            SourceField::Bump(b) => {
                format!("gaussian bump at (rho = {}, theta = {}), width {}", b.rho, b.theta, b.width)
            }
            SourceField::Function { support, .. } => support.clone(),
            SourceField::Sampled { rho, theta, .. } => format!("sampled on {} x {} polar grid", rho.len(), theta.len()),
            SourceField::Sum(parts) => {
                if parts.is_empty() {
                    "zero".into()
                } else {
                    parts.iter().map(|p| p.support()).collect::<Vec<_>>().join(" + ")
                }
            }
        }
    }
}

fn sample_bilinear(rho: &[f64], theta: &[f64], values: &[Vec<f64>], r: f64, t: f64) -> f64 {
    let i = rho.partition_point(|&x| x <= r).clamp(1, rho.len() - 1) - 1;
    let a = ((r - rho[i]) / (rho[i + 1] - rho[i])).clamp(0.0, 1.0);
    let nt = theta.len();
    let t = t.rem_euclid(2.0 * PI);
    let j = theta.partition_point(|&x| x <= t).max(1) - 1;
    let (t0, t1, j1) = if j + 1 < nt { (theta[j], theta[j + 1], j + 1) } else { (theta[j], theta[0] + 2.0 * PI, 0) };
    let b = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
    let row = |i: usize| values[i][j] * (1.0 - b) + values[i][j1] * b;
    row(i) * (1.0 - a) + row(i + 1) * a
}
