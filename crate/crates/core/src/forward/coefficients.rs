//! Modal load coefficients `F_m^(0)`, `F_Cm^(n)`, `F_Sm^(n)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::spectral::ModalBasis;

/// Angular channel of a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Axial,
    Cos(usize),
    Sin(usize),
}

impl Channel {
    pub fn order(&self) -> usize {
        match *self {
            Channel::Axial => 0,
            Channel::Cos(n) | Channel::Sin(n) => n,
        }
    }

    /// Angular factor `1`, `cos(n theta)` or `sin(n theta)`.
    pub fn angular(&self, theta: f64) -> f64 {
        match *self {
            Channel::Axial => 1.0,
            Channel::Cos(n) => (n as f64 * theta).cos(),
            Channel::Sin(n) => (n as f64 * theta).sin(),
        }
    }

    /// `int_0^{2 pi}` of the squared angular factor.
    pub fn angular_norm(&self) -> f64 {
        match self {
            Channel::Axial => 2.0 * PI,
            _ => PI,
        }
    }

    /// Channels `Axial, Cos(1), Sin(1), ..., Cos(n_theta), Sin(n_theta)`.
    pub fn all(n_theta: usize) -> Vec<Channel> {
        std::iter::once(Channel::Axial).chain((1..=n_theta).flat_map(|n| [Channel::Cos(n), Channel::Sin(n)])).collect()
    }

    pub fn label(&self) -> String {
        match self {
            Channel::Axial => "a0".into(),
            Channel::Cos(n) => format!("a{n}"),
            Channel::Sin(n) => format!("b{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModalCoefficients {
    pub n_theta: usize,
    pub n_rad: usize,
    /// `f0[m - 1]`.
    pub f0: Vec<f64>,
    /// `fc[n - 1][m - 1]` for `n = 1..=n_theta`.
    pub fc: Vec<Vec<f64>>,
    pub fs: Vec<Vec<f64>>,
}

impl ModalCoefficients {
    pub fn zeros(n_theta: usize, n_rad: usize) -> Self {
        ModalCoefficients {
            n_theta,
            n_rad,
            f0: vec![0.0; n_rad],
            fc: vec![vec![0.0; n_rad]; n_theta],
            fs: vec![vec![0.0; n_rad]; n_theta],
        }
    }

    pub fn get(&self, channel: Channel, m: usize) -> f64 {
        match channel {
            Channel::Axial => self.f0[m - 1],
            Channel::Cos(n) => self.fc[n - 1][m - 1],
            Channel::Sin(n) => self.fs[n - 1][m - 1],
        }
    }

    pub fn set(&mut self, channel: Channel, m: usize, value: f64) {
        match channel {
            Channel::Axial => self.f0[m - 1] = value,
            Channel::Cos(n) => self.fc[n - 1][m - 1] = value,
            Channel::Sin(n) => self.fs[n - 1][m - 1] = value,
        }
    }

    /// Every coefficient in channel order, `m` fastest.
    pub fn flatten(&self) -> Vec<f64> {
        Channel::all(self.n_theta)
            .into_iter()
            .flat_map(|c| (1..=self.n_rad).map(move |m| (c, m)))
            .map(|(c, m)| self.get(c, m))
            .collect()
    }

    /// Copy restricted to the first `n_theta` orders and `n_rad` modes.
    pub fn truncated(&self, n_theta: usize, n_rad: usize) -> Self {
        let n_theta = n_theta.min(self.n_theta);
        let n_rad = n_rad.min(self.n_rad);
        ModalCoefficients {
            n_theta,
            n_rad,
            f0: self.f0[..n_rad].to_vec(),
            fc: self.fc[..n_theta].iter().map(|r| r[..n_rad].to_vec()).collect(),
            fs: self.fs[..n_theta].iter().map(|r| r[..n_rad].to_vec()).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &Vec<f64>| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        ModalCoefficients {
            n_theta: self.n_theta,
            n_rad: self.n_rad,
            f0: s(&self.f0),
            fc: self.fc.iter().map(s).collect(),
            fs: self.fs.iter().map(s).collect(),
        }
    }

    /// `|self - truth| / |truth|` over all coefficients (Euclidean norms).
    pub fn relative_error(&self, truth: &ModalCoefficients) -> f64 {
        let a = self.flatten();
        let b = truth.flatten();
        let diff: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
        if norm == 0.0 {
            diff
        } else {
            diff / norm
        }
    }

    /// Weighted square sum `2 pi sum lambda F0^2 + pi sum lambda (FC^2 + FS^2)`,
    /// equal to the squared norm of `rho f / gamma` in the energy space.
    pub fn weighted_square_sum(&self, basis: &ModalBasis) -> f64 {
        Channel::all(self.n_theta)
            .into_iter()
            .flat_map(|c| (1..=self.n_rad).map(move |m| (c, m)))
            .map(|(c, m)| c.angular_norm() * basis.pair(c.order(), m).lambda * self.get(c, m).powi(2))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.flatten().iter().all(|v| *v == 0.0)
    }
}
