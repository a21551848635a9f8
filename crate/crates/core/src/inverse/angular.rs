//! Discrete Fourier separation of ring data into angular channels.

use std::f64::consts::PI;

use crate::error::InverseError;
use crate::forward::Channel;

/// Uniform angles `2 pi j / count`.
pub fn uniform_angles(count: usize) -> Vec<f64> {
    (0..count).map(|j| 2.0 * PI * j as f64 / count as f64).collect()
}

/// Channels `a0 = mean`, `a_n = (2/K) sum cos(n theta) v`, `b_n = (2/K) sum sin(n theta) v`
/// of `values[angle][time]` sampled at `K` uniform angles.
pub fn angular_decompose(values: &[Vec<f64>], n_theta: usize) -> Result<Vec<(Channel, Vec<f64>)>, InverseError> {
    let k = values.len();
    let need = 2 * n_theta + 1;
    if k < need {
        return Err(InverseError::Aliasing { angles: k, n_theta, need });
    }
    let len = values[0].len();
    if values.iter().any(|v| v.len() != len) {
        return Err(InverseError::Shape("angular rows have different lengths".into()));
    }
    let angles = uniform_angles(k);
    Ok(Channel::all(n_theta)
        .into_iter()
        .map(|c| {
            let scale = if c == Channel::Axial { 1.0 } else { 2.0 } / k as f64;
            let mut out = vec![0.0; len];
            for (row, &th) in values.iter().zip(&angles) {
                let a = scale * c.angular(th);
                out.iter_mut().zip(row).for_each(|(o, v)| *o += a * v);
            }
            (c, out)
        })
        .collect())
}

/// Inverse of [`angular_decompose`] at the given angles.
pub fn angular_recompose(channels: &[(Channel, Vec<f64>)], angles: &[f64]) -> Vec<Vec<f64>> {
    let len = channels.first().map(|c| c.1.len()).unwrap_or(0);
    angles
        .iter()
        .map(|&th| {
            let mut out = vec![0.0; len];
            for (c, s) in channels {
                let a = c.angular(th);
                out.iter_mut().zip(s).for_each(|(o, v)| *o += a * v);
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(k: usize, f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
        let s = [0.5, -1.0, 2.0];
        uniform_angles(k).iter().map(|&t| s.iter().map(|v| v * f(t)).collect()).collect()
    }

    fn only(channels: &[(Channel, Vec<f64>)], keep: &[(Channel, f64)]) {
        for (c, series) in channels {
            let w = keep.iter().find(|k| k.0 == *c).map(|k| k.1).unwrap_or(0.0);
            for (v, s) in series.iter().zip([0.5, -1.0, 2.0]) {
                assert!((v - w * s).abs() < 1e-12, "{c:?}");
            }
        }
    }

    #[test]
    fn pure_harmonics() {
        only(&angular_decompose(&ring(9, |t| (2.0 * t).cos()), 4).unwrap(), &[(Channel::Cos(2), 1.0)]);
        only(&angular_decompose(&ring(9, |_| 3.0), 4).unwrap(), &[(Channel::Axial, 3.0)]);
        only(
            &angular_decompose(&ring(11, |t| t.sin() + t.cos()), 5).unwrap(),
            &[(Channel::Cos(1), 1.0), (Channel::Sin(1), 1.0)],
        );
    }

    #[test]
    fn round_trip_and_aliasing_guard() {
        let data = ring(9, |t| 1.0 + (3.0 * t).sin() - 0.5 * (4.0 * t).cos());
        let channels = angular_decompose(&data, 4).unwrap();
        let back = angular_recompose(&channels, &uniform_angles(9));
        for (a, b) in back.iter().flatten().zip(data.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(angular_decompose(&data, 5), Err(InverseError::Aliasing { need: 11, .. })));
    }
}
