//! Not-a-knot cubic splines on a fixed, strictly increasing set of knots.

/// Position of a query inside the knot sequence, reusable across every
/// spline sharing the same knots.
#[derive(Clone, Copy, Debug)]
pub struct Stencil {
    pub index: usize,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Stencil {
    /// Interpolated value given the nodal values and second derivatives.
    #[inline]
    pub fn apply(&self, values: &[f64], curvature: &[f64]) -> f64 {
        let i = self.index;
        self.a * values[i] + self.b * values[i + 1] + self.c * curvature[i] + self.d * curvature[i + 1]
    }
}

/// Locate `x` in `knots` (clamped to the end intervals).
pub fn stencil(knots: &[f64], x: f64) -> Stencil {
    let n = knots.len();
    debug_assert!(n >= 2);
    let i = knots.partition_point(|&k| k <= x).clamp(1, n - 1) - 1;
    let h = knots[i + 1] - knots[i];
    let a = (knots[i + 1] - x) / h;
    let b = 1.0 - a;
    // exact node values at the right end of each interval
    let (a, b) = if x == knots[i + 1] { (0.0, 1.0) } else { (a, b) };
    Stencil { index: i, a, b, c: (a * a * a - a) * h * h / 6.0, d: (b * b * b - b) * h * h / 6.0 }
}

/// Second derivatives of the not-a-knot cubic spline through `(knots, values)`.
/// Fewer than four knots fall back to a straight-line interpolant.
pub fn not_a_knot(knots: &[f64], values: &[f64]) -> Vec<f64> {
    let n = knots.len();
    assert_eq!(n, values.len());
    if n < 4 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = values.windows(2).zip(&h).map(|(v, h)| (v[1] - v[0]) / h).collect();
    // unknowns m[1..n-1], tridiagonal after eliminating m[0] and m[n-1]
    let k = n - 2;
    let mut lower = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut upper = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for r in 0..k {
        let i = r + 1;
        lower[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        upper[r] = h[i];
        rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
    }
    let (h0, h1) = (h[0], h[1]);
    let (ha, hb) = (h[n - 3], h[n - 2]);
    diag[0] += h0 + h0 * h0 / h1;
    upper[0] -= h0 * h0 / h1;
    diag[k - 1] += hb + hb * hb / ha;
    lower[k - 1] -= hb * hb / ha;
    let inner = solve_tridiagonal(&lower, &diag, &upper, &rhs);
    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&inner);
    m[0] = m[1] + h0 / h1 * (m[1] - m[2]);
    m[n - 1] = m[n - 2] + hb / ha * (m[n - 2] - m[n - 3]);
    m
}

/// Thomas algorithm; `lower[0]` and `upper[last]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = if n > 1 { upper[0] / beta } else { 0.0 };
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / beta;
        }
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let knots: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).powf(1.3)).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.3 * x * x * x;
        let vals: Vec<f64> = knots.iter().map(|&x| f(x)).collect();
        let m = not_a_knot(&knots, &vals);
        for j in 0..50 {
            let x = knots[0] + (knots[8] - knots[0]) * j as f64 / 49.0;
            let got = stencil(&knots, x).apply(&vals, &m);
            assert!((got - f(x)).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn node_values_are_exact() {
        let knots: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let vals: Vec<f64> = knots.iter().map(|x| (5.0 * x).sin()).collect();
        let m = not_a_knot(&knots, &vals);
        for (x, v) in knots.iter().zip(&vals) {
            assert_eq!(stencil(&knots, *x).apply(&vals, &m), *v);
        }
    }

    #[test]
    fn smooth_accuracy() {
        let n = 200;
        let knots: Vec<f64> = (0..n).map(|i| (i as f64 / (n - 1) as f64).powi(2)).collect();
        let vals: Vec<f64> = knots.iter().map(|x| (3.0 * x).cos()).collect();
        let m = not_a_knot(&knots, &vals);
        let x = 0.5123;
        assert!((stencil(&knots, x).apply(&vals, &m) - (3.0 * x).cos()).abs() < 1e-8);
    }
}
