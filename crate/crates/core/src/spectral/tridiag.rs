//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, vectors by
//! inverse iteration.

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
#[derive(Clone, Debug)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        SymTridiagonal { diag, off }
    }

    /// Reduce the pencil `K - lambda B` with diagonal positive `B` to the
    /// standard matrix `B^{-1/2} K B^{-1/2}`.
    pub fn from_pencil(k_diag: &[f64], k_off: &[f64], mass: &[f64]) -> Self {
        let s: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let diag = k_diag.iter().zip(&s).map(|(k, s)| k * s * s).collect();
        let off = k_off.iter().enumerate().map(|(i, k)| k * s[i] * s[i + 1]).collect();
        SymTridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - sigma - e2 / d;
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Option<f64> {
        if k >= self.len() {
            return None;
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = 1e-12 * (lo.abs().max(hi.abs())).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Eigenvector for an (accurate) eigenvalue by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self.bounds().1.abs().max(self.bounds().0.abs()).max(1.0);
        let guard = f64::EPSILON * scale;
        // deterministic start vector with components along every mode
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.73).sin()).collect();
        normalize(&mut v);
        for _ in 0..4 {
            let mut next = self.shifted_solve(lambda, &v, guard);
            normalize(&mut next);
            let change: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs().min((a + b).abs())).fold(0.0, f64::max);
            v = next;
            if change < 1e-14 {
                break;
            }
        }
        v
    }

    /// Solve `(T - sigma I) x = b` by Gaussian elimination with partial
    /// pivoting; pivots smaller than `guard` are replaced by `guard`.
    fn shifted_solve(&self, sigma: f64, b: &[f64], guard: f64) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            let p = self.diag[0] - sigma;
            return vec![b[0] / if p.abs() < guard { guard } else { p }];
        }
        // rows stored as (diag, upper, upper2) after pivoting, LAPACK gttrf style
        let mut dl: Vec<f64> = self.off.clone();
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - sigma).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut ipiv: Vec<bool> = vec![false; n - 1];
        let mut x = b.to_vec();
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < guard {
                    d[i] = guard;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                ipiv[i] = true;
            }
        }
        if d[n - 1].abs() < guard {
            d[n - 1] = guard;
        }
        // forward: apply L^{-1} P
        for i in 0..n - 1 {
            if ipiv[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= dl[i] * x[i];
        }
        // back substitution with U
        x[n - 1] /= d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
