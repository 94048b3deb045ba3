//! Small shared numerical kernels: composite quadrature, Fejér and
//! Gauss–Chebyshev rules, finite differences, dense solves and regression.

use crate::{Error, Result};

/// Composite trapezoid rule on a uniform grid.
pub fn trapezoid_uniform(y: &[f64], dx: f64) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.5 * (y[0] + y[n - 1]);
    for v in &y[1..n - 1] {
        sum += *v;
    }
    sum * dx
}

/// Composite Simpson rule on a uniform grid; falls back to a trapezoid panel
/// at the far end when the interval count is odd.
pub fn simpson_uniform(y: &[f64], dx: f64) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * dx * (y[0] + y[1]);
    }
    let pairs = (n - 1) / 2;
    let mut sum = 0.0;
    for p in 0..pairs {
        let i = 2 * p;
        sum += dx / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    }
    if (n - 1) % 2 == 1 {
        sum += 0.5 * dx * (y[n - 2] + y[n - 1]);
    }
    sum
}

/// Cumulative trapezoid integral; entry `i` approximates the integral from
/// the first grid point to the `i`-th.
pub fn cumtrapz_uniform(y: &[f64], dx: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..y.len() {
        acc += 0.5 * dx * (y[i - 1] + y[i]);
        out.push(acc);
    }
    out
}

/// Fejér's first rule on `[-1, 1]`: `n` open nodes, positive weights summing
/// to 2, exact for polynomials of degree `< n`.
pub fn fejer1(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 1..=n {
        let theta = (2 * j - 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
        let mut s = 0.0;
        for m in 1..=(n / 2) {
            s += (2.0 * m as f64 * theta).cos() / ((4 * m * m - 1) as f64);
        }
        nodes.push(theta.cos());
        weights.push(2.0 / n as f64 * (1.0 - 2.0 * s));
    }
    (nodes, weights)
}

/// Gauss–Chebyshev rule of the second kind: integrates
/// `f(t) * sqrt(1 - t^2)` over `[-1, 1]` exactly for `f` of degree
/// `<= 2n - 1`. Returns `(nodes, weights)` with the weight factor folded in.
pub fn gauss_chebyshev2(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 1..=n {
        let theta = j as f64 * std::f64::consts::PI / (n + 1) as f64;
        nodes.push(theta.cos());
        weights.push(std::f64::consts::PI / (n + 1) as f64 * theta.sin() * theta.sin());
    }
    (nodes, weights)
}

/// First derivative on a uniform grid, second order: centered in the
/// interior, one-sided three-point at the ends.
pub fn d1_grid(y: &[f64], dx: f64) -> Result<Vec<f64>> {
    let n = y.len();
    if n < 3 {
        return Err(Error::Domain("d1_grid: need at least 3 points".into()));
    }
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx);
    for i in 1..n - 1 {
        out[i] = (y[i + 1] - y[i - 1]) / (2.0 * dx);
    }
    out[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dx);
    Ok(out)
}

/// Second derivative on a uniform grid, second order: centered in the
/// interior, one-sided four-point at the ends.
pub fn d2_grid(y: &[f64], dx: f64) -> Result<Vec<f64>> {
    let n = y.len();
    if n < 4 {
        return Err(Error::Domain("d2_grid: need at least 4 points".into()));
    }
    let dx2 = dx * dx;
    let mut out = vec![0.0; n];
    out[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / dx2;
    for i in 1..n - 1 {
        out[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / dx2;
    }
    out[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / dx2;
    Ok(out)
}

/// Solve a small dense linear system by Gaussian elimination with partial
/// pivoting. Meant for fits of a handful of coefficients.
pub fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if a[i][k].abs() > a[piv][k].abs() {
                piv = i;
            }
        }
        if a[piv][k].abs() < 1e-300 {
            return Err(Error::Numerical("solve_dense: singular matrix".into()));
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            let (head, tail) = a.split_at_mut(i);
            for (row_i, row_k) in tail[0][k..n].iter_mut().zip(&head[k][k..n]) {
                *row_i -= f * row_k;
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    Ok(x)
}

/// Least-squares polynomial fit `y ≈ c0 + c1 x + ... + c_deg x^deg`.
/// With `xs.len() == deg + 1` this is plain interpolation.
pub fn fit_poly(xs: &[f64], ys: &[f64], deg: usize) -> Result<Vec<f64>> {
    assert_eq!(xs.len(), ys.len());
    let m = deg + 1;
    // Normal equations; fine at the tiny degrees used here.
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut pow = vec![1.0; 2 * m - 1];
        for k in 1..2 * m - 1 {
            pow[k] = pow[k - 1] * x;
        }
        for i in 0..m {
            for j in 0..m {
                ata[i][j] += pow[i + j];
            }
            atb[i] += pow[i] * y;
        }
    }
    solve_dense(&mut ata, &mut atb)
}

/// Ordinary least-squares line through `(xs, ys)`; returns `(slope, intercept)`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

/// Richardson extrapolation to zero for an even function sampled at `h` and
/// `2h`: error `O(h^4)`.
pub fn richardson_even_zero(at_h: f64, at_2h: f64) -> f64 {
    (4.0 * at_h - at_2h) / 3.0
}
