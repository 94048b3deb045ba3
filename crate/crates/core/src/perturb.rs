//! The rescaling `rho = r*sqrt(2)*lambda` of the radial comparison equation,
//! the perturbation series `K = J(0) * sum eps^n v_n` built by variation of
//! parameters, uniform-bound measurements across a frequency sweep, the
//! kappa scan on the universal profile, and the half-bound certificate.

use crate::manifold::VolumeGeometry;
use crate::numerics::{cumtrapz_uniform, linear_regression};
use crate::odecmp::{solve_ivp, CoeffFn, OdeSolution, RadialCoeff, SingularIvp};
use crate::specialfun::{fundamental_pair, v0_profile, v0_profile_deriv};
use crate::{Error, Result};

/// The rescaled comparison problem
/// `K'' + ((n-1)/rho) K' + K = eps * k(eps * rho) * K'`
/// obtained from `J'' + g J' + 2 lambda^2 J = 0` by the exact substitution
/// `r = eps * rho`, `eps = 1/(sqrt(2) lambda)`.
pub struct RescaledProblem {
    pub n: u32,
    pub lambda: f64,
    pub epsilon: f64,
    pub rho_max: f64,
    /// The composed correction `rho -> k(eps * rho)`.
    pub k_at: CoeffFn,
    /// Measured sup of the composed correction on `[0, rho_max]`.
    pub k_sup: f64,
}

/// Rescale a catalog geometry at frequency `lambda` onto `[0, rho_max]`.
pub fn rescale(geometry: &VolumeGeometry, lambda: f64, rho_max: f64) -> Result<RescaledProblem> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("rescale: lambda = {lambda} <= 0")));
    }
    let epsilon = 1.0 / (std::f64::consts::SQRT_2 * lambda);
    let r_reach = epsilon * rho_max;
    if r_reach >= geometry.injectivity_radius() {
        return Err(Error::Domain(format!(
            "rescale: lambda = {lambda} too small, radius {r_reach} reaches past {}",
            geometry.injectivity_radius()
        )));
    }
    let geo = *geometry;
    let k_at: CoeffFn = Box::new(move |rho: f64| -geo.c_at(epsilon * rho));
    let mut k_sup = 0.0f64;
    for i in 0..=1000 {
        k_sup = k_sup.max(k_at(rho_max * i as f64 / 1000.0).abs());
    }
    Ok(RescaledProblem {
        n: geometry.dimension(),
        lambda,
        epsilon,
        rho_max,
        k_at,
        k_sup,
    })
}

impl RescaledProblem {
    /// A problem with a hand-picked correction profile, for oracles.
    pub fn synthetic(n: u32, epsilon: f64, k_at: CoeffFn, rho_max: f64) -> Self {
        let mut k_sup = 0.0f64;
        for i in 0..=1000 {
            k_sup = k_sup.max(k_at(rho_max * i as f64 / 1000.0).abs());
        }
        RescaledProblem {
            n,
            lambda: 1.0 / (std::f64::consts::SQRT_2 * epsilon),
            epsilon,
            rho_max,
            k_at,
            k_sup,
        }
    }

    /// Direct fourth-order solve of the rescaled equation on a grid of
    /// `grid` steps over `[0, rho_max]`.
    pub fn direct_solve(&self, grid: usize) -> Result<OdeSolution> {
        let eps = self.epsilon;
        let k_vals = self.sample_k();
        let rho_max = self.rho_max;
        let m = k_vals.len() - 1;
        let ivp = SingularIvp {
            g: RadialCoeff::with_pole(
                (self.n - 1) as f64,
                // dense linear interpolation of the sampled correction;
                // keeps the coefficient cheap inside the RK stages
                Box::new(move |rho: f64| {
                    let t = (rho / rho_max * m as f64).clamp(0.0, m as f64 - 1e-9);
                    let j = t.floor() as usize;
                    let frac = t - j as f64;
                    -eps * ((1.0 - frac) * k_vals[j] + frac * k_vals[j + 1])
                }),
            ),
            h: Box::new(|_| 1.0),
            forcing: Box::new(|_| 0.0),
            u0: 1.0,
            du0: 0.0,
        };
        solve_ivp(&ivp, self.rho_max / grid as f64, self.rho_max)
    }

    fn sample_k(&self) -> Vec<f64> {
        let m = 16384;
        (0..=m)
            .map(|i| (self.k_at)(self.rho_max * i as f64 / m as f64))
            .collect()
    }
}

/// The perturbation coefficients `v_0 .. v_N` with their derivatives and
/// sup-norms on a shared grid.
pub struct PerturbationSeries {
    pub n: u32,
    pub epsilon: f64,
    pub rho: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    pub dv: Vec<Vec<f64>>,
    pub sup_v: Vec<f64>,
    pub sup_dv: Vec<f64>,
}

impl PerturbationSeries {
    pub fn order(&self) -> usize {
        self.v.len() - 1
    }

    /// Partial sum `S_N = sum_{n<=N} eps^n v_n` on the grid.
    pub fn partial_sum(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.rho.len()];
        let mut eps_pow = 1.0;
        for v_n in self.v.iter().take(order + 1) {
            for (o, val) in out.iter_mut().zip(v_n) {
                *o += eps_pow * val;
            }
            eps_pow *= self.epsilon;
        }
        out
    }

    /// Norm ratios `||v_{n+1}|| / ||v_n||`, skipping denominators below the
    /// floor (the flat case, where everything past `v_0` vanishes).
    pub fn norm_ratios(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.sup_v.windows(2) {
            if w[0] > 1e-300 {
                out.push(w[1] / w[0]);
            }
        }
        out
    }

    pub fn deriv_norm_ratios(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.sup_dv.windows(2) {
            if w[0] > 1e-300 {
                out.push(w[1] / w[0]);
            }
        }
        out
    }
}

fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Build `v_0` from the universal profile and each `v_{n+1}` from the
/// variation-of-parameters formula
/// `v_{n+1} = y2 int y1 k v_n' / W - y1 int y2 k v_n' / W`,
/// with the singular-endpoint products evaluated in factored form
/// (`y2/W ~ t`, `y1/W ~ t^{n-1}`) so every integrand is bounded near 0.
pub fn compute_vn(
    problem: &RescaledProblem,
    order: usize,
    grid: usize,
) -> Result<PerturbationSeries> {
    if order > 12 {
        return Err(Error::Domain(format!("compute_vn: order {order} > 12")));
    }
    if grid < 64 {
        return Err(Error::Domain("compute_vn: grid too coarse".into()));
    }
    let n = problem.n;
    let pair = fundamental_pair(n)?;
    let h = problem.rho_max / grid as f64;
    let rho: Vec<f64> = (0..=grid).map(|j| j as f64 * h).collect();

    let v0: Vec<f64> = rho
        .iter()
        .map(|&r| v0_profile(n, r))
        .collect::<Result<_>>()?;
    let dv0: Vec<f64> = rho
        .iter()
        .map(|&r| v0_profile_deriv(n, r))
        .collect::<Result<_>>()?;

    let y1: Vec<f64> = rho.iter().map(|&r| pair.y1_at(r)).collect();
    let dy1: Vec<f64> = rho.iter().map(|&r| pair.dy1_at(r)).collect();
    let y2: Vec<f64> = rho
        .iter()
        .map(|&r| if r == 0.0 { 0.0 } else { pair.y2_at(r) })
        .collect();
    let dy2: Vec<f64> = rho
        .iter()
        .map(|&r| if r == 0.0 { 0.0 } else { pair.dy2_at(r) })
        .collect();
    let y1_w: Vec<f64> = rho.iter().map(|&r| pair.y1_over_w(r)).collect();
    let y2_w: Vec<f64> = rho.iter().map(|&r| pair.y2_over_w(r)).collect();
    let k_vals: Vec<f64> = rho.iter().map(|&r| (problem.k_at)(r)).collect();

    let mut v = vec![v0];
    let mut dv = vec![dv0];
    for m in 0..order {
        let prev_dv = &dv[m];
        let ia: Vec<f64> = (0..=grid)
            .map(|j| y1_w[j] * k_vals[j] * prev_dv[j])
            .collect();
        let ib: Vec<f64> = (0..=grid)
            .map(|j| y2_w[j] * k_vals[j] * prev_dv[j])
            .collect();
        let cum_a = cumtrapz_uniform(&ia, h);
        let cum_b = cumtrapz_uniform(&ib, h);
        let mut vn = vec![0.0; grid + 1];
        let mut dvn = vec![0.0; grid + 1];
        for j in 1..=grid {
            vn[j] = y2[j] * cum_a[j] - y1[j] * cum_b[j];
            dvn[j] = dy2[j] * cum_a[j] - dy1[j] * cum_b[j];
        }
        v.push(vn);
        dv.push(dvn);
    }

    let sup_v = v.iter().map(|vals| sup(vals)).collect();
    let sup_dv = dv.iter().map(|vals| sup(vals)).collect();
    Ok(PerturbationSeries {
        n,
        epsilon: problem.epsilon,
        rho,
        v,
        dv,
        sup_v,
        sup_dv,
    })
}

/// The integration-by-parts form of the same recursion (forcing rewritten
/// onto `v_n` instead of `v_n'`); a cross-check of [`compute_vn`].
pub fn compute_vn_ibp(
    problem: &RescaledProblem,
    order: usize,
    grid: usize,
) -> Result<PerturbationSeries> {
    let base = compute_vn(problem, 0, grid)?;
    let n = problem.n;
    let pair = fundamental_pair(n)?;
    let h = problem.rho_max / grid as f64;
    let rho = base.rho.clone();

    let y1: Vec<f64> = rho.iter().map(|&r| pair.y1_at(r)).collect();
    let y2: Vec<f64> = rho
        .iter()
        .map(|&r| if r == 0.0 { 0.0 } else { pair.y2_at(r) })
        .collect();
    let y1_w: Vec<f64> = rho.iter().map(|&r| pair.y1_over_w(r)).collect();
    let y2_w: Vec<f64> = rho.iter().map(|&r| pair.y2_over_w(r)).collect();
    // (y_i/W)' is evaluated for r > 0 only; the r = 0 integrand entries are
    // forced to their limit 0 below (k and v_n both vanish there)
    let dy1_w: Vec<f64> = rho
        .iter()
        .map(|&r| if r == 0.0 { 0.0 } else { pair.d_y1_over_w(r) })
        .collect();
    let dy2_w: Vec<f64> = rho
        .iter()
        .map(|&r| if r == 0.0 { 0.0 } else { pair.d_y2_over_w(r) })
        .collect();
    let k_vals: Vec<f64> = rho.iter().map(|&r| (problem.k_at)(r)).collect();
    // derivative of the composed correction by centered differences
    let dk: Vec<f64> = rho
        .iter()
        .map(|&r| {
            let s = 1e-5;
            if r < s {
                ((problem.k_at)(r + s) - (problem.k_at)(r)) / s
            } else {
                ((problem.k_at)(r + s) - (problem.k_at)(r - s)) / (2.0 * s)
            }
        })
        .collect();

    let mut v = vec![base.v[0].clone()];
    let mut dv = vec![base.dv[0].clone()];
    for m in 0..order {
        let prev = &v[m];
        // d/dt (y_i/W * k) * v_n, every factor bounded near 0
        let ia: Vec<f64> = (0..=grid)
            .map(|j| (dy1_w[j] * k_vals[j] + y1_w[j] * dk[j]) * prev[j])
            .collect();
        let ib: Vec<f64> = (0..=grid)
            .map(|j| (dy2_w[j] * k_vals[j] + y2_w[j] * dk[j]) * prev[j])
            .collect();
        let cum_a = cumtrapz_uniform(&ia, h);
        let cum_b = cumtrapz_uniform(&ib, h);
        let mut vn = vec![0.0; grid + 1];
        for j in 1..=grid {
            vn[j] = y1[j] * cum_b[j] - y2[j] * cum_a[j];
        }
        let mut dvn = vec![0.0; grid + 1];
        for j in 1..grid {
            dvn[j] = (vn[j + 1] - vn[j - 1]) / (2.0 * h);
        }
        dvn[grid] = (vn[grid] - vn[grid - 1]) / h;
        v.push(vn);
        dv.push(dvn);
    }

    let sup_v = v.iter().map(|vals| sup(vals)).collect();
    let sup_dv = dv.iter().map(|vals| sup(vals)).collect();
    Ok(PerturbationSeries {
        n,
        epsilon: problem.epsilon,
        rho,
        v,
        dv,
        sup_v,
        sup_dv,
    })
}

/// Largest finite-difference residual of each `v_n`'s defining problem,
/// `n >= 1`: `v'' + ((n-1)/rho) v' + v - k v_{n-1}'` on interior points.
pub fn vn_residuals(problem: &RescaledProblem, series: &PerturbationSeries) -> Vec<f64> {
    let grid = series.rho.len() - 1;
    let h = series.rho[1];
    let k_vals: Vec<f64> = series.rho.iter().map(|&r| (problem.k_at)(r)).collect();
    let mut out = Vec::new();
    for m in 1..=series.order() {
        let v = &series.v[m];
        let dv = &series.dv[m];
        let prev_dv = &series.dv[m - 1];
        let mut worst = 0.0f64;
        for j in 1..grid {
            let upp = (dv[j + 1] - dv[j - 1]) / (2.0 * h);
            let res =
                upp + (series.n - 1) as f64 / series.rho[j] * dv[j] + v[j] - k_vals[j] * prev_dv[j];
            worst = worst.max(res.abs());
        }
        out.push(worst);
    }
    out
}

/// Sup-norm errors `||S_N - K||` for every order `N <= series.order()`,
/// with `K` the direct solve on the same grid.
pub fn assemble_and_validate(series: &PerturbationSeries, direct: &OdeSolution) -> Vec<f64> {
    let mut out = Vec::new();
    for order in 0..=series.order() {
        let s = series.partial_sum(order);
        let mut worst = 0.0f64;
        for (a, b) in s.iter().zip(&direct.u) {
            worst = worst.max((a - b).abs());
        }
        out.push(worst);
    }
    out
}

/// One row of the frequency sweep.
pub struct SweepRow {
    pub lambda: f64,
    pub epsilon: f64,
    pub k_sup: f64,
    pub errors_by_order: Vec<f64>,
    pub sup_v: Vec<f64>,
    pub sup_dv: Vec<f64>,
    pub residual_max: f64,
}

/// Errors and norms of the series across a frequency sweep.
pub struct EpsOrderReport {
    pub rows: Vec<SweepRow>,
}

impl EpsOrderReport {
    /// Fitted slope of `log ||S_N - K||` against `log eps` for a fixed `N`.
    pub fn slope_for_order(&self, order: usize) -> f64 {
        let xs: Vec<f64> = self.rows.iter().map(|r| r.epsilon.ln()).collect();
        let ys: Vec<f64> = self
            .rows
            .iter()
            .map(|r| r.errors_by_order[order].max(1e-300).ln())
            .collect();
        linear_regression(&xs, &ys).0
    }

    /// Smallest error across the sweep for a fixed order; slopes are only
    /// meaningful while errors stay above numerical noise.
    pub fn min_error_for_order(&self, order: usize) -> f64 {
        self.rows
            .iter()
            .map(|r| r.errors_by_order[order])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest norm ratio `||v_{n+1}||/||v_n||` observed anywhere in the sweep.
    pub fn max_norm_ratio(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.rows {
            for w in row.sup_v.windows(2) {
                if w[0] > 1e-300 {
                    worst = worst.max(w[1] / w[0]);
                }
            }
        }
        worst
    }

    pub fn max_deriv_norm_ratio(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.rows {
            for w in row.sup_dv.windows(2) {
                if w[0] > 1e-300 {
                    worst = worst.max(w[1] / w[0]);
                }
            }
        }
        worst
    }
}

/// Run the series machinery over a frequency sweep on one geometry.
pub fn eps_order_sweep(
    geometry: &VolumeGeometry,
    lambdas: &[f64],
    order: usize,
    grid: usize,
    rho_max: f64,
) -> Result<EpsOrderReport> {
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let problem = rescale(geometry, lambda, rho_max)?;
        let series = compute_vn(&problem, order, grid)?;
        let direct = problem.direct_solve(grid)?;
        let errors = assemble_and_validate(&series, &direct);
        let residuals = vn_residuals(&problem, &series);
        rows.push(SweepRow {
            lambda,
            epsilon: problem.epsilon,
            k_sup: problem.k_sup,
            errors_by_order: errors,
            sup_v: series.sup_v.clone(),
            sup_dv: series.sup_dv.clone(),
            residual_max: residuals.iter().cloned().fold(0.0, f64::max),
        });
    }
    Ok(EpsOrderReport { rows })
}

/// Result of the threshold scan on the universal profile.
#[derive(Debug, Clone, Copy)]
pub struct KappaResult {
    pub n: u32,
    pub threshold: f64,
    pub kappa_star: f64,
    /// Set when the threshold is >= 1 and the scan degenerates to 0.
    pub degenerate: bool,
}

/// Largest `kappa` with `v0 >= threshold` on `(0, kappa)`, by bisection on
/// the decreasing initial branch of the universal profile.
pub fn kappa_scan(n: u32, threshold: f64) -> Result<KappaResult> {
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!(
            "kappa_scan: threshold = {threshold} <= 0"
        )));
    }
    if threshold >= 1.0 {
        return Ok(KappaResult {
            n,
            threshold,
            kappa_star: 0.0,
            degenerate: true,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    let step = 0.01;
    for i in 1..=3000 {
        let rho = step * i as f64;
        if v0_profile(n, rho)? < threshold {
            hi = rho;
            lo = rho - step;
            break;
        }
    }
    if hi == 0.0 {
        return Err(Error::Numerical("kappa_scan: no crossing found".into()));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if v0_profile(n, mid)? >= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kappa_star = 0.5 * (lo + hi);
    let check = v0_profile(n, kappa_star)?;
    if (check - threshold).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "kappa_scan: residual {} at kappa*",
            check - threshold
        )));
    }
    Ok(KappaResult {
        n,
        threshold,
        kappa_star,
        degenerate: false,
    })
}

/// Solve the rescaled equation out to `rho = kappa` and report
/// `min K/K(0) - 1/2`: positive certifies `J_lambda >= J_lambda(0)/2` on
/// the corresponding radius range.
pub fn half_bound_certify(
    geometry: &VolumeGeometry,
    lambda: f64,
    kappa: f64,
    grid: usize,
) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!(
            "half_bound_certify: kappa = {kappa} <= 0"
        )));
    }
    let problem = rescale(geometry, lambda, kappa)?;
    let sol = problem.direct_solve(grid)?;
    let mut min_val = f64::INFINITY;
    for &u in &sol.u[1..] {
        min_val = min_val.min(u);
    }
    Ok(min_val / sol.u[0] - 0.5)
}

/// Maximum discrepancy between the direct `r`-variable solve of
/// `J'' + g J' + 2 lambda^2 J = 0` and the rescaled solve read back through
/// `r = eps * rho`.
pub fn round_trip_discrepancy(
    geometry: &VolumeGeometry,
    lambda: f64,
    rho_max: f64,
    grid: usize,
) -> Result<f64> {
    let problem = rescale(geometry, lambda, rho_max)?;
    let rescaled = problem.direct_solve(grid)?;

    let geo = *geometry;
    let lam2 = 2.0 * lambda * lambda;
    let ivp = SingularIvp {
        g: RadialCoeff::with_pole(
            (geometry.dimension() - 1) as f64,
            Box::new(move |r: f64| geo.c_at(r)),
        ),
        h: Box::new(move |_| lam2),
        forcing: Box::new(|_| 0.0),
        u0: 1.0,
        du0: 0.0,
    };
    let r_max = problem.epsilon * rho_max;
    let direct = solve_ivp(&ivp, r_max / grid as f64, r_max)?;

    let mut worst = 0.0f64;
    for (a, b) in rescaled.u.iter().zip(&direct.u) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}
