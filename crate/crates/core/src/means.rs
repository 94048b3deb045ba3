//! Spherical means over geodesic spheres, the Euler–Poisson–Darboux residual
//! and differential-inequality checks, the divergence identity, and maximum
//! location.

use crate::manifold::{Eigenfunction, ModelManifold, Point, ScalarField, VolumeGeometry};
use crate::numerics::{d1_grid, d2_grid, richardson_even_zero, simpson_uniform};
use crate::{Error, Result};

/// Default quadrature size resolving oscillation at frequency `lambda` out
/// to radius `r_max`.
pub fn default_node_count(lambda: f64, r_max: f64) -> usize {
    256usize.max(8 * (lambda * r_max).ceil() as usize)
}

/// Weighted average of `f` over the geodesic sphere of radius `r` about `x`.
pub fn spherical_mean(
    m: &ModelManifold,
    f: &dyn ScalarField,
    x: &Point,
    r: f64,
    nodes: usize,
) -> Result<f64> {
    let quad = m.geodesic_sphere(x, r, nodes)?;
    Ok(quad.mean(f))
}

/// Spherical means of `|f|^q` (signed `f` itself for `q = 1`) on a uniform
/// radius grid around a center. The grid starts at `dr`, never at 0, where
/// the radial coefficient is singular; the value at 0 is recovered by
/// even-order Richardson extrapolation.
#[derive(Debug, Clone)]
pub struct MeanProfile {
    pub center: Point,
    pub power: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub node_count: usize,
    center_value: f64,
}

impl MeanProfile {
    pub fn dr(&self) -> f64 {
        self.radii[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    /// `I(0)` by Richardson extrapolation from the first two grid points;
    /// the profile is even in `r`, so the error is `O(dr^4)`.
    pub fn value_at_zero(&self) -> f64 {
        richardson_even_zero(self.values[0], self.values[1])
    }

    /// `|f(center)|^q`, the limit the profile must attain at 0.
    pub fn center_value(&self) -> f64 {
        self.center_value
    }
}

pub fn mean_profile(
    m: &ModelManifold,
    f: &dyn ScalarField,
    x: &Point,
    power: f64,
    r_max: f64,
    grid: usize,
    nodes: usize,
) -> Result<MeanProfile> {
    if !(power >= 1.0) {
        return Err(Error::Domain(format!("mean_profile: q = {power} < 1")));
    }
    // profiles feed the radial comparison, which needs g > 0: cap at pi/2
    // on the spheres
    let cap = m.injectivity_radius().min(m.geometry().g_positive_until());
    if !(r_max > 0.0) || r_max >= cap {
        return Err(Error::Domain(format!(
            "mean_profile: r_max = {r_max} outside (0, {cap})"
        )));
    }
    if grid < 5 {
        return Err(Error::Domain(
            "mean_profile: need at least 5 grid points".into(),
        ));
    }
    let dr = r_max / grid as f64;
    let mut radii = Vec::with_capacity(grid);
    let mut values = Vec::with_capacity(grid);
    let q = power;
    for j in 1..=grid {
        let r = j as f64 * dr;
        let quad = m.geodesic_sphere(x, r, nodes)?;
        let mean = if (q - 1.0).abs() < 1e-15 {
            quad.mean(f)
        } else {
            quad.mean(&|p: &Point| f.value(p).abs().powf(q))
        };
        radii.push(r);
        values.push(mean);
    }
    let center_value = if (q - 1.0).abs() < 1e-15 {
        f.value(x)
    } else {
        f.value(x).abs().powf(q)
    };
    Ok(MeanProfile {
        center: *x,
        power,
        radii,
        values,
        node_count: nodes,
        center_value,
    })
}

/// Which Euler–Poisson–Darboux expression to evaluate on a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpdMode {
    /// Means of the eigenfunction itself: `I'' + g I' + lambda^2 I`,
    /// expected to vanish.
    Eigen,
    /// Means of its square: `I'' + g I' + 2 lambda^2 I`, expected
    /// nonnegative (it equals twice the mean of `|grad psi|^2`).
    Square,
}

/// Evaluate the EPD expression on the profile grid. Derivatives use
/// second-order centered differences, one-sided at the two ends.
pub fn epd_residual(
    profile: &MeanProfile,
    geometry: &VolumeGeometry,
    lambda: f64,
    mode: EpdMode,
) -> Result<Vec<f64>> {
    let n = profile.radii.len();
    if n < 5 {
        return Err(Error::Domain(
            "epd_residual: need at least 5 grid points".into(),
        ));
    }
    let dr = profile.dr();
    for j in 1..n {
        if ((profile.radii[j] - profile.radii[j - 1]) - dr).abs() > 1e-9 * dr {
            return Err(Error::Domain(
                "epd_residual: non-uniform radius grid".into(),
            ));
        }
    }
    let d1 = d1_grid(&profile.values, dr)?;
    let d2 = d2_grid(&profile.values, dr)?;
    let factor = match mode {
        EpdMode::Eigen => lambda * lambda,
        EpdMode::Square => 2.0 * lambda * lambda,
    };
    Ok((0..n)
        .map(|j| d2[j] + geometry.g_at(profile.radii[j]) * d1[j] + factor * profile.values[j])
        .collect())
}

/// Both sides of the divergence identity and their relative discrepancy.
#[derive(Debug, Clone, Copy)]
pub struct DivergenceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

/// Check the divergence identity
/// `int_0^r Delta I(x, rho) h(rho) drho = h(r) * dI/dr(r)`
/// for a catalog eigenfunction, replacing `Delta I` by `-lambda^2 I`.
pub fn divergence_identity_check(
    m: &ModelManifold,
    f: &Eigenfunction,
    x: &Point,
    r: f64,
    dr: f64,
    nodes: usize,
) -> Result<DivergenceCheck> {
    let steps = (r / dr).round() as usize;
    if steps < 4 {
        return Err(Error::Domain(
            "divergence_identity_check: grid too coarse".into(),
        ));
    }
    // profile out to r + 2 dr so the derivative at r is centered
    let grid = steps + 2;
    let profile = mean_profile(m, f, x, 1.0, grid as f64 * dr, grid, nodes)?;
    let lambda = f.lambda();

    // left side: -lambda^2 * int_0^r I h, including the h(0) = 0 endpoint
    let mut integrand = Vec::with_capacity(steps + 1);
    integrand.push(0.0);
    for j in 0..steps {
        integrand.push(profile.values[j] * m.geometry().h_at(profile.radii[j]));
    }
    let lhs = -lambda * lambda * simpson_uniform(&integrand, dr);

    // right side: h(r) I'(r), centered difference at the interior point r
    let di = (profile.values[steps] - profile.values[steps - 2]) / (2.0 * dr);
    let rhs = m.geometry().h_at(r) * di;

    Ok(DivergenceCheck {
        lhs,
        rhs,
        relative_error: (lhs - rhs).abs() / (rhs.abs() + 1e-12),
    })
}

/// Minimum of the EPD expression over the centered-stencil points of the
/// grid (the open interval, avoiding the 11x larger one-sided truncation of
/// the end stencils).
pub fn epd_interior_min(
    profile: &MeanProfile,
    geometry: &VolumeGeometry,
    lambda: f64,
    mode: EpdMode,
) -> Result<f64> {
    let res = epd_residual(profile, geometry, lambda, mode)?;
    Ok(res[1..res.len() - 1]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}

/// Result of a maximum search.
#[derive(Debug, Clone, Copy)]
pub struct MaxLocation {
    pub point: Point,
    pub value: f64,
    /// Set when at least two coarse cells tie to within 1e-12.
    pub plateau: bool,
}

/// Locate a maximum of `|f|`: coarse scan over a deterministic grid, then
/// pattern search with a shrinking tangent-frame box.
pub fn locate_max(m: &ModelManifold, f: &dyn ScalarField, coarse: usize) -> MaxLocation {
    let scan = m.scan_points(coarse);
    let mut best = scan[0];
    let mut best_val = f.value(&best).abs();
    let mut runner_up = f64::NEG_INFINITY;
    for p in &scan[1..] {
        let v = f.value(p).abs();
        if v > best_val {
            runner_up = best_val;
            best_val = v;
            best = *p;
        } else if v > runner_up {
            runner_up = v;
        }
    }
    let plateau = (best_val - runner_up).abs() <= 1e-12;

    let dim = m.dimension() as usize;
    let offsets = [-1.0, -0.5, 0.5, 1.0];
    let probes: Vec<Vec<f64>> = if dim == 2 {
        let mut v = Vec::new();
        for a in offsets {
            v.push(vec![a, 0.0]);
            v.push(vec![0.0, a]);
            for b in offsets {
                v.push(vec![a, b]);
            }
        }
        v
    } else {
        let mut v = Vec::new();
        for a in offsets {
            v.push(vec![a, 0.0, 0.0]);
            v.push(vec![0.0, a, 0.0]);
            v.push(vec![0.0, 0.0, a]);
            for b in offsets {
                v.push(vec![a, b, 0.0]);
                v.push(vec![a, 0.0, b]);
                v.push(vec![0.0, a, b]);
            }
        }
        v
    };

    let mut span = crate::manifold::TWO_PI / coarse as f64;
    let mut center = best;
    let mut center_val = best_val;
    let mut coeffs = vec![0.0; dim];
    for _ in 0..400 {
        let mut moved = false;
        for probe in &probes {
            for (c, p) in coeffs.iter_mut().zip(probe) {
                *c = p * span;
            }
            let q = m.exp_in_frame(&center, &coeffs);
            let v = f.value(&q).abs();
            if v > center_val {
                center_val = v;
                center = q;
                moved = true;
            }
        }
        if !moved {
            span *= 0.5;
            if span < 1e-10 {
                break;
            }
        }
    }
    MaxLocation {
        point: center,
        value: center_val,
        plateau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{make_manifold, ManifoldId, TWO_PI};
    use crate::specialfun::bessel::j0;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn mean_of_constant_is_constant() {
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::constant(ManifoldId::S2, 3.0);
        let got = spherical_mean(&s2, &f, &s2.base_point(), 0.7, 64).unwrap();
        assert!((got - 3.0).abs() < 1e-13);
        // squares of a constant
        let profile = mean_profile(&s2, &f, &s2.base_point(), 2.0, 0.5, 10, 32).unwrap();
        for v in &profile.values {
            assert!((v - 9.0).abs() < 1e-12);
        }
    }

    /// Flat mean-value property: on the torus the mean of a plane wave over
    /// a circle is the center value times `J_0(lambda r)`.
    #[test]
    fn flat_mean_value_property() {
        let t2 = make_manifold(ManifoldId::T2);
        let mut rng = StdRng::seed_from_u64(2024);
        for _ in 0..10 {
            let k = loop {
                let k = (rng.random_range(-12i32..=12), rng.random_range(-12i32..=12));
                let norm2 = k.0 * k.0 + k.1 * k.1;
                if norm2 > 0 && norm2 <= 144 {
                    break k;
                }
            };
            let f = Eigenfunction::freq_t2(k, 0.0).unwrap();
            let x = Point::T2 {
                x: rng.random_range(0.0..TWO_PI),
                y: rng.random_range(0.0..TWO_PI),
            };
            let r = rng.random_range(0.05..0.4);
            let got = spherical_mean(&t2, &f, &x, r, 512).unwrap();
            let want = f.eval(&x) * j0(f.lambda() * r);
            assert!(
                (got - want).abs() < 1e-10,
                "k = {k:?}, r = {r}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn zonal_mean_at_pole_is_exact() {
        // integrand is constant on circles centered at the pole
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::zonal_s2(7);
        let pole = s2.base_point();
        for r in [0.2, 0.5, 1.0] {
            let got = spherical_mean(&s2, &f, &pole, r, 32).unwrap();
            let want = crate::specialfun::legendre(7, r.cos()).unwrap();
            assert!((got - want).abs() < 1e-12);
        }
        // q = 2 profile equals the square
        let profile = mean_profile(&s2, &f, &pole, 2.0, 0.8, 12, 32).unwrap();
        for (r, v) in profile.radii.iter().zip(&profile.values) {
            let p = crate::specialfun::legendre(7, r.cos()).unwrap();
            assert!((v - p * p).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_converges_once_oscillation_resolved() {
        let t2 = make_manifold(ManifoldId::T2);
        let f = Eigenfunction::freq_t2((8, 6), 0.2).unwrap();
        let x = Point::T2 { x: 1.0, y: 2.0 };
        let r_max = 0.5;
        let m0 = 4 * ((f.lambda() * r_max) as usize + 16);
        let a = spherical_mean(&t2, &f, &x, r_max, m0).unwrap();
        let b = spherical_mean(&t2, &f, &x, r_max, 2 * m0).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn profile_extrapolates_to_center_value() {
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::zonal_s2(10);
        let pole = s2.base_point();
        let profile = mean_profile(&s2, &f, &pole, 2.0, 0.1, 40, 64).unwrap();
        assert!((profile.value_at_zero() - profile.center_value()).abs() < 1e-6);
        assert!((profile.center_value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epd_eigen_mode_vanishes_at_second_order() {
        // t2: exact profile is psi(x) J0(lambda r)
        let t2 = make_manifold(ManifoldId::T2);
        let f = Eigenfunction::freq_t2((3, 4), 0.0).unwrap();
        let x = Point::T2 { x: 0.3, y: 0.9 };
        let worst = |grid: usize| -> f64 {
            let profile = mean_profile(&t2, &f, &x, 1.0, 0.2, grid, 512).unwrap();
            let res = epd_residual(&profile, t2.geometry(), f.lambda(), EpdMode::Eigen).unwrap();
            res.iter().fold(0.0f64, |a, r| a.max(r.abs()))
        };
        let coarse = worst(50);
        let fine = worst(100);
        let order = (coarse / fine).log2();
        assert!(order >= 1.8, "order {order}: {coarse} -> {fine}");

        // constant eigenfunction: residual identically zero in either mode
        let c = Eigenfunction::constant(ManifoldId::T2, 2.0);
        let profile = mean_profile(&t2, &c, &x, 1.0, 0.2, 20, 64).unwrap();
        for mode in [EpdMode::Eigen, EpdMode::Square] {
            let res = epd_residual(&profile, t2.geometry(), 0.0, mode).unwrap();
            for v in res {
                assert!(v.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn epd_square_mode_is_nonnegative_for_zonal() {
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::zonal_s2(20);
        let lambda = f.lambda();
        let pole = s2.base_point();
        let r_max = 1.0 / lambda;
        let profile = mean_profile(&s2, &f, &pole, 2.0, r_max, 600, 256).unwrap();
        let min = epd_interior_min(&profile, s2.geometry(), lambda, EpdMode::Square).unwrap();
        let i0 = profile.value_at_zero();
        assert!(min >= -1e-6 * lambda * lambda * i0, "min = {min}");
    }

    #[test]
    fn epd_rejects_bad_grids() {
        let t2 = make_manifold(ManifoldId::T2);
        let f = Eigenfunction::freq_t2((1, 0), 0.0).unwrap();
        let x = t2.base_point();
        let mut profile = mean_profile(&t2, &f, &x, 1.0, 0.3, 10, 64).unwrap();
        profile.radii[3] += 1e-3;
        assert!(epd_residual(&profile, t2.geometry(), 1.0, EpdMode::Eigen).is_err());
    }

    #[test]
    fn divergence_identity_on_flat_wave() {
        let t2 = make_manifold(ManifoldId::T2);
        let f = Eigenfunction::freq_t2((3, 4), 0.0).unwrap();
        let x = Point::T2 { x: 0.7, y: 0.2 };
        let check = divergence_identity_check(&t2, &f, &x, 0.2, 1e-3, 256).unwrap();
        assert!(
            check.relative_error <= 1e-4,
            "relative error {}",
            check.relative_error
        );

        // trivially zero for constants: both sides vanish
        let c = Eigenfunction::constant(ManifoldId::T2, 5.0);
        let check = divergence_identity_check(&t2, &c, &x, 0.2, 1e-2, 64).unwrap();
        assert!(check.lhs.abs() < 1e-10 && check.rhs.abs() < 1e-10);
    }

    #[test]
    fn divergence_identity_converges_on_sphere() {
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::zonal_s2(5);
        let x = s2.base_point();
        let coarse = divergence_identity_check(&s2, &f, &x, 0.3, 4e-3, 128)
            .unwrap()
            .relative_error;
        let fine = divergence_identity_check(&s2, &f, &x, 0.3, 2e-3, 128)
            .unwrap()
            .relative_error;
        let order = (coarse / fine).log2();
        assert!(order >= 1.8, "order {order}: {coarse} -> {fine}");
    }

    #[test]
    fn locate_max_finds_poles_and_ridges() {
        let s2 = make_manifold(ManifoldId::S2);
        let f = Eigenfunction::zonal_s2(6);
        let found = locate_max(&s2, &f, 48);
        assert!((found.value - 1.0).abs() < 1e-10);
        // both poles attain |P_l| = 1
        assert!(found.plateau);

        let t2 = make_manifold(ManifoldId::T2);
        let wave = Eigenfunction::freq_t2((2, 1), 0.0).unwrap();
        let found = locate_max(&t2, &wave, 64);
        assert!((found.value - 1.0).abs() < 1e-10);
        if let Point::T2 { x, y } = found.point {
            let phase = (2.0 * x + y).rem_euclid(std::f64::consts::PI);
            let dist = phase.min(std::f64::consts::PI - phase);
            assert!(dist < 1e-5, "k.x = {}", 2.0 * x + y);
        } else {
            panic!("wrong point type");
        }
    }

    #[test]
    fn locate_max_matches_dense_grid_oracle() {
        // not an eigenfunction: a two-frequency mix with a unique maximum
        let t2 = make_manifold(ManifoldId::T2);
        let f = |p: &Point| match p {
            Point::T2 { x, y } => (3.0 * x).cos() + 0.5 * (4.0 * y).cos(),
            _ => unreachable!(),
        };
        let found = locate_max(&t2, &f, 64);
        // 512 x 512 brute-force oracle
        let mut oracle = f64::NEG_INFINITY;
        for i in 0..512 {
            for j in 0..512 {
                let p = Point::T2 {
                    x: TWO_PI * i as f64 / 512.0,
                    y: TWO_PI * j as f64 / 512.0,
                };
                oracle = oracle.max(f(&p).abs());
            }
        }
        assert!(found.value + 1e-8 >= oracle, "{} vs {oracle}", found.value);
        assert!((found.value - 1.5).abs() < 1e-8);
    }
}
