//! Cross-module oracles: quantities computed two independent ways must
//! agree — the universal profile against a direct singular-start
//! integration, and the flat mean-value identity against the series.

use eigenmeans::manifold::{make_manifold, Eigenfunction, ManifoldId, Point};
use eigenmeans::means::spherical_mean;
use eigenmeans::odecmp::{solve_ivp, SingularIvp};
use eigenmeans::specialfun::{v0_profile, v0_profile_deriv};

#[test]
fn v0_profile_solves_its_ivp_in_every_dimension() {
    for n in 2..=5u32 {
        let ivp = SingularIvp::radial_homogeneous((n - 1) as f64, 1.0, 1.0);
        let sol = solve_ivp(&ivp, 1e-4, 5.0).unwrap();
        for i in 0..=100 {
            let rho = 5.0 * i as f64 / 100.0;
            let series = v0_profile(n, rho).unwrap();
            let integrated = sol.value_at(rho);
            assert!(
                (series - integrated).abs() < 1e-8,
                "n = {n}, rho = {rho}: {series} vs {integrated}"
            );
        }
        // derivative route as well
        for i in 1..=50 {
            let rho = 5.0 * i as f64 / 50.0;
            let d = v0_profile_deriv(n, rho).unwrap();
            assert!((d - sol.deriv_at(rho)).abs() < 1e-7, "n = {n}, rho = {rho}");
        }
    }
    // n = 2 lands on the Bessel value at rho = 1
    let at_one = v0_profile(2, 1.0).unwrap();
    assert!((at_one - 0.7651976865579666).abs() < 1e-10);
}

#[test]
fn flat_mean_against_rescaled_profile() {
    // the torus mean of a plane wave traces v0 along lambda * r
    let t2 = make_manifold(ManifoldId::T2);
    let f = Eigenfunction::freq_t2((4, 3), 0.7).unwrap();
    let x = Point::T2 { x: 2.2, y: 0.4 };
    let psi_x = f.eval(&x);
    for i in 1..=8 {
        let r = 0.05 * i as f64;
        let mean = spherical_mean(&t2, &f, &x, r, 512).unwrap();
        let v0 = v0_profile(2, f.lambda() * r).unwrap();
        assert!((mean - psi_x * v0).abs() < 1e-10, "r = {r}");
    }
}
