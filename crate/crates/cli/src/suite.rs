//! The verification suite: every check the harness stands behind, with
//! pinned tolerances, aggregated into a single report.

use crate::config::{
    SuiteConfig, EPD_S2_DEGREES, EPD_T2_FREQS, HALF_BOUND_LAMBDAS, S2_DEGREES, S3_DEGREES,
    SERIES_LAMBDAS, T2_FREQS,
};
use crate::experiments::{
    freq_family, run_sweep, sort_records, zonal_family, ExperimentParams, ExperimentRecord,
};
use crate::report::{records_to_csv, CheckResult, SuiteReport};
use eigenmeans::manifold::{make_manifold, Eigenfunction, ManifoldId, Point, TWO_PI};
use eigenmeans::means::{
    epd_interior_min, epd_residual, locate_max, mean_profile, spherical_mean, EpdMode,
};
use eigenmeans::odecmp::{
    comparison_certificate, solve_ivp, ComparisonHypotheses, GridFunction, RadialCoeff, SingularIvp,
};
use eigenmeans::perturb::{
    eps_order_sweep, half_bound_certify, kappa_scan, round_trip_discrepancy,
};
use eigenmeans::specialfun::{bessel_j, bessel_y, chebyshev_u, legendre, BesselOrder};
use eigenmeans::Result;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

/// Truncated-power-series oracle for `J_0`, independent of the library path.
fn j0_oracle(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for m in 0..30u32 {
        if m > 0 {
            fact *= m as f64;
        }
        sum += (-1.0f64).powi(m as i32) * (0.5 * x).powi(2 * m as i32) / (fact * fact);
    }
    sum
}

fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

struct SweepData {
    s2: Vec<ExperimentRecord>,
    t2: Vec<ExperimentRecord>,
    s3: Vec<ExperimentRecord>,
    s2_p4: Vec<ExperimentRecord>,
    skipped: Vec<String>,
}

fn compute_sweeps(config: &SuiteConfig) -> Result<SweepData> {
    let params = ExperimentParams {
        kappa: config.kappa,
        p: 2.0,
        nodes: config.nodes,
        coarse: config.coarse,
        series_grid: config.series_grid.min(2048),
        center_at_max: true,
    };
    let s2_family = zonal_family(ManifoldId::S2, S2_DEGREES)?;
    let t2_family = freq_family(T2_FREQS)?;
    let s3_family = zonal_family(ManifoldId::S3, S3_DEGREES)?;

    let s2 = run_sweep(ManifoldId::S2, &s2_family, &params)?;
    let t2 = run_sweep(ManifoldId::T2, &t2_family, &params)?;
    let s3 = run_sweep(ManifoldId::S3, &s3_family, &params)?;

    let params_p4 = ExperimentParams {
        p: config.p_extra,
        ..params
    };
    let s2_p4 = run_sweep(ManifoldId::S2, &s2_family, &params_p4)?;

    let mut skipped = s2.skipped;
    skipped.extend(t2.skipped);
    skipped.extend(s3.skipped);
    Ok(SweepData {
        s2: s2.records,
        t2: t2.records,
        s3: s3.records,
        s2_p4: s2_p4.records,
        skipped,
    })
}

fn check_specialfun() -> CheckResult {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();

    // J0(1) against the series oracle value
    let j0_1 = bessel_j(BesselOrder::Zero, 1.0).unwrap();
    let d = (j0_1 - 0.7651976865579666).abs();
    worst = worst.max(d / 1e-12);
    if d > 1e-12 {
        detail.push_str("J0(1) off; ");
    }

    // x W(J0, Y0)(x) constant = 2/pi on [0.01, 10]
    for i in 0..=60 {
        let x = 0.01 + (10.0 - 0.01) * i as f64 / 60.0;
        let j0v = bessel_j(BesselOrder::Zero, x).unwrap();
        let y0v = bessel_y(BesselOrder::Zero, x).unwrap();
        let j1v = bessel_j(BesselOrder::One, x).unwrap();
        let y1v = bessel_y(BesselOrder::One, x).unwrap();
        // W = J0 Y0' - J0' Y0 with J0' = -J1, Y0' = -Y1
        let w = x * (j1v * y0v - j0v * y1v);
        let dev = (w - std::f64::consts::FRAC_2_PI).abs();
        worst = worst.max(dev / 1e-8);
        if dev > 1e-8 {
            detail.push_str(&format!("Wronskian off at {x}; "));
        }
    }

    // half-integer closed forms on [0.1, 10]
    for i in 0..=99 {
        let x = 0.1 + 9.9 * i as f64 / 99.0;
        let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
        let pairs = [
            (bessel_j(BesselOrder::Half, x).unwrap(), amp * x.sin()),
            (bessel_y(BesselOrder::Half, x).unwrap(), -amp * x.cos()),
            (
                bessel_j(BesselOrder::ThreeHalves, x).unwrap(),
                amp * (x.sin() / x - x.cos()),
            ),
            (
                bessel_y(BesselOrder::ThreeHalves, x).unwrap(),
                -amp * (x.cos() / x + x.sin()),
            ),
        ];
        for (got, want) in pairs {
            let dev = (got - want).abs();
            worst = worst.max(dev / 1e-12);
            if dev > 1e-12 {
                detail.push_str(&format!("half-integer off at {x}; "));
            }
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1.0 && elapsed <= 1.0;
    if elapsed > 1.0 {
        detail.push_str("runtime over 1 s; ");
    }
    CheckResult::new(
        "specialfun",
        pass,
        1.0 - worst,
        1.0,
        format!("worst relative slack {worst:.3e}, runtime {elapsed:.3}s {detail}"),
    )
}

fn check_flat_mean_value() -> CheckResult {
    let start = Instant::now();
    let t2 = make_manifold(ManifoldId::T2);
    let mut rng = StdRng::seed_from_u64(90125);
    let mut worst: f64 = 0.0;
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
        let want = f.eval(&x) * j0_oracle(f.lambda() * r);
        worst = worst.max((got - want).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-8 && elapsed <= 5.0;
    CheckResult::new(
        "flat_mean_value",
        pass,
        1e-8 - worst,
        1e-8,
        format!("worst deviation {worst:.3e} over 10 random (k, x0), runtime {elapsed:.3}s"),
    )
}

fn check_epd(config: &SuiteConfig) -> CheckResult {
    let mut detail = String::new();
    let mut pass = true;

    // equality mode: residual decays at order >= 1.8 under grid halving
    let t2 = make_manifold(ManifoldId::T2);
    let wave = Eigenfunction::freq_t2((3, 4), 0.0).unwrap();
    let x0 = Point::T2 { x: 0.3, y: 0.9 };
    let worst_at = |grid: usize| -> f64 {
        let profile = mean_profile(&t2, &wave, &x0, 1.0, 0.2, grid, 512).unwrap();
        sup(&epd_residual(&profile, t2.geometry(), wave.lambda(), EpdMode::Eigen).unwrap())
    };
    let order_t2 = (worst_at(50) / worst_at(100)).log2();
    if order_t2 < 1.8 {
        pass = false;
        detail.push_str(&format!("t2 eigen order {order_t2:.2} < 1.8; "));
    }

    let s2 = make_manifold(ManifoldId::S2);
    let zonal = Eigenfunction::zonal_s2(20);
    let pole = s2.base_point();
    let worst_zonal = |grid: usize| -> f64 {
        let profile =
            mean_profile(&s2, &zonal, &pole, 1.0, 1.0 / zonal.lambda(), grid, 256).unwrap();
        sup(&epd_residual(&profile, s2.geometry(), zonal.lambda(), EpdMode::Eigen).unwrap())
    };
    let order_s2 = (worst_zonal(100) / worst_zonal(200)).log2();
    if order_s2 < 1.8 {
        pass = false;
        detail.push_str(&format!("s2 eigen order {order_s2:.2} < 1.8; "));
    }

    // inequality mode: min of the square-mean expression stays above the
    // scale-aware slack across both sweeps
    let mut worst_normalized = f64::INFINITY;
    for &l in EPD_S2_DEGREES {
        let f = Eigenfunction::zonal_s2(l);
        let lambda = f.lambda();
        let profile = mean_profile(
            &s2,
            &f,
            &pole,
            2.0,
            config.kappa / lambda,
            config.profile_grid,
            config.nodes,
        )
        .unwrap();
        let min = epd_interior_min(&profile, s2.geometry(), lambda, EpdMode::Square).unwrap();
        let slack = 1e-6 * lambda * lambda * profile.value_at_zero();
        worst_normalized = worst_normalized.min(min / slack);
        if min < -slack {
            pass = false;
            detail.push_str(&format!("s2 l={l} min {min:.3e} < -{slack:.3e}; "));
        }
    }
    for &k in EPD_T2_FREQS {
        let f = Eigenfunction::freq_t2(k, 0.0).unwrap();
        let lambda = f.lambda();
        let center = locate_max(&t2, &f, config.coarse).point;
        let profile = mean_profile(
            &t2,
            &f,
            &center,
            2.0,
            config.kappa / lambda,
            config.profile_grid,
            config.nodes.max(512),
        )
        .unwrap();
        let min = epd_interior_min(&profile, t2.geometry(), lambda, EpdMode::Square).unwrap();
        let slack = 1e-6 * lambda * lambda * profile.value_at_zero();
        worst_normalized = worst_normalized.min(min / slack);
        if min < -slack {
            pass = false;
            detail.push_str(&format!("t2 k={k:?} min {min:.3e} < -{slack:.3e}; "));
        }
    }

    CheckResult::new(
        "epd",
        pass,
        worst_normalized + 1.0,
        1.0,
        format!(
            "eigen orders t2 {order_t2:.2} / s2 {order_s2:.2}; worst inequality min at {worst_normalized:.3} of slack {detail}"
        ),
    )
}

struct ComparisonRun {
    normalized_margin: f64,
    certified: bool,
}

fn comparison_run(
    id: ManifoldId,
    f: &Eigenfunction,
    config: &SuiteConfig,
    fabricate_violation: bool,
) -> ComparisonRun {
    let m = make_manifold(id);
    let lambda = f.lambda();
    let r_max = config.kappa / lambda;
    let center = locate_max(&m, f, config.coarse).point;
    // zonal integrands are constant on pole-centered spheres, so the
    // 3-sphere run gets by with a small product grid
    let nodes = if id == ManifoldId::S3 {
        64
    } else {
        config.nodes.max(512)
    };
    let profile = mean_profile(&m, f, &center, 2.0, r_max, config.profile_grid, nodes).unwrap();
    let i0 = profile.value_at_zero();

    let geo = *m.geometry();
    let lam2 = 2.0 * lambda * lambda;
    let ivp = SingularIvp {
        g: RadialCoeff::with_pole(
            (m.dimension() - 1) as f64,
            Box::new(move |r: f64| geo.c_at(r)),
        ),
        h: Box::new(move |_| lam2),
        forcing: Box::new(|_| 0.0),
        u0: i0,
        du0: 0.0,
    };
    let sol = solve_ivp(&ivp, profile.dr(), r_max).unwrap();

    let mut u = GridFunction {
        xs: profile.radii.clone(),
        values: profile.values.clone(),
        value_at_zero: i0,
        deriv_at_zero: 0.0,
    };
    if fabricate_violation {
        let mid = 0.5 * r_max;
        let width = 0.1 * r_max;
        for (x, v) in u.xs.iter().zip(u.values.iter_mut()) {
            *v -= 0.01 * i0 * (-((x - mid) / width).powi(2)).exp();
        }
    }
    let phi = GridFunction::from_solution_on(&sol, &profile.radii);

    let geo2 = *m.geometry();
    let g = RadialCoeff::with_pole(
        (m.dimension() - 1) as f64,
        Box::new(move |r: f64| geo2.c_at(r)),
    );
    let h = move |_: f64| lam2;
    // hypothesis slack = the inequality tolerance plus the verification
    // stencil's own truncation, dr^2/12 * u'''' with u'''' ~ (2 lambda^2)^2 u
    let dr = profile.dr();
    let fd_budget = dr * dr / 12.0 * (lam2 * lam2) * i0 * 2.0;
    let cert = comparison_certificate(
        &u,
        &phi,
        &ComparisonHypotheses {
            g: &g,
            h: &h,
            hypothesis_slack: 1e-6 * lambda * lambda * i0 + fd_budget,
            conclusion_tol: 1e-6,
            matched_data: true,
            verify_from: sol.series_end + 2.0 * dr,
        },
    )
    .unwrap();
    ComparisonRun {
        normalized_margin: cert.min_margin / i0,
        certified: cert.passed(),
    }
}

fn check_comparison(config: &SuiteConfig) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    let mut worst = f64::INFINITY;

    for &l in EPD_S2_DEGREES {
        let f = Eigenfunction::zonal_s2(l);
        let run = comparison_run(ManifoldId::S2, &f, config, false);
        worst = worst.min(run.normalized_margin);
        if !run.certified || run.normalized_margin < -1e-6 {
            pass = false;
            detail.push_str(&format!("s2 l={l} margin {:.3e}; ", run.normalized_margin));
        }
    }
    for &k in EPD_T2_FREQS {
        let f = Eigenfunction::freq_t2(k, 0.0).unwrap();
        let run = comparison_run(ManifoldId::T2, &f, config, false);
        worst = worst.min(run.normalized_margin);
        if !run.certified || run.normalized_margin < -1e-6 {
            pass = false;
            detail.push_str(&format!(
                "t2 k={k:?} margin {:.3e}; ",
                run.normalized_margin
            ));
        }
    }

    // one member of the remaining catalog manifold
    let z3 = Eigenfunction::zonal_s3(20);
    let run = comparison_run(ManifoldId::S3, &z3, config, false);
    worst = worst.min(run.normalized_margin);
    if !run.certified || run.normalized_margin < -1e-6 {
        pass = false;
        detail.push_str(&format!("s3 l=20 margin {:.3e}; ", run.normalized_margin));
    }

    // non-vacuity: a fabricated downward bump must be caught
    let f = Eigenfunction::zonal_s2(20);
    let fabricated = comparison_run(ManifoldId::S2, &f, config, true);
    if fabricated.certified || fabricated.normalized_margin > -1e-6 {
        pass = false;
        detail.push_str("fabricated violation went undetected; ");
    }

    CheckResult::new(
        "comparison",
        pass,
        worst + 1e-6,
        1e-6,
        format!(
            "worst normalized margin {worst:.3e}; fabricated margin {:.3e} {detail}",
            fabricated.normalized_margin
        ),
    )
}

fn check_kappa_half_bound(config: &SuiteConfig) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();

    let k2 = kappa_scan(2, 0.75).unwrap();
    if !(1.00..=1.06).contains(&k2.kappa_star) {
        pass = false;
        detail.push_str(&format!(
            "kappa*(2) = {} outside [1.00, 1.06]; ",
            k2.kappa_star
        ));
    }
    let v2 = eigenmeans::specialfun::v0_profile(2, k2.kappa_star).unwrap();
    if (v2 - 0.75).abs() > 1e-10 {
        pass = false;
        detail.push_str("v0 at kappa*(2) off threshold; ");
    }
    let k3 = kappa_scan(3, 0.75).unwrap();
    if !(1.24..=1.30).contains(&k3.kappa_star) {
        pass = false;
        detail.push_str(&format!(
            "kappa*(3) = {} outside [1.24, 1.30]; ",
            k3.kappa_star
        ));
    }

    let mut worst_margin = f64::INFINITY;
    for id in [ManifoldId::T2, ManifoldId::S2, ManifoldId::S3] {
        let m = make_manifold(id);
        for &lambda in HALF_BOUND_LAMBDAS {
            let margin =
                half_bound_certify(m.geometry(), lambda, config.kappa, config.series_grid).unwrap();
            worst_margin = worst_margin.min(margin);
            if margin <= 0.0 {
                pass = false;
                detail.push_str(&format!(
                    "{} lambda={lambda}: margin {margin:.3e}; ",
                    id.name()
                ));
            }
        }
    }

    // flat margin is exactly v0(kappa) - 1/2 = J0(kappa) - 1/2
    let t2 = make_manifold(ManifoldId::T2);
    let flat = half_bound_certify(t2.geometry(), 25.0, config.kappa, config.series_grid).unwrap();
    let expect = j0_oracle(config.kappa) - 0.5;
    if (flat - expect).abs() > 1e-8 {
        pass = false;
        detail.push_str(&format!("flat margin {flat:.10} vs oracle {expect:.10}; "));
    }

    CheckResult::new(
        "kappa_half_bound",
        pass,
        worst_margin,
        0.0,
        format!(
            "kappa*(2) = {:.6}, kappa*(3) = {:.6}, worst margin {worst_margin:.4} {detail}",
            k2.kappa_star, k3.kappa_star
        ),
    )
}

fn check_perturbation_series(config: &SuiteConfig) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    let s2 = make_manifold(ManifoldId::S2);
    let report = eps_order_sweep(
        s2.geometry(),
        SERIES_LAMBDAS,
        config.order,
        config.series_grid,
        1.5,
    )
    .unwrap();

    // the regression runs at partial-sum order 1: those remainders sit
    // provably above the f64 noise floor across the whole sweep, while
    // orders >= 2 collapse into quadrature noise under the exact
    // substitution (the correction itself shrinks with eps)
    let slope = report.slope_for_order(1);
    if slope < 3.5 {
        pass = false;
        detail.push_str(&format!("slope {slope:.3} < 3.5; "));
    }
    if report.min_error_for_order(1) <= 1e-13 {
        pass = false;
        detail.push_str("order-1 errors at noise floor, slope unmeasurable; ");
    }
    for row in &report.rows {
        if row.residual_max > 1e-6 {
            pass = false;
            detail.push_str(&format!(
                "lambda {}: residual {:.3e}; ",
                row.lambda, row.residual_max
            ));
        }
        if row.errors_by_order[0] < 10.0 * row.errors_by_order[1] {
            pass = false;
            detail.push_str(&format!("lambda {}: S1 gains under 10x; ", row.lambda));
        }
        let last = row.errors_by_order[config.order];
        if last > row.errors_by_order[1] + 1e-12 {
            pass = false;
            detail.push_str(&format!(
                "lambda {}: S{} worse than S1; ",
                row.lambda, config.order
            ));
        }
    }
    let ratio = report.max_norm_ratio();
    let dratio = report.max_deriv_norm_ratio();
    if ratio > 5.0 || dratio > 5.0 {
        pass = false;
        detail.push_str(&format!("norm ratios {ratio:.3}/{dratio:.3} exceed 5; "));
    }

    let round_trip = round_trip_discrepancy(s2.geometry(), 25.0, 1.5, config.series_grid).unwrap();
    if round_trip > 1e-8 {
        pass = false;
        detail.push_str(&format!("round trip {round_trip:.3e} > 1e-8; "));
    }

    CheckResult::new(
        "perturbation_series",
        pass,
        slope - 3.5,
        3.5,
        format!(
            "slope {slope:.3}, max norm ratio {ratio:.3e}, round trip {round_trip:.3e} {detail}"
        ),
    )
}

fn check_hormander(records: &SweepData) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    let limit = 1.0 / (TWO_PI).sqrt();

    let at = |l: u32| -> Option<&ExperimentRecord> {
        records.s2.iter().find(|r| r.index == l.to_string())
    };
    let r200 = at(200).expect("l = 200 in the sweep");
    let rel = (r200.hormander_ratio / limit - 1.0).abs();
    if rel > 0.02 {
        pass = false;
        detail.push_str(&format!(
            "l=200 ratio {:.6} off the limit by {rel:.4}; ",
            r200.hormander_ratio
        ));
    }

    // closed-form and quadrature norms agree at the top degree
    let s2 = make_manifold(ManifoldId::S2);
    let zonal = Eigenfunction::zonal_s2(200);
    let closed = s2.l2_norm(&zonal);
    let quad = s2.l2_norm_quadrature(&zonal, 512);
    if (closed - quad).abs() > 1e-8 {
        pass = false;
        detail.push_str(&format!("norms closed {closed} vs quadrature {quad}; "));
    }

    // distance to the limit shrinks monotonically along the tail
    let mut last = f64::INFINITY;
    for l in [50u32, 75, 100, 150, 200] {
        let d = (at(l).unwrap().hormander_ratio - limit).abs();
        if d >= last {
            pass = false;
            detail.push_str(&format!("distance not shrinking at l={l}; "));
        }
        last = d;
    }
    let d50 = (at(50).unwrap().hormander_ratio - limit).abs();
    let d200 = (at(200).unwrap().hormander_ratio - limit).abs();
    if d200 > 0.5 * d50 {
        pass = false;
        detail.push_str("tail contraction under 2x; ");
    }

    CheckResult::new(
        "hormander_saturation",
        pass,
        0.02 - rel,
        0.02,
        format!(
            "l=200 ratio {:.8} vs (2 pi)^(-1/2) = {limit:.8} {detail}",
            r200.hormander_ratio
        ),
    )
}

fn check_restriction(records: &SweepData, config: &SuiteConfig) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();

    let spread = |rows: &[ExperimentRecord]| -> f64 {
        let mut ratios: Vec<f64> = rows.iter().map(|r| r.restriction_ratio).collect();
        ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ratios.last().unwrap() / median(&ratios)
    };
    let spread_p2 = spread(&records.s2);
    if spread_p2 > 2.0 {
        pass = false;
        detail.push_str(&format!("p=2 max/median {spread_p2:.3} > 2; "));
    }
    let spread_p4 = spread(&records.s2_p4);
    if spread_p4 > 2.0
        || !records
            .s2_p4
            .iter()
            .all(|r| r.restriction_ratio.is_finite())
    {
        pass = false;
        detail.push_str(&format!("p={} max/median {spread_p4:.3}; ", config.p_extra));
    }

    // at p = 2 the frequency normalization is the identity, bit-exactly
    for r in &records.s2 {
        if r.restriction_ratio != r.restriction_raw {
            pass = false;
            detail.push_str(&format!(
                "p=2 normalization not exact at index {}; ",
                r.index
            ));
        }
    }

    // torus record against a dense brute-force quadrature of the same norm
    let t2 = make_manifold(ManifoldId::T2);
    let f = Eigenfunction::freq_t2((3, 4), 0.0).unwrap();
    let center = locate_max(&t2, &f, config.coarse).point;
    let r_gamma = config.kappa / f.lambda();
    let coarse_quad = t2.geodesic_sphere(&center, r_gamma, 256).unwrap();
    let dense_quad = t2.geodesic_sphere(&center, r_gamma, 10_000).unwrap();
    let norm_coarse = coarse_quad.integrate(&|q: &Point| f.eval(q) * f.eval(q));
    let norm_dense = dense_quad.integrate(&|q: &Point| f.eval(q) * f.eval(q));
    let brute_dev = (norm_coarse - norm_dense).abs() / norm_dense.abs();
    if brute_dev > 1e-8 {
        pass = false;
        detail.push_str(&format!(
            "brute-force quadrature deviation {brute_dev:.3e}; "
        ));
    }

    CheckResult::new(
        "restriction_boundedness",
        pass,
        2.0 - spread_p2.max(spread_p4),
        2.0,
        format!(
            "max/median p=2: {spread_p2:.4}, p={}: {spread_p4:.4} {detail}",
            config.p_extra
        ),
    )
}

fn check_equivalence(records: &SweepData, config: &SuiteConfig) -> CheckResult {
    let mut pass = true;
    let mut detail = String::new();
    let kappa = config.kappa;

    let mut min_ratio = f64::INFINITY;
    for r in records.s2.iter().chain(&records.t2).chain(&records.s3) {
        min_ratio = min_ratio.min(r.equiv_ratio);
        let finite = r.hormander_ratio.is_finite()
            && r.hormander_ratio > 0.0
            && r.restriction_ratio.is_finite()
            && r.restriction_ratio > 0.0
            && r.equiv_ratio.is_finite()
            && r.reconstructed_hormander.is_finite();
        if !finite {
            pass = false;
            detail.push_str(&format!("non-finite ratio at {}:{}; ", r.manifold, r.index));
        }
    }
    if min_ratio < 1.0 - 1e-6 {
        pass = false;
        detail.push_str(&format!("min 2I/sup^2 = {min_ratio:.8} < 1 - 1e-6; "));
    }

    // flat families: the square mean gives exactly 1 + J0(2 kappa), and the
    // squared first mean gives exactly 2 J0(kappa)^2 (its Jensen minorant)
    let flat_expected = 1.0 + j0_oracle(2.0 * kappa);
    let flat_sq_expected = 2.0 * j0_oracle(kappa) * j0_oracle(kappa);
    for r in &records.t2 {
        if (r.equiv_ratio - flat_expected).abs() > 1e-8 {
            pass = false;
            detail.push_str(&format!(
                "t2 {} equiv {:.10} vs oracle {flat_expected:.10}; ",
                r.index, r.equiv_ratio
            ));
        }
        if (r.mean_ratio_sq - flat_sq_expected).abs() > 1e-8 {
            pass = false;
            detail.push_str(&format!(
                "t2 {} mean-square {:.10} vs 2 J0(kappa)^2 = {flat_sq_expected:.10}; ",
                r.index, r.mean_ratio_sq
            ));
        }
        if r.equiv_ratio < flat_sq_expected - 1e-8 {
            pass = false;
            detail.push_str("flat equiv ratio under its Jensen minorant; ");
        }
    }

    // zonal closed form 2 P_l(cos(kappa/lambda))^2 at sample degrees
    for l in [50u32, 100] {
        let rec = records
            .s2
            .iter()
            .find(|r| r.index == l.to_string())
            .expect("degree in sweep");
        let t = (kappa / rec.lambda).cos();
        let p = legendre(l, t).unwrap();
        let expected = 2.0 * p * p;
        if (rec.equiv_ratio - expected).abs() > 1e-8 {
            pass = false;
            detail.push_str(&format!(
                "s2 l={l} equiv {:.10} vs closed {expected:.10}; ",
                rec.equiv_ratio
            ));
        }
    }

    // 3-sphere zonal closed form validates the product grid:
    // 2 (U_l(cos(kappa/lambda)) / (l+1))^2
    for l in [20u32, 50] {
        let rec = records
            .s3
            .iter()
            .find(|r| r.index == l.to_string())
            .expect("degree in sweep");
        let t = (kappa / rec.lambda).cos();
        let u = chebyshev_u(l, t) / (l as f64 + 1.0);
        let expected = 2.0 * u * u;
        if (rec.equiv_ratio - expected).abs() > 1e-8 {
            pass = false;
            detail.push_str(&format!(
                "s3 l={l} equiv {:.10} vs closed {expected:.10}; ",
                rec.equiv_ratio
            ));
        }
    }

    CheckResult::new(
        "equivalence_engine",
        pass,
        min_ratio - (1.0 - 1e-6),
        1e-6,
        format!("min 2I/sup^2 = {min_ratio:.8} across all sweeps {detail}"),
    )
}

fn check_determinism(config: &SuiteConfig, first: &SweepData) -> CheckResult {
    // recompute the full record set and compare CSV bytes
    let second = compute_sweeps(config).unwrap();
    let mut a = first.s2.clone();
    a.extend(first.t2.clone());
    a.extend(first.s3.clone());
    a.extend(first.s2_p4.clone());
    sort_records(&mut a);
    let mut b = second.s2.clone();
    b.extend(second.t2.clone());
    b.extend(second.s3.clone());
    b.extend(second.s2_p4.clone());
    sort_records(&mut b);
    let csv_a = records_to_csv(&a);
    let csv_b = records_to_csv(&b);
    let pass = csv_a == csv_b;
    CheckResult::new(
        "determinism",
        pass,
        if pass { 0.0 } else { -1.0 },
        0.0,
        format!(
            "{} bytes, byte-identical across two runs: {pass}",
            csv_a.len()
        ),
    )
}

/// Run every check and assemble the report. Individual failures never abort
/// the suite.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let sweeps = compute_sweeps(config)?;

    let mut checks = vec![
        check_specialfun(),
        check_flat_mean_value(),
        check_epd(config),
        check_comparison(config),
        check_kappa_half_bound(config),
        check_perturbation_series(config),
        check_hormander(&sweeps),
        check_restriction(&sweeps, config),
        check_equivalence(&sweeps, config),
        check_determinism(config, &sweeps),
    ];

    let runtime = start.elapsed().as_secs_f64();
    let runtime_ok = runtime <= 300.0;
    checks.push(CheckResult::new(
        "runtime",
        runtime_ok,
        300.0 - runtime,
        300.0,
        format!("total {runtime:.1}s against the 300s budget"),
    ));

    let mut records = sweeps.s2;
    records.extend(sweeps.t2);
    records.extend(sweeps.s3);
    records.extend(sweeps.s2_p4);
    sort_records(&mut records);

    Ok(SuiteReport {
        config: config.clone(),
        checks,
        records,
        skipped: sweeps.skipped,
        runtime_seconds: runtime,
    })
}
