//! Per-eigenfunction experiment records: sup and `L^2` norms, restriction
//! norms on the geodesic sphere of radius `kappa/lambda` around the located
//! maximum, the mean-comparison ratio, and the half-bound margin.

use eigenmeans::manifold::{make_manifold, Eigenfunction, ManifoldId, ModelManifold, Point};
use eigenmeans::means::locate_max;
use eigenmeans::perturb::half_bound_certify;
use eigenmeans::{Error, Result};
use serde::Serialize;

/// Knobs shared by every experiment run.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentParams {
    pub kappa: f64,
    pub p: f64,
    /// Quadrature nodes on the sphere; 0 means automatic.
    pub nodes: usize,
    /// Coarse scan resolution for the maximum search.
    pub coarse: usize,
    /// Grid for the half-bound solve.
    pub series_grid: usize,
    /// Center the sphere at the located maximum (the default) or at the
    /// manifold's base point, for exploration.
    pub center_at_max: bool,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            kappa: 1.0,
            p: 2.0,
            nodes: 0,
            coarse: 64,
            series_grid: 2048,
            center_at_max: true,
        }
    }
}

/// One row of an experiment sweep. The first ten fields form the CSV
/// schema; the rest travel only in the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRecord {
    pub manifold: String,
    pub family: String,
    pub index: String,
    pub lambda: f64,
    pub kappa: f64,
    pub p: f64,
    pub hormander_ratio: f64,
    pub restriction_ratio: f64,
    pub equiv_ratio: f64,
    pub half_bound_margin: f64,
    pub sup_norm: f64,
    pub l2_norm: f64,
    /// `||psi||_{L^p(gamma)} / ||psi||_2` without the frequency power.
    pub restriction_raw: f64,
    /// Surface measure `h(kappa/lambda)` of the sphere used.
    pub sphere_measure: f64,
    /// Sup-norm bound reconstructed from the restriction side,
    /// `sqrt(2/h) ||psi||_{L^2(gamma)} lambda^{-(n-1)/2} / ||psi||_2`.
    pub reconstructed_hormander: f64,
    /// `2 (mean of psi)^2 / sup^2` at the same radius; the squared
    /// first-power mean, with exact closed forms on the flat families.
    pub mean_ratio_sq: f64,
}

/// Compute the full record for one eigenfunction. Constant eigenfunctions
/// (`lambda = 0`) are rejected: the frequency normalizations degenerate.
pub fn compute_record(
    m: &ModelManifold,
    f: &Eigenfunction,
    params: &ExperimentParams,
) -> Result<ExperimentRecord> {
    let lambda = f.lambda();
    if lambda == 0.0 {
        return Err(Error::Domain(
            "constant eigenfunction: lambda = 0 normalization undefined".into(),
        ));
    }
    if !(params.p >= 2.0) {
        return Err(Error::Domain(format!("p = {} < 2", params.p)));
    }
    let r_gamma = params.kappa / lambda;
    if r_gamma >= m.injectivity_radius() {
        return Err(Error::Domain(format!(
            "sphere radius {r_gamma} reaches past the injectivity radius"
        )));
    }

    let located = locate_max(m, f, params.coarse);
    let sup = located.value;
    let l2 = m.l2_norm(f);
    let n = m.dimension();
    let freq_pow = lambda.powf(-((n - 1) as f64) / 2.0);
    let hormander_ratio = sup * freq_pow / l2;

    let nodes = if params.nodes == 0 {
        eigenmeans::means::default_node_count(lambda, r_gamma)
    } else {
        params.nodes
    };
    let center = if params.center_at_max {
        located.point
    } else {
        m.base_point()
    };
    let quad = m.geodesic_sphere(&center, r_gamma, nodes)?;
    let h_measure = quad.weight_sum();

    let p = params.p;
    let lp_gamma = quad
        .integrate(&|q: &Point| f.eval(q).abs().powf(p))
        .powf(1.0 / p);
    let l2_gamma = quad.integrate(&|q: &Point| f.eval(q) * f.eval(q)).sqrt();
    let restriction_raw = lp_gamma / l2;
    let c_exponent = -((n - 1) as f64) * (p - 2.0) / (2.0 * p);
    let restriction_ratio = lp_gamma * lambda.powf(c_exponent) / l2;

    let mean_sq = quad.mean(&|q: &Point| f.eval(q) * f.eval(q));
    let equiv_ratio = 2.0 * mean_sq / (sup * sup);
    let mean_first = quad.mean(f);
    let mean_ratio_sq = 2.0 * mean_first * mean_first / (sup * sup);

    let reconstructed_hormander = (2.0 / h_measure).sqrt() * l2_gamma * freq_pow / l2;

    let half_bound_margin =
        half_bound_certify(m.geometry(), lambda, params.kappa, params.series_grid)?;

    Ok(ExperimentRecord {
        manifold: m.id().name().to_string(),
        family: f.family_name().to_string(),
        index: f.index_label(),
        lambda,
        kappa: params.kappa,
        p,
        hormander_ratio,
        restriction_ratio,
        equiv_ratio,
        half_bound_margin,
        sup_norm: sup,
        l2_norm: l2,
        restriction_raw,
        sphere_measure: h_measure,
        reconstructed_hormander,
        mean_ratio_sq,
    })
}

/// Outcome of a sweep: computed records plus labels of skipped members.
pub struct SweepOutcome {
    pub records: Vec<ExperimentRecord>,
    pub skipped: Vec<String>,
}

/// Run a sweep of eigenfunctions on one manifold, skipping degenerate
/// members (the constant) rather than aborting.
pub fn run_sweep(
    id: ManifoldId,
    family: &[Eigenfunction],
    params: &ExperimentParams,
) -> Result<SweepOutcome> {
    let m = make_manifold(id);
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for f in family {
        if f.lambda() == 0.0 {
            skipped.push(format!(
                "{}:{} (lambda = 0)",
                f.family_name(),
                f.index_label()
            ));
            continue;
        }
        records.push(compute_record(&m, f, params)?);
    }
    sort_records(&mut records);
    Ok(SweepOutcome { records, skipped })
}

/// Deterministic report order regardless of construction order.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| {
        (a.manifold.as_str(), a.family.as_str())
            .cmp(&(b.manifold.as_str(), b.family.as_str()))
            .then(a.lambda.partial_cmp(&b.lambda).unwrap())
            .then(a.index.cmp(&b.index))
    });
}

/// Zonal family on a sphere.
pub fn zonal_family(id: ManifoldId, degrees: &[u32]) -> Result<Vec<Eigenfunction>> {
    degrees
        .iter()
        .map(|&l| match id {
            ManifoldId::S2 => Ok(Eigenfunction::zonal_s2(l)),
            ManifoldId::S3 => Ok(Eigenfunction::zonal_s3(l)),
            other => Err(Error::Domain(format!(
                "zonal family undefined on {}",
                other.name()
            ))),
        })
        .collect()
}

/// Plane-wave family on the torus.
pub fn freq_family(ks: &[(i32, i32)]) -> Result<Vec<Eigenfunction>> {
    ks.iter().map(|&k| Eigenfunction::freq_t2(k, 0.0)).collect()
}

/// All integer frequencies in the closed quarter-disc of radius `kmax`,
/// deduplicated and ordered by `(|k|, kx, ky)`.
pub fn freq_family_up_to(kmax: u32) -> Result<Vec<Eigenfunction>> {
    let mut ks = Vec::new();
    let kmax = kmax as i32;
    for a in 0..=kmax {
        for b in 0..=kmax {
            if a == 0 && b == 0 {
                continue;
            }
            if a * a + b * b <= kmax * kmax {
                ks.push((a, b));
            }
        }
    }
    ks.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
    freq_family(&ks)
}
