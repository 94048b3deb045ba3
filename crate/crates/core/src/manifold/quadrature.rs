//! Geodesic-sphere quadrature, whole-manifold tensor quadrature for norms,
//! and scan grids.
//!
//! Circles on two-dimensional manifolds use the uniform trapezoid rule,
//! which is spectrally accurate for periodic integrands; the 3-sphere uses a
//! product rule (Fejér in the polar direction of the sphere of directions,
//! uniform in the azimuth).

use super::eigenfunction::{Eigenfunction, Family, ScalarField};
use super::{frame_s2, frame_s3, ManifoldId, ModelManifold, Point, TWO_PI};
use crate::numerics::{fejer1, gauss_chebyshev2};
use crate::{Error, Result};

/// Nodes on a geodesic sphere with weights carrying the surface measure;
/// the weights sum to `h(radius)`.
#[derive(Debug, Clone)]
pub struct GeodesicSphereQuadrature {
    pub center: Point,
    pub radius: f64,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl GeodesicSphereQuadrature {
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Integral of `f` over the sphere with surface measure.
    pub fn integrate(&self, f: &dyn ScalarField) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f.value(p))
            .sum()
    }

    /// Weighted average of `f` over the sphere.
    pub fn mean(&self, f: &dyn ScalarField) -> f64 {
        self.integrate(f) / self.weight_sum()
    }
}

pub(crate) fn geodesic_sphere(
    m: &ModelManifold,
    center: &Point,
    r: f64,
    nodes: usize,
) -> Result<GeodesicSphereQuadrature> {
    if !(r > 0.0) || r >= m.injectivity_radius() {
        return Err(Error::Domain(format!(
            "geodesic_sphere: radius {r} outside (0, {})",
            m.injectivity_radius()
        )));
    }
    if nodes < 16 {
        return Err(Error::Domain(format!("geodesic_sphere: m = {nodes} < 16")));
    }
    let h = m.geometry().h_at(r);
    match (m.id(), center) {
        (ManifoldId::T2 | ManifoldId::E2, _) => {
            let mut pts = Vec::with_capacity(nodes);
            for i in 0..nodes {
                let phi = TWO_PI * i as f64 / nodes as f64;
                pts.push(m.exp_in_frame(center, &[r * phi.cos(), r * phi.sin()]));
            }
            Ok(GeodesicSphereQuadrature {
                center: *center,
                radius: r,
                weights: vec![h / nodes as f64; nodes],
                nodes: pts,
            })
        }
        (ManifoldId::S2, Point::S2(c)) => {
            let frame = frame_s2(c);
            let (s, co) = (r.sin(), r.cos());
            let mut pts = Vec::with_capacity(nodes);
            for i in 0..nodes {
                let phi = TWO_PI * i as f64 / nodes as f64;
                let mut p = [0.0; 3];
                for j in 0..3 {
                    p[j] = co * c[j] + s * (phi.cos() * frame[0][j] + phi.sin() * frame[1][j]);
                }
                pts.push(Point::S2(p));
            }
            Ok(GeodesicSphereQuadrature {
                center: *center,
                radius: r,
                weights: vec![h / nodes as f64; nodes],
                nodes: pts,
            })
        }
        (ManifoldId::S3, Point::S3(c)) => {
            // Sphere of directions: Fejér in the polar cosine, uniform azimuth.
            let n_phi = nodes;
            let n_t = (nodes / 2).max(8);
            let (ts, tw) = fejer1(n_t);
            let frame = frame_s3(c);
            let (s, co) = (r.sin(), r.cos());
            let mut pts = Vec::with_capacity(n_phi * n_t);
            let mut weights = Vec::with_capacity(n_phi * n_t);
            for (t, wt) in ts.iter().zip(&tw) {
                let sq = (1.0 - t * t).sqrt();
                for i in 0..n_phi {
                    let phi = TWO_PI * i as f64 / n_phi as f64;
                    let dir = [sq * phi.cos(), sq * phi.sin(), *t];
                    let mut p = [0.0; 4];
                    for j in 0..4 {
                        let omega: f64 = (0..3).map(|a| dir[a] * frame[a][j]).sum();
                        p[j] = co * c[j] + s * omega;
                    }
                    pts.push(Point::S3(p));
                    // wt sums to 2 over the polar direction
                    weights.push(h * wt / 2.0 / n_phi as f64);
                }
            }
            Ok(GeodesicSphereQuadrature {
                center: *center,
                radius: r,
                nodes: pts,
                weights,
            })
        }
        _ => panic!("center does not belong to manifold {:?}", m.id()),
    }
}

/// Closed-form `L^2(M)` norms of the catalog families.
pub(crate) fn l2_norm_closed(m: &ModelManifold, f: &Eigenfunction) -> f64 {
    match *f.family() {
        Family::Constant { value } => value.abs() * m.total_volume().sqrt(),
        Family::ZonalS2 { l, .. } => (4.0 * std::f64::consts::PI / (2 * l + 1) as f64).sqrt(),
        Family::ZonalS3 { l, .. } => {
            (2.0 * std::f64::consts::PI * std::f64::consts::PI).sqrt() / (l as f64 + 1.0)
        }
        Family::FreqT2 { k, phase } => {
            if k == (0, 0) {
                TWO_PI * phase.cos().abs()
            } else {
                (TWO_PI * TWO_PI / 2.0).sqrt()
            }
        }
    }
}

/// Tensor-product quadrature for `int_M f^2`, then a square root.
pub(crate) fn l2_norm_quadrature(m: &ModelManifold, f: &dyn ScalarField, res: usize) -> f64 {
    let mut acc = 0.0;
    match m.id() {
        ManifoldId::T2 | ManifoldId::E2 => {
            let n = res.max(8);
            let dx = TWO_PI / n as f64;
            for i in 0..n {
                for j in 0..n {
                    let p = match m.id() {
                        ManifoldId::T2 => Point::T2 {
                            x: i as f64 * dx,
                            y: j as f64 * dx,
                        },
                        _ => Point::E2 {
                            x: i as f64 * dx,
                            y: j as f64 * dx,
                        },
                    };
                    let v = f.value(&p);
                    acc += v * v * dx * dx;
                }
            }
        }
        ManifoldId::S2 => {
            let n_t = res.max(8);
            let n_phi = res.max(8);
            let (ts, tw) = fejer1(n_t);
            for (t, wt) in ts.iter().zip(&tw) {
                let sq = (1.0 - t * t).sqrt();
                for i in 0..n_phi {
                    let phi = TWO_PI * i as f64 / n_phi as f64;
                    let p = Point::S2([sq * phi.cos(), sq * phi.sin(), *t]);
                    let v = f.value(&p);
                    acc += v * v * wt * TWO_PI / n_phi as f64;
                }
            }
        }
        ManifoldId::S3 => {
            // chi polar angle with weight sin^2(chi): Gauss-Chebyshev second kind
            let n_chi = res.max(8);
            let n_t = res.max(8);
            let n_phi = res.max(8);
            let (cs, cw) = gauss_chebyshev2(n_chi);
            let (ts, tw) = fejer1(n_t);
            for (cchi, wchi) in cs.iter().zip(&cw) {
                let schi = (1.0 - cchi * cchi).sqrt();
                for (t, wt) in ts.iter().zip(&tw) {
                    let sq = (1.0 - t * t).sqrt();
                    for i in 0..n_phi {
                        let phi = TWO_PI * i as f64 / n_phi as f64;
                        let p = Point::S3([
                            schi * sq * phi.cos(),
                            schi * sq * phi.sin(),
                            schi * t,
                            *cchi,
                        ]);
                        let v = f.value(&p);
                        acc += v * v * wchi * wt * TWO_PI / n_phi as f64;
                    }
                }
            }
        }
    }
    acc.sqrt()
}

/// Radial quadrature of measured sphere areas: `int_0^r (sum of weights) drho`
/// by composite Simpson with `h(0) = 0` at the inner end.
pub(crate) fn ball_volume_quadrature(
    m: &ModelManifold,
    center: &Point,
    r: f64,
    steps: usize,
    nodes: usize,
) -> Result<f64> {
    let dr = r / steps as f64;
    let mut areas = Vec::with_capacity(steps + 1);
    areas.push(0.0);
    for i in 1..=steps {
        let quad = geodesic_sphere(m, center, i as f64 * dr, nodes)?;
        areas.push(quad.weight_sum());
    }
    Ok(crate::numerics::simpson_uniform(&areas, dr))
}

/// Deterministic scan grid for coarse maxima searches.
pub(crate) fn scan_points(m: &ModelManifold, res: usize) -> Vec<Point> {
    let res = res.max(4);
    let mut out = Vec::new();
    match m.id() {
        ManifoldId::T2 | ManifoldId::E2 => {
            let dx = TWO_PI / res as f64;
            for i in 0..res {
                for j in 0..res {
                    out.push(match m.id() {
                        ManifoldId::T2 => Point::T2 {
                            x: i as f64 * dx,
                            y: j as f64 * dx,
                        },
                        _ => Point::E2 {
                            x: i as f64 * dx,
                            y: j as f64 * dx,
                        },
                    });
                }
            }
        }
        ManifoldId::S2 => {
            // offset latitude rows so both poles are sampled
            for i in 0..=res {
                let theta = std::f64::consts::PI * i as f64 / res as f64;
                let (st, ct) = (theta.sin(), theta.cos());
                let row = if i == 0 || i == res { 1 } else { res };
                for j in 0..row {
                    let phi = TWO_PI * j as f64 / row as f64;
                    out.push(Point::S2([st * phi.cos(), st * phi.sin(), ct]));
                }
            }
        }
        ManifoldId::S3 => {
            for a in 0..=res {
                let chi = std::f64::consts::PI * a as f64 / res as f64;
                let (sc, cc) = (chi.sin(), chi.cos());
                let rows = if a == 0 || a == res { 1 } else { res };
                for i in 0..rows {
                    let theta = std::f64::consts::PI * i as f64 / rows as f64;
                    let (st, ct) = (theta.sin(), theta.cos());
                    let cols = if i == 0 { 1 } else { rows };
                    for j in 0..cols {
                        let phi = TWO_PI * j as f64 / cols as f64;
                        out.push(Point::S3([
                            sc * st * phi.cos(),
                            sc * st * phi.sin(),
                            sc * ct,
                            cc,
                        ]));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::make_manifold;
    use proptest::prelude::*;

    #[test]
    fn weight_sums_match_surface_measure() {
        let t2 = make_manifold(ManifoldId::T2);
        let q = t2.geodesic_sphere(&t2.base_point(), 0.1, 64).unwrap();
        assert!((q.weight_sum() - TWO_PI * 0.1).abs() < 1e-12);

        let s2 = make_manifold(ManifoldId::S2);
        let q = s2.geodesic_sphere(&s2.base_point(), 1.0, 64).unwrap();
        assert!((q.weight_sum() - TWO_PI * 1.0f64.sin()).abs() < 1e-10);

        let s3 = make_manifold(ManifoldId::S3);
        let q = s3.geodesic_sphere(&s3.base_point(), 0.8, 48).unwrap();
        let h = 4.0 * std::f64::consts::PI * 0.8f64.sin().powi(2);
        assert!((q.weight_sum() - h).abs() < 1e-10 * h);
    }

    #[test]
    fn nodes_sit_at_prescribed_distance() {
        for id in [ManifoldId::T2, ManifoldId::S2, ManifoldId::S3] {
            let m = make_manifold(id);
            let center = m.exp_in_frame(&m.base_point(), &vec![0.4; m.dimension() as usize]);
            let q = m.geodesic_sphere(&center, 0.6, 32).unwrap();
            for p in &q.nodes {
                assert!((m.distance(&center, p) - 0.6).abs() < 1e-10, "{id:?}");
            }
        }
    }

    #[test]
    fn translation_invariance_on_torus() {
        let t2 = make_manifold(ManifoldId::T2);
        let q1 = t2
            .geodesic_sphere(&Point::T2 { x: 0.3, y: 1.2 }, 0.25, 32)
            .unwrap();
        let q2 = t2
            .geodesic_sphere(&Point::T2 { x: 4.0, y: 5.5 }, 0.25, 32)
            .unwrap();
        assert_eq!(q1.weights, q2.weights);
    }

    #[test]
    fn rejects_bad_radius_and_node_count() {
        let s2 = make_manifold(ManifoldId::S2);
        assert!(s2.geodesic_sphere(&s2.base_point(), 3.5, 32).is_err());
        assert!(s2.geodesic_sphere(&s2.base_point(), 0.0, 32).is_err());
        assert!(s2.geodesic_sphere(&s2.base_point(), 0.5, 8).is_err());
    }

    #[test]
    fn circle_rule_integrates_harmonics_exactly() {
        // trapezoid rule on the circle kills cos(j phi) for 0 < j < m/2
        let t2 = make_manifold(ManifoldId::T2);
        let center = Point::T2 { x: 1.0, y: 1.0 };
        let m_nodes = 64;
        let q = t2.geodesic_sphere(&center, 0.3, m_nodes).unwrap();
        for j in 1..(m_nodes / 2) {
            let mut acc = 0.0;
            for (i, w) in q.weights.iter().enumerate() {
                let phi = TWO_PI * i as f64 / m_nodes as f64;
                acc += w * (j as f64 * phi).cos();
            }
            assert!(acc.abs() < 1e-12 * q.weight_sum(), "j = {j}");
        }
    }

    #[test]
    fn closed_norms_match_quadrature() {
        let s2 = make_manifold(ManifoldId::S2);
        let zonal = Eigenfunction::zonal_s2(3);
        let closed = s2.l2_norm(&zonal);
        assert!((closed * closed - 4.0 * std::f64::consts::PI / 7.0).abs() < 1e-12);
        let quad = s2.l2_norm_quadrature(&zonal, 64);
        assert!((closed - quad).abs() < 1e-8, "{closed} vs {quad}");

        let t2 = make_manifold(ManifoldId::T2);
        let wave = Eigenfunction::freq_t2((2, 1), 0.4).unwrap();
        let closed = t2.l2_norm(&wave);
        assert!((closed * closed - TWO_PI * TWO_PI / 2.0).abs() < 1e-12);
        let quad = t2.l2_norm_quadrature(&wave, 128);
        assert!((closed - quad).abs() < 1e-8);

        let one = Eigenfunction::constant(ManifoldId::S2, 1.0);
        assert!((s2.l2_norm(&one) - (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);

        let s3 = make_manifold(ManifoldId::S3);
        let z3 = Eigenfunction::zonal_s3(2);
        let closed = s3.l2_norm(&z3);
        let quad = s3.l2_norm_quadrature(&z3, 48);
        assert!((closed - quad).abs() < 1e-8, "{closed} vs {quad}");
    }

    proptest! {
        // averaging a constant returns it, for arbitrary centers and radii
        #[test]
        fn mean_of_constant_is_constant(
            cx in 0.0f64..TWO_PI, cy in 0.0f64..TWO_PI, r in 0.01f64..1.5, c in -5.0f64..5.0
        ) {
            let t2 = make_manifold(ManifoldId::T2);
            let q = t2.geodesic_sphere(&Point::T2 { x: cx, y: cy }, r, 32).unwrap();
            let f = move |_: &Point| c;
            prop_assert!((q.mean(&f) - c).abs() < 1e-12);
        }
    }
}
