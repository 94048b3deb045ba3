//! Catalog of exact model manifolds on which geodesic-ball volume depends
//! only on the radius: the flat square torus of side `2*pi`, the unit round
//! 2- and 3-spheres, and a Euclidean plane patch kept for oracles.

mod eigenfunction;
mod geometry;
mod quadrature;

pub use eigenfunction::{Eigenfunction, Family, ScalarField};
pub use geometry::VolumeGeometry;
pub use quadrature::GeodesicSphereQuadrature;

use crate::{Error, Result};
use geometry::GeomKind;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldId {
    /// Flat square torus with side `2*pi`; eigenvalues are exactly `|k|^2`.
    T2,
    /// Unit round 2-sphere.
    S2,
    /// Unit round 3-sphere.
    S3,
    /// Euclidean plane patch `[0, 2*pi)^2`, used only as an oracle.
    E2,
}

impl ManifoldId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "t2" => Ok(Self::T2),
            "s2" => Ok(Self::S2),
            "s3" => Ok(Self::S3),
            "e2" => Ok(Self::E2),
            other => Err(Error::Unsupported(format!("unknown manifold id {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::T2 => "t2",
            Self::S2 => "s2",
            Self::S3 => "s3",
            Self::E2 => "e2",
        }
    }
}

/// A point in the intrinsic coordinates of its manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    T2 { x: f64, y: f64 },
    E2 { x: f64, y: f64 },
    S2([f64; 3]),
    S3([f64; 4]),
}

/// One of the catalog manifolds together with its radial volume geometry.
#[derive(Debug, Clone, Copy)]
pub struct ModelManifold {
    id: ManifoldId,
    geometry: VolumeGeometry,
    total_volume: f64,
}

/// Build a catalog manifold.
pub fn make_manifold(id: ManifoldId) -> ModelManifold {
    let pi = std::f64::consts::PI;
    let (geometry, total_volume) = match id {
        ManifoldId::T2 => (VolumeGeometry::new(GeomKind::Flat2, pi), TWO_PI * TWO_PI),
        ManifoldId::E2 => (
            VolumeGeometry::new(GeomKind::Flat2, f64::INFINITY),
            TWO_PI * TWO_PI,
        ),
        ManifoldId::S2 => (VolumeGeometry::new(GeomKind::Sphere2, pi), 4.0 * pi),
        ManifoldId::S3 => (VolumeGeometry::new(GeomKind::Sphere3, pi), 2.0 * pi * pi),
    };
    ModelManifold {
        id,
        geometry,
        total_volume,
    }
}

fn wrap(v: f64) -> f64 {
    v.rem_euclid(TWO_PI)
}

fn wrapped_delta(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TWO_PI;
    d.min(TWO_PI - d)
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = dot3(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn normalize4(v: [f64; 4]) -> [f64; 4] {
    let n = dot4(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

/// Orthonormal tangent frame at a point of the 2-sphere.
pub(crate) fn frame_s2(c: &[f64; 3]) -> [[f64; 3]; 2] {
    let axis = if c[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let e1 = normalize3(cross3(c, &axis));
    let e2 = cross3(c, &e1);
    [e1, e2]
}

/// Orthonormal tangent frame at a point of the 3-sphere (Gram–Schmidt on the
/// standard basis, dropping the axis most aligned with the point).
pub(crate) fn frame_s3(c: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut drop = 0;
    for i in 1..4 {
        if c[i].abs() > c[drop].abs() {
            drop = i;
        }
    }
    let mut frame = [[0.0; 4]; 3];
    let mut count = 0;
    for axis in 0..4 {
        if axis == drop {
            continue;
        }
        let mut v = [0.0; 4];
        v[axis] = 1.0;
        let pc = dot4(&v, c);
        for j in 0..4 {
            v[j] -= pc * c[j];
        }
        for prev in frame.iter().take(count) {
            let pv = dot4(&v, prev);
            for j in 0..4 {
                v[j] -= pv * prev[j];
            }
        }
        frame[count] = normalize4(v);
        count += 1;
    }
    frame
}

impl ModelManifold {
    pub fn id(&self) -> ManifoldId {
        self.id
    }

    pub fn geometry(&self) -> &VolumeGeometry {
        &self.geometry
    }

    pub fn dimension(&self) -> u32 {
        self.geometry.dimension()
    }

    pub fn injectivity_radius(&self) -> f64 {
        self.geometry.injectivity_radius()
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    /// Geodesic distance between two points.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        match (self.id, p, q) {
            (ManifoldId::T2, Point::T2 { x: x1, y: y1 }, Point::T2 { x: x2, y: y2 }) => {
                let dx = wrapped_delta(*x1, *x2);
                let dy = wrapped_delta(*y1, *y2);
                (dx * dx + dy * dy).sqrt()
            }
            (ManifoldId::E2, Point::E2 { x: x1, y: y1 }, Point::E2 { x: x2, y: y2 }) => {
                ((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2)).sqrt()
            }
            (ManifoldId::S2, Point::S2(a), Point::S2(b)) => dot3(a, b).clamp(-1.0, 1.0).acos(),
            (ManifoldId::S3, Point::S3(a), Point::S3(b)) => dot4(a, b).clamp(-1.0, 1.0).acos(),
            _ => panic!("point does not belong to manifold {:?}", self.id),
        }
    }

    /// A canonical base point: the origin of the torus cell, the north pole
    /// of the spheres.
    pub fn base_point(&self) -> Point {
        match self.id {
            ManifoldId::T2 => Point::T2 { x: 0.0, y: 0.0 },
            ManifoldId::E2 => Point::E2 { x: 0.0, y: 0.0 },
            ManifoldId::S2 => Point::S2([0.0, 0.0, 1.0]),
            ManifoldId::S3 => Point::S3([0.0, 0.0, 0.0, 1.0]),
        }
    }

    /// Exponential map expressed in an orthonormal tangent frame at `p`;
    /// `coeffs` are the tangent coordinates (length = dimension).
    pub fn exp_in_frame(&self, p: &Point, coeffs: &[f64]) -> Point {
        match (self.id, p) {
            (ManifoldId::T2, Point::T2 { x, y }) => Point::T2 {
                x: wrap(x + coeffs[0]),
                y: wrap(y + coeffs[1]),
            },
            (ManifoldId::E2, Point::E2 { x, y }) => Point::E2 {
                x: x + coeffs[0],
                y: y + coeffs[1],
            },
            (ManifoldId::S2, Point::S2(c)) => {
                let frame = frame_s2(c);
                let norm = (coeffs[0] * coeffs[0] + coeffs[1] * coeffs[1]).sqrt();
                if norm < 1e-300 {
                    return Point::S2(*c);
                }
                let (s, co) = (norm.sin(), norm.cos());
                let mut out = [0.0; 3];
                for j in 0..3 {
                    out[j] =
                        co * c[j] + s * (coeffs[0] * frame[0][j] + coeffs[1] * frame[1][j]) / norm;
                }
                Point::S2(normalize3(out))
            }
            (ManifoldId::S3, Point::S3(c)) => {
                let frame = frame_s3(c);
                let norm = coeffs.iter().take(3).map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-300 {
                    return Point::S3(*c);
                }
                let (s, co) = (norm.sin(), norm.cos());
                let mut out = [0.0; 4];
                for j in 0..4 {
                    let dir: f64 = (0..3).map(|i| coeffs[i] * frame[i][j]).sum();
                    out[j] = co * c[j] + s * dir / norm;
                }
                Point::S3(normalize4(out))
            }
            _ => panic!("point does not belong to manifold {:?}", self.id),
        }
    }

    /// Quadrature nodes and weights on the geodesic sphere of radius `r`
    /// around `center`; weights carry the surface measure and sum to `h(r)`.
    pub fn geodesic_sphere(
        &self,
        center: &Point,
        r: f64,
        m: usize,
    ) -> Result<GeodesicSphereQuadrature> {
        quadrature::geodesic_sphere(self, center, r, m)
    }

    /// `L^2(M)` norm of a catalog eigenfunction from its closed form.
    pub fn l2_norm(&self, f: &Eigenfunction) -> f64 {
        quadrature::l2_norm_closed(self, f)
    }

    /// `L^2(M)` norm of an arbitrary field by tensor-product quadrature with
    /// roughly `res` points per coordinate direction.
    pub fn l2_norm_quadrature(&self, f: &dyn ScalarField, res: usize) -> f64 {
        quadrature::l2_norm_quadrature(self, f, res)
    }

    /// Geodesic-ball volume by radial quadrature of measured sphere areas.
    pub fn ball_volume_quadrature(
        &self,
        center: &Point,
        r: f64,
        steps: usize,
        m: usize,
    ) -> Result<f64> {
        quadrature::ball_volume_quadrature(self, center, r, steps, m)
    }

    /// A deterministic scan grid covering the manifold, for coarse searches.
    pub fn scan_points(&self, res: usize) -> Vec<Point> {
        quadrature::scan_points(self, res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_point(m: &ModelManifold, rng: &mut StdRng) -> Point {
        match m.id() {
            ManifoldId::T2 => Point::T2 {
                x: rng.random_range(0.0..TWO_PI),
                y: rng.random_range(0.0..TWO_PI),
            },
            ManifoldId::E2 => Point::E2 {
                x: rng.random_range(0.0..TWO_PI),
                y: rng.random_range(0.0..TWO_PI),
            },
            ManifoldId::S2 => {
                let v = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                Point::S2(normalize3(v))
            }
            ManifoldId::S3 => {
                let v = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                Point::S3(normalize4(v))
            }
        }
    }

    #[test]
    fn catalog_geometries_match_closed_forms() {
        let t2 = make_manifold(ManifoldId::T2);
        for r in [0.1, 0.5, 1.0, 2.0] {
            assert_eq!(t2.geometry().c_at(r), 0.0);
            assert!((t2.geometry().h_at(r) - TWO_PI * r).abs() < 1e-14);
        }
        let s2 = make_manifold(ManifoldId::S2);
        assert!((s2.geometry().g_at(0.5) - 0.5f64.cos() / 0.5f64.sin()).abs() < 1e-14);
        let s3 = make_manifold(ManifoldId::S3);
        assert!(
            (s3.geometry().h_at(0.7) - 4.0 * std::f64::consts::PI * 0.7f64.sin().powi(2)).abs()
                < 1e-12
        );
    }

    #[test]
    fn exp_map_hits_prescribed_distance() {
        let mut rng = StdRng::seed_from_u64(7);
        for id in [
            ManifoldId::T2,
            ManifoldId::S2,
            ManifoldId::S3,
            ManifoldId::E2,
        ] {
            let m = make_manifold(id);
            for _ in 0..20 {
                let p = random_point(&m, &mut rng);
                let r = rng.random_range(0.05..1.2);
                let mut coeffs = vec![0.0; m.dimension() as usize];
                // random direction
                for c in coeffs.iter_mut() {
                    *c = rng.random_range(-1.0..1.0);
                }
                let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
                for c in coeffs.iter_mut() {
                    *c *= r / norm;
                }
                let q = m.exp_in_frame(&p, &coeffs);
                assert!(
                    (m.distance(&p, &q) - r).abs() < 1e-10,
                    "id {id:?}: {} vs {r}",
                    m.distance(&p, &q)
                );
            }
        }
    }

    #[test]
    fn ball_volume_is_center_independent() {
        let mut rng = StdRng::seed_from_u64(11);
        for id in [ManifoldId::T2, ManifoldId::S2] {
            let m = make_manifold(id);
            let reference = m
                .ball_volume_quadrature(&m.base_point(), 1.0, 400, 64)
                .unwrap();
            for _ in 0..5 {
                let c = random_point(&m, &mut rng);
                let vol = m.ball_volume_quadrature(&c, 1.0, 400, 64).unwrap();
                assert!((vol - reference).abs() < 1e-10);
            }
            // quadrature against the closed form
            assert!((reference - m.geometry().ball_volume(1.0)).abs() < 1e-8);
        }
    }
}
