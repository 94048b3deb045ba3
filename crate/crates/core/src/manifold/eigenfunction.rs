//! Exact eigenfunction families of the catalog manifolds.

use super::{ManifoldId, Point};
use crate::specialfun::{chebyshev_u, legendre_unchecked as legendre_eval};
use crate::{Error, Result};

/// Anything evaluable pointwise on a manifold.
pub trait ScalarField {
    fn value(&self, p: &Point) -> f64;
}

impl<F: Fn(&Point) -> f64> ScalarField for F {
    fn value(&self, p: &Point) -> f64 {
        self(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// The constant eigenfunction, eigenvalue 0.
    Constant { value: f64 },
    /// Zonal harmonic about a pole on the 2-sphere: `P_l(cos theta)`.
    ZonalS2 { l: u32, pole: [f64; 3] },
    /// Zonal harmonic on the 3-sphere: `sin((l+1)theta) / ((l+1) sin theta)`.
    ZonalS3 { l: u32, pole: [f64; 4] },
    /// Plane wave on the torus: `cos(k . x + phase)`.
    FreqT2 { k: (i32, i32), phase: f64 },
}

/// An exact Laplace–Beltrami eigenfunction: `-Delta psi = lambda^2 psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenfunction {
    manifold: ManifoldId,
    family: Family,
    lambda: f64,
}

impl Eigenfunction {
    /// Zonal harmonic of degree `l` on `s2`; `lambda^2 = l(l+1)`.
    pub fn zonal_s2(l: u32) -> Self {
        Eigenfunction {
            manifold: ManifoldId::S2,
            family: Family::ZonalS2 {
                l,
                pole: [0.0, 0.0, 1.0],
            },
            lambda: ((l * (l + 1)) as f64).sqrt(),
        }
    }

    pub fn zonal_s2_about(l: u32, pole: [f64; 3]) -> Self {
        Eigenfunction {
            manifold: ManifoldId::S2,
            family: Family::ZonalS2 { l, pole },
            lambda: ((l * (l + 1)) as f64).sqrt(),
        }
    }

    /// Zonal harmonic of degree `l` on `s3`; `lambda^2 = l(l+2)`.
    pub fn zonal_s3(l: u32) -> Self {
        Eigenfunction {
            manifold: ManifoldId::S3,
            family: Family::ZonalS3 {
                l,
                pole: [0.0, 0.0, 0.0, 1.0],
            },
            lambda: ((l * (l + 2)) as f64).sqrt(),
        }
    }

    /// Plane wave `cos(k . x + phase)` on the torus; `lambda = |k|`.
    /// The zero frequency is allowed only as the constant eigenfunction.
    pub fn freq_t2(k: (i32, i32), phase: f64) -> Result<Self> {
        if k == (0, 0) && phase.cos().abs() < 1e-300 {
            return Err(Error::Domain(
                "freq_t2: zero frequency with vanishing constant".into(),
            ));
        }
        let lambda = ((k.0 * k.0 + k.1 * k.1) as f64).sqrt();
        Ok(Eigenfunction {
            manifold: ManifoldId::T2,
            family: Family::FreqT2 { k, phase },
            lambda,
        })
    }

    pub fn constant(manifold: ManifoldId, value: f64) -> Self {
        Eigenfunction {
            manifold,
            family: Family::Constant { value },
            lambda: 0.0,
        }
    }

    pub fn manifold(&self) -> ManifoldId {
        self.manifold
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The frequency `lambda`, with `-Delta psi = lambda^2 psi`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// A short tag naming the family in reports.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant { .. } => "const",
            Family::ZonalS2 { .. } | Family::ZonalS3 { .. } => "zonal",
            Family::FreqT2 { .. } => "freq",
        }
    }

    /// Index label for reports: the degree for zonal families, the frequency
    /// vector for torus waves.
    pub fn index_label(&self) -> String {
        match self.family {
            Family::Constant { .. } => "0".to_string(),
            Family::ZonalS2 { l, .. } | Family::ZonalS3 { l, .. } => l.to_string(),
            Family::FreqT2 { k, .. } => format!("{}_{}", k.0, k.1),
        }
    }

    pub fn eval(&self, p: &Point) -> f64 {
        match (&self.family, p) {
            (Family::Constant { value }, _) => *value,
            (Family::ZonalS2 { l, pole }, Point::S2(v)) => {
                let t = (v[0] * pole[0] + v[1] * pole[1] + v[2] * pole[2]).clamp(-1.0, 1.0);
                legendre_eval(*l, t)
            }
            (Family::ZonalS3 { l, pole }, Point::S3(v)) => {
                let t = (v[0] * pole[0] + v[1] * pole[1] + v[2] * pole[2] + v[3] * pole[3])
                    .clamp(-1.0, 1.0);
                chebyshev_u(*l, t) / (*l as f64 + 1.0)
            }
            (Family::FreqT2 { k, phase }, Point::T2 { x, y }) => {
                (k.0 as f64 * x + k.1 as f64 * y + phase).cos()
            }
            _ => panic!("eigenfunction evaluated on a foreign point"),
        }
    }
}

impl ScalarField for Eigenfunction {
    fn value(&self, p: &Point) -> f64 {
        self.eval(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{make_manifold, TWO_PI};

    #[test]
    fn lambda_values_are_exact() {
        assert_eq!(Eigenfunction::freq_t2((3, 4), 0.0).unwrap().lambda(), 5.0);
        let z2 = Eigenfunction::zonal_s2(2);
        assert!((z2.lambda() * z2.lambda() - 6.0).abs() < 1e-12);
        let z3 = Eigenfunction::zonal_s3(1);
        assert!((z3.lambda() * z3.lambda() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zonal_s2_at_pole_is_one() {
        let f = Eigenfunction::zonal_s2(2);
        assert!((f.eval(&Point::S2([0.0, 0.0, 1.0])) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zonal_s3_degree_one_is_cosine_of_distance() {
        let f = Eigenfunction::zonal_s3(1);
        let m = make_manifold(ManifoldId::S3);
        let pole = m.base_point();
        for i in 0..40 {
            let theta = 0.07 * i as f64;
            let p = m.exp_in_frame(&pole, &[theta, 0.0, 0.0]);
            assert!((f.eval(&p) - theta.cos()).abs() < 1e-10, "theta = {theta}");
        }
    }

    /// Discrete Laplacian via the spherical-mean expansion
    /// `I(p, h) = f(p) + h^2/(2n) Delta f + O(h^4)`: residual against
    /// `-lambda^2 f` shrinks at second order under mesh halving.
    #[test]
    fn eigen_equation_residual_second_order() {
        let cases: Vec<(ManifoldId, Eigenfunction)> = vec![
            (ManifoldId::T2, Eigenfunction::freq_t2((3, 4), 0.3).unwrap()),
            (ManifoldId::S2, Eigenfunction::zonal_s2(5)),
            (ManifoldId::S3, Eigenfunction::zonal_s3(4)),
        ];
        for (id, f) in cases {
            let m = make_manifold(id);
            let n = m.dimension() as f64;
            let mut points = Vec::new();
            // 20 deterministic sample points away from degenerate spots
            for i in 0..20 {
                let s = (i as f64 + 0.5) / 20.0;
                let p = match id {
                    ManifoldId::T2 => Point::T2 {
                        x: wrap_local(1.1 + 3.7 * s),
                        y: wrap_local(0.3 + 5.1 * s),
                    },
                    ManifoldId::S2 | ManifoldId::S3 => {
                        let mut coeffs = vec![0.0; m.dimension() as usize];
                        coeffs[0] = 0.4 + 1.9 * s;
                        if coeffs.len() > 1 {
                            coeffs[1] = 0.2 * s;
                        }
                        m.exp_in_frame(&m.base_point(), &coeffs)
                    }
                    ManifoldId::E2 => unreachable!(),
                };
                points.push(p);
            }
            let residual_at = |h: f64| -> f64 {
                let mut worst: f64 = 0.0;
                for p in &points {
                    let quad = m.geodesic_sphere(p, h, 64).unwrap();
                    let mean = quad.mean(&|q: &Point| f.eval(q));
                    let lap = 2.0 * n * (mean - f.eval(p)) / (h * h);
                    worst = worst.max((lap + f.lambda() * f.lambda() * f.eval(p)).abs());
                }
                worst
            };
            let coarse = residual_at(0.02);
            let fine = residual_at(0.01);
            let order = (coarse / fine).log2();
            assert!(order >= 1.8, "{id:?}: order {order}, {coarse} -> {fine}");
        }
    }

    fn wrap_local(v: f64) -> f64 {
        v.rem_euclid(TWO_PI)
    }
}
