//! Radial volume geometry of the catalog manifolds: surface measure `h(r)`
//! of the geodesic sphere, its logarithmic derivative `g(r)`, and the
//! correction `c(r) = g(r) - (n-1)/r` which extends continuously by 0.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GeomKind {
    /// Flat two-dimensional geometry (torus cell or plane patch).
    Flat2,
    /// Unit round 2-sphere.
    Sphere2,
    /// Unit round 3-sphere.
    Sphere3,
}

/// Radial data of a manifold on which geodesic-ball volume depends only on
/// the radius.
#[derive(Debug, Clone, Copy)]
pub struct VolumeGeometry {
    kind: GeomKind,
    n: u32,
    r_inj: f64,
}

impl VolumeGeometry {
    pub(crate) fn new(kind: GeomKind, r_inj: f64) -> Self {
        let n = match kind {
            GeomKind::Flat2 | GeomKind::Sphere2 => 2,
            GeomKind::Sphere3 => 3,
        };
        VolumeGeometry { kind, n, r_inj }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// Injectivity-radius bound; geodesic spheres are only built below it.
    pub fn injectivity_radius(&self) -> f64 {
        self.r_inj
    }

    /// Surface measure of the geodesic sphere of radius `r`.
    pub fn h_at(&self, r: f64) -> f64 {
        match self.kind {
            GeomKind::Flat2 => 2.0 * std::f64::consts::PI * r,
            GeomKind::Sphere2 => 2.0 * std::f64::consts::PI * r.sin(),
            GeomKind::Sphere3 => 4.0 * std::f64::consts::PI * r.sin() * r.sin(),
        }
    }

    /// Logarithmic derivative `h'(r)/h(r)`.
    pub fn g_at(&self, r: f64) -> f64 {
        match self.kind {
            GeomKind::Flat2 => 1.0 / r,
            GeomKind::Sphere2 => r.cos() / r.sin(),
            GeomKind::Sphere3 => 2.0 * r.cos() / r.sin(),
        }
    }

    /// `c(r) = g(r) - (n-1)/r`; continuous with `c(0) = 0`. For the spheres
    /// `c(r) = -(n-1)(r/3 + r^3/45 + 2 r^5/945 + ...)`.
    pub fn c_at(&self, r: f64) -> f64 {
        match self.kind {
            GeomKind::Flat2 => 0.0,
            GeomKind::Sphere2 => cot_minus_inverse(r),
            GeomKind::Sphere3 => 2.0 * cot_minus_inverse(r),
        }
    }

    /// The rescaling correction `k(r) = (n-1)/r - g(r) = -c(r)`;
    /// nonnegative on the spheres, identically 0 on flat geometry.
    pub fn correction_k(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < self.r_inj) {
            return Err(Error::Domain(format!(
                "correction_k: r = {r} outside (0, {})",
                self.r_inj
            )));
        }
        Ok(-self.c_at(r))
    }

    /// Closed-form geodesic-ball volume, the integral of `h`.
    pub fn ball_volume(&self, r: f64) -> f64 {
        match self.kind {
            GeomKind::Flat2 => std::f64::consts::PI * r * r,
            GeomKind::Sphere2 => 2.0 * std::f64::consts::PI * (1.0 - r.cos()),
            GeomKind::Sphere3 => 2.0 * std::f64::consts::PI * (r - r.sin() * r.cos()),
        }
    }

    /// Largest radius on which `g` stays positive (`pi/2` on the spheres).
    pub fn g_positive_until(&self) -> f64 {
        match self.kind {
            GeomKind::Flat2 => self.r_inj,
            GeomKind::Sphere2 | GeomKind::Sphere3 => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// `cot(r) - 1/r` with a Taylor branch near 0 to dodge the cancellation.
fn cot_minus_inverse(r: f64) -> f64 {
    if r.abs() < 0.1 {
        let r2 = r * r;
        -r * (1.0 / 3.0 + r2 * (1.0 / 45.0 + r2 * (2.0 / 945.0 + r2 / 4725.0)))
    } else {
        r.cos() / r.sin() - 1.0 / r
    }
}
