//! Numerical machinery for pointwise bounds on Laplace–Beltrami eigenfunctions
//! via spherical means on model manifolds.
//!
//! The crate is organized around the pipeline that turns a restriction-type
//! bound on small geodesic spheres into a sup-norm bound:
//!
//! * [`specialfun`] — from-scratch Bessel functions `J_nu`, `Y_nu` for the
//!   orders `(n-2)/2`, `n = 2..=5`, the fundamental radial pair with its
//!   Wronskian, Legendre polynomials, and the universal profile `v0`.
//! * [`manifold`] — a catalog of exact model manifolds (flat torus, round
//!   spheres, plane patch) with radial volume geometry, geodesic-sphere
//!   quadrature, closed-form eigenfunction families and `L^2` norms.
//! * [`means`] — spherical means `I_f(x, r)`, the Euler–Poisson–Darboux
//!   residual and differential-inequality checks, a divergence-identity
//!   check, and maximum location.
//! * [`odecmp`] — a fourth-order solver for second-order radial problems with
//!   a regular singular point at the origin, a grid-certified comparison
//!   principle, and the two barrier functions it leans on.
//! * [`perturb`] — the rescaling `rho = r*sqrt(2)*lambda`, the perturbation
//!   series built by variation of parameters, uniform-bound measurements, the
//!   kappa scan, and the half-bound certificate.
//!
//! Everything is deterministic and side-effect free; all types are immutable
//! after construction and safe to use from multiple threads.

// `!(x > 0.0)` guards reject NaN along with the out-of-domain sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod manifold;
pub mod means;
pub mod numerics;
pub mod odecmp;
pub mod perturb;
pub mod specialfun;

pub use error::{Error, Result};
