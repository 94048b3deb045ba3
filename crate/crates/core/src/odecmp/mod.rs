//! Singular second-order initial value problems `u'' + g u' + h u = f` with
//! `g` blowing up like `a/x` at the origin, their fourth-order solver, the
//! grid-certified comparison principle, and the two barrier functions used
//! to run it.

mod barrier;
mod comparison;
mod solver;

pub use barrier::{hopf_least_m, make_barrier, Barrier, BarrierKind};
pub use comparison::{
    comparison_certificate, Certificate, CertificateOutcome, ComparisonHypotheses, GridFunction,
};
pub use solver::{solve_ivp, CoeffFn, OdeSolution, RadialCoeff, SingularIvp};
