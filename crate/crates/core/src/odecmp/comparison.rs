//! Grid-certified comparison principle for `L = d^2 + g d + h`:
//! if `L u >= 0`, `L phi <= 0` and `phi > 0`, the ratio `u/phi` attains no
//! interior positive maximum; with matched data at a singular origin and
//! positive `g`, moreover `u >= phi`.

use super::solver::{OdeSolution, RadialCoeff};
use crate::numerics::{d1_grid, d2_grid};
use crate::{Error, Result};

/// A candidate function on a uniform grid, with the claimed data at the
/// (possibly off-grid) origin.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub value_at_zero: f64,
    pub deriv_at_zero: f64,
}

impl GridFunction {
    pub fn from_solution(sol: &OdeSolution) -> Self {
        GridFunction {
            xs: sol.xs.clone(),
            values: sol.u.clone(),
            value_at_zero: sol.u[0],
            deriv_at_zero: sol.du[0],
        }
    }

    /// Sample a solution on a foreign grid.
    pub fn from_solution_on(sol: &OdeSolution, xs: &[f64]) -> Self {
        GridFunction {
            xs: xs.to_vec(),
            values: xs.iter().map(|&x| sol.value_at(x)).collect(),
            value_at_zero: sol.u[0],
            deriv_at_zero: sol.du[0],
        }
    }

    fn dx(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    fn sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// Hypothesis data for a certificate: the operator coefficients, which side
/// each function claims (`L u >= 0`, `L phi <= 0`), and the numerical slack
/// granted when re-verifying those claims by finite differences.
pub struct ComparisonHypotheses<'a> {
    pub g: &'a RadialCoeff,
    pub h: &'a dyn Fn(f64) -> f64,
    /// Slack for the finite-difference verification of the claimed signs;
    /// scale it like the largest term of `L u` on the grid.
    pub hypothesis_slack: f64,
    /// Tolerance for the conclusions, relative to `sup |phi|`.
    pub conclusion_tol: f64,
    /// Require matched data `u(0) = phi(0)`, `u'(0) = phi'(0)` (to 1e-10)
    /// and positive `g`, enabling the pointwise conclusion `u >= phi`.
    pub matched_data: bool,
    /// Verify the differential inequalities only at grid points past this
    /// abscissa (candidates produced by a series-started solver carry a
    /// start-up residual below their handoff point). The conclusions are
    /// always checked on the whole grid.
    pub verify_from: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateOutcome {
    /// Hypotheses verified and conclusions hold.
    Pass,
    /// Hypotheses verified but a conclusion fails.
    Fail,
    /// The claimed differential inequalities or data do not hold; the
    /// conclusion fields are still reported but carry no weight.
    HypothesesNotMet,
}

/// Outcome of a comparison run.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub outcome: CertificateOutcome,
    /// `min (u - phi)` over the grid.
    pub min_margin: f64,
    /// Threshold the margin was held against, `-tol * sup |phi|`.
    pub margin_threshold: f64,
    /// Largest interior excess of `u/phi` over `max(boundary values, 0)`.
    pub ratio_excess: f64,
    /// Whether the matched-data part was requested and its data check held.
    pub matched_data_ok: bool,
    /// Human-readable reason when hypotheses failed.
    pub hypothesis_violation: Option<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.outcome == CertificateOutcome::Pass
    }
}

fn fd_operator(f: &GridFunction, g: &RadialCoeff, h: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
    let dx = f.dx();
    for j in 1..f.xs.len() {
        if ((f.xs[j] - f.xs[j - 1]) - dx).abs() > 1e-9 * dx {
            return Err(Error::Domain("comparison: non-uniform grid".into()));
        }
    }
    let d1 = d1_grid(&f.values, dx)?;
    let d2 = d2_grid(&f.values, dx)?;
    // end entries are never consulted; avoid the singular coefficient there
    Ok((0..f.xs.len())
        .map(|j| {
            if j == 0 || j + 1 == f.xs.len() {
                return 0.0;
            }
            let x = f.xs[j];
            d2[j] + g.eval(x) * d1[j] + h(x) * f.values[j]
        })
        .collect())
}

/// Run the comparison: verify the claimed inequalities by finite
/// differences (interior points), then certify `min(u - phi)` and the
/// no-interior-positive-maximum property of `u/phi`.
pub fn comparison_certificate(
    u: &GridFunction,
    phi: &GridFunction,
    hyp: &ComparisonHypotheses,
) -> Result<Certificate> {
    if u.xs.len() != phi.xs.len() || u.xs.len() < 5 {
        return Err(Error::Domain(
            "comparison: grids must agree and carry at least 5 points".into(),
        ));
    }
    for (a, b) in u.xs.iter().zip(&phi.xs) {
        if (a - b).abs() > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::Domain("comparison: grids must agree".into()));
        }
    }

    let mut violation: Option<String> = None;

    // claimed signs, re-verified on interior points past verify_from
    let lu = fd_operator(u, hyp.g, hyp.h)?;
    let lphi = fd_operator(phi, hyp.g, hyp.h)?;
    let first =
        u.xs.iter()
            .position(|&x| x >= hyp.verify_from)
            .unwrap_or(1)
            .max(1);
    let interior = first..u.xs.len() - 1;
    let worst_u = lu[interior.clone()]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if worst_u < -hyp.hypothesis_slack {
        violation = Some(format!("L u >= 0 fails by {}", -worst_u));
    }
    let worst_phi = lphi[interior.clone()]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if worst_phi > hyp.hypothesis_slack && violation.is_none() {
        violation = Some(format!("L phi <= 0 fails by {worst_phi}"));
    }
    let min_phi = phi.values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_phi <= 0.0 && violation.is_none() {
        violation = Some(format!("phi > 0 fails: min phi = {min_phi}"));
    }

    let mut matched_data_ok = true;
    if hyp.matched_data {
        if (u.value_at_zero - phi.value_at_zero).abs() > 1e-10
            || (u.deriv_at_zero - phi.deriv_at_zero).abs() > 1e-10
        {
            matched_data_ok = false;
            if violation.is_none() {
                violation = Some("matched data at the origin fails".into());
            }
        }
        if hyp.g.pole_strength() < -1.0 && violation.is_none() {
            violation = Some("singular exponent below -1".into());
        }
        let g_min =
            u.xs.iter()
                .skip(1)
                .map(|&x| hyp.g.eval(x))
                .fold(f64::INFINITY, f64::min);
        if g_min <= 0.0 && violation.is_none() {
            violation = Some(format!("g > 0 fails: min g = {g_min}"));
        }
    }

    // conclusion 1: pointwise margin
    let min_margin = u
        .values
        .iter()
        .zip(&phi.values)
        .map(|(a, b)| a - b)
        .fold(f64::INFINITY, f64::min);
    let margin_threshold = -hyp.conclusion_tol * phi.sup().max(1e-300);

    // conclusion 2: no interior positive maximum of u/phi beyond the
    // boundary values
    let ratio: Vec<f64> = u
        .values
        .iter()
        .zip(&phi.values)
        .map(|(a, b)| a / b)
        .collect();
    let boundary = ratio[0].max(*ratio.last().unwrap()).max(0.0);
    let ratio_excess = ratio[1..ratio.len() - 1]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        - boundary;

    let conclusions_hold = min_margin >= margin_threshold
        && ratio_excess <= hyp.conclusion_tol * (1.0 + boundary.abs());

    let outcome = if violation.is_some() {
        CertificateOutcome::HypothesesNotMet
    } else if conclusions_hold {
        CertificateOutcome::Pass
    } else {
        CertificateOutcome::Fail
    };

    Ok(Certificate {
        outcome,
        min_margin,
        margin_threshold,
        ratio_excess,
        matched_data_ok,
        hypothesis_violation: violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odecmp::solver::{solve_ivp, SingularIvp};

    fn l_radial() -> RadialCoeff {
        RadialCoeff::with_pole(1.0, Box::new(|_| 0.0))
    }

    #[test]
    fn identical_functions_pass_with_zero_margin() {
        let p = SingularIvp::radial_homogeneous(1.0, 1.0, 1.0);
        let sol = solve_ivp(&p, 1e-3, 1.5).unwrap();
        let u = GridFunction::from_solution(&sol);
        let phi = GridFunction::from_solution(&sol);
        let g = l_radial();
        let cert = comparison_certificate(
            &u,
            &phi,
            &ComparisonHypotheses {
                g: &g,
                h: &|_| 1.0,
                hypothesis_slack: 1e-6,
                conclusion_tol: 1e-9,
                matched_data: true,
                verify_from: 0.0,
            },
        )
        .unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert!(cert.min_margin.abs() < 1e-15);
    }

    #[test]
    fn forced_supersolution_dominates_v0() {
        // L u = 0.1 >= 0 with matched data against L phi = 0
        let forced = SingularIvp {
            g: RadialCoeff::with_pole(1.0, Box::new(|_| 0.0)),
            h: Box::new(|_| 1.0),
            forcing: Box::new(|_| 0.1),
            u0: 1.0,
            du0: 0.0,
        };
        let free = SingularIvp::radial_homogeneous(1.0, 1.0, 1.0);
        let su = solve_ivp(&forced, 1e-3, 2.0).unwrap();
        let sphi = solve_ivp(&free, 1e-3, 2.0).unwrap();
        let u = GridFunction::from_solution(&su);
        let phi = GridFunction::from_solution(&sphi);
        let g = l_radial();
        let cert = comparison_certificate(
            &u,
            &phi,
            &ComparisonHypotheses {
                g: &g,
                h: &|_| 1.0,
                hypothesis_slack: 1e-6,
                conclusion_tol: 1e-8,
                matched_data: true,
                verify_from: 0.0,
            },
        )
        .unwrap();
        assert!(cert.passed(), "{cert:?}");
        // strictly positive margin away from matched data
        assert!(cert.min_margin >= 0.0);
        let last = u.values.last().unwrap() - phi.values.last().unwrap();
        assert!(last > 1e-3, "expected strict domination, got {last}");
    }

    #[test]
    fn fabricated_violation_is_detected() {
        let free = SingularIvp::radial_homogeneous(1.0, 1.0, 1.0);
        let sphi = solve_ivp(&free, 1e-3, 2.0).unwrap();
        let phi = GridFunction::from_solution(&sphi);
        // perturb u downward mid-interval
        let mut u = phi.clone();
        let n = u.values.len();
        for j in 0..n {
            let x = u.xs[j];
            u.values[j] -= 0.05 * (-(x - 1.0) * (x - 1.0) / 0.02).exp();
        }
        let g = l_radial();
        let cert = comparison_certificate(
            &u,
            &phi,
            &ComparisonHypotheses {
                g: &g,
                h: &|_| 1.0,
                hypothesis_slack: 1e-6,
                conclusion_tol: 1e-8,
                matched_data: true,
                verify_from: 0.0,
            },
        )
        .unwrap();
        // the bump violates L u >= 0, and the margin detector fires too
        assert!(!cert.passed());
        assert!(cert.min_margin < -1e-3, "margin {}", cert.min_margin);
    }

    #[test]
    fn hypothesis_violation_reported_as_not_met() {
        // claim L u >= 0 for a function with L u = -0.1 < 0
        let bad = SingularIvp {
            g: RadialCoeff::with_pole(1.0, Box::new(|_| 0.0)),
            h: Box::new(|_| 1.0),
            forcing: Box::new(|_| -0.1),
            u0: 1.0,
            du0: 0.0,
        };
        let free = SingularIvp::radial_homogeneous(1.0, 1.0, 1.0);
        let su = solve_ivp(&bad, 1e-3, 1.0).unwrap();
        let sphi = solve_ivp(&free, 1e-3, 1.0).unwrap();
        let u = GridFunction::from_solution(&su);
        let phi = GridFunction::from_solution(&sphi);
        let g = l_radial();
        let cert = comparison_certificate(
            &u,
            &phi,
            &ComparisonHypotheses {
                g: &g,
                h: &|_| 1.0,
                hypothesis_slack: 1e-6,
                conclusion_tol: 1e-8,
                matched_data: true,
                verify_from: 0.0,
            },
        )
        .unwrap();
        assert_eq!(cert.outcome, CertificateOutcome::HypothesesNotMet);
        assert!(cert.hypothesis_violation.is_some());
    }
}
