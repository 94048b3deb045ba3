//! The two barrier functions behind the comparison principle, with their
//! sign and convexity properties verified at construction.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierKind {
    /// `v(x) = e^{-M(x - x0)} - 1`: vanishes at `x0`, strictly decreasing,
    /// positive left of `x0`, with `v''(x0) = M^2 > 0`.
    Hopf { m: f64, x0: f64 },
    /// `v(x) = e^x - x - 1`: nonnegative, `v(0) = v'(0) = 0`, `v'' > 0`.
    Growth,
}

#[derive(Debug, Clone, Copy)]
pub struct Barrier {
    pub kind: BarrierKind,
}

impl Barrier {
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            BarrierKind::Hopf { m, x0 } => (-m * (x - x0)).exp() - 1.0,
            BarrierKind::Growth => x.exp() - x - 1.0,
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self.kind {
            BarrierKind::Hopf { m, x0 } => -m * (-m * (x - x0)).exp(),
            BarrierKind::Growth => x.exp() - 1.0,
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match self.kind {
            BarrierKind::Hopf { m, x0 } => m * m * (-m * (x - x0)).exp(),
            BarrierKind::Growth => x.exp(),
        }
    }
}

/// Build a barrier and verify its defining properties on a dense sample of
/// its working domain.
pub fn make_barrier(kind: BarrierKind) -> Result<Barrier> {
    match kind {
        BarrierKind::Hopf { m, x0 } => {
            if !(m > 0.0) || !(x0 > 0.0) {
                return Err(Error::Domain(format!(
                    "hopf barrier needs M > 0 and x0 > 0, got M = {m}, x0 = {x0}"
                )));
            }
            let b = Barrier { kind };
            if b.eval(x0).abs() > 1e-14 || b.second_deriv(x0) <= 0.0 {
                return Err(Error::Numerical("hopf barrier invariants failed".into()));
            }
            for i in 0..=200 {
                let x = x0 * i as f64 / 200.0;
                // strictly decreasing; positive strictly left of x0
                if b.deriv(x) >= 0.0 || (x < x0 * (1.0 - 1e-12) && b.eval(x) <= 0.0) {
                    return Err(Error::Numerical("hopf barrier sign check failed".into()));
                }
            }
            Ok(b)
        }
        BarrierKind::Growth => {
            let b = Barrier { kind };
            if b.eval(0.0) != 0.0 || b.deriv(0.0) != 0.0 {
                return Err(Error::Numerical("growth barrier data failed".into()));
            }
            for i in 0..=200 {
                let x = -1.0 + 3.0 * i as f64 / 200.0;
                if b.eval(x) < 0.0 || b.second_deriv(x) <= 0.0 {
                    return Err(Error::Numerical("growth barrier sign check failed".into()));
                }
            }
            Ok(b)
        }
    }
}

/// Least power-of-two `M` for which `M^2 - M sup|g| - sup|h| >= 0` on
/// `[a, x0]` (the bound that makes `L v >= 0` for the Hopf barrier given
/// only bounds on the coefficients), cross-checked by direct grid
/// evaluation of `L v`.
pub fn hopf_least_m(
    g: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> f64,
    a: f64,
    x0: f64,
) -> Result<f64> {
    if !(0.0 < a && a < x0) {
        return Err(Error::Domain(format!(
            "hopf_least_m: need 0 < a < x0, got [{a}, {x0}]"
        )));
    }
    let samples = 400;
    let mut g_sup = 0.0f64;
    let mut h_sup = 0.0f64;
    for i in 0..=samples {
        let x = a + (x0 - a) * i as f64 / samples as f64;
        g_sup = g_sup.max(g(x).abs());
        h_sup = h_sup.max(h(x).abs());
    }
    let mut m = 1.0f64;
    while m * m - m * g_sup - h_sup < 0.0 {
        m *= 2.0;
        if m > 2.0f64.powi(60) {
            return Err(Error::Numerical(
                "hopf_least_m: no admissible M below 2^60".into(),
            ));
        }
    }
    // direct oracle: L v >= 0 on the grid for the reported M
    let b = Barrier {
        kind: BarrierKind::Hopf { m, x0 },
    };
    for i in 0..=samples {
        let x = a + (x0 - a) * i as f64 / samples as f64;
        let lv = b.second_deriv(x) + g(x) * b.deriv(x) + h(x) * b.eval(x);
        if lv < -1e-12 * (1.0 + lv.abs()) {
            return Err(Error::Numerical(format!(
                "hopf_least_m: bound criterion passed but L v < 0 at x = {x}"
            )));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_barrier_closed_values() {
        let b = make_barrier(BarrierKind::Growth).unwrap();
        assert_eq!(b.eval(0.0), 0.0);
        assert_eq!(b.deriv(0.0), 0.0);
        assert!((b.eval(1.0) - (std::f64::consts::E - 2.0)).abs() < 1e-14);
        assert!(b.eval(1.0) > 0.71 && b.eval(1.0) < 0.72);
    }

    #[test]
    fn hopf_barrier_signs() {
        let b = make_barrier(BarrierKind::Hopf { m: 3.0, x0: 1.0 }).unwrap();
        assert!(b.eval(1.0).abs() < 1e-14);
        // positive left of x0: monotone exponential
        let v_half = b.eval(0.5);
        assert!((v_half - (1.5f64.exp() - 1.0)).abs() < 1e-12);
        assert!(v_half > 0.0);
        assert!(b.eval(1.5) < 0.0);
        assert!(b.second_deriv(1.0) > 0.0);
        assert!(make_barrier(BarrierKind::Hopf { m: -1.0, x0: 1.0 }).is_err());
    }

    #[test]
    fn least_m_satisfies_quadratic_bound() {
        // g = 1/x, h = 1 on [0.5, 1]: sup|g| = 2, sup|h| = 1, so the least
        // power of two with M^2 - 2M - 1 >= 0 is 4
        let m = hopf_least_m(&|x| 1.0 / x, &|_| 1.0, 0.5, 1.0).unwrap();
        assert_eq!(m, 4.0);
        assert!(m * m - 2.0 * m - 1.0 >= 0.0);
        // direct grid evaluation of L v already ran inside; sanity here
        let b = Barrier {
            kind: BarrierKind::Hopf { m, x0: 1.0 },
        };
        for i in 0..=50 {
            let x = 0.5 + 0.5 * i as f64 / 50.0;
            let lv = b.second_deriv(x) + (1.0 / x) * b.deriv(x) + b.eval(x);
            assert!(lv >= 0.0, "x = {x}: {lv}");
        }
    }
}
