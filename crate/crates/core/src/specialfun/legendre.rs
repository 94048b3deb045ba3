//! Legendre polynomials by upward three-term recurrence, plus the Chebyshev
//! polynomials of the second kind used by the 3-sphere zonal family.

use crate::{Error, Result};

/// `P_l(t)` for `|t| <= 1` by the recurrence
/// `(l+1) P_{l+1} = (2l+1) t P_l - l P_{l-1}`.
///
/// Stable upward for the degree range used here (`l <= 500`); arguments a
/// rounding error outside `[-1, 1]` are clamped.
pub fn legendre(l: u32, t: f64) -> Result<f64> {
    if t.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("legendre: |t| = {} > 1", t.abs())));
    }
    let t = t.clamp(-1.0, 1.0);
    Ok(legendre_unchecked(l, t))
}

pub(crate) fn legendre_unchecked(l: u32, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = t;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the second kind, `U_l(t)`:
/// `sin((l+1) theta) / sin(theta)` at `t = cos(theta)`.
pub fn chebyshev_u(l: u32, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * t;
    for _ in 1..l {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct coefficient-sum oracle:
    // P_l(t) = 2^{-l} sum_k (-1)^k C(l,k) C(2l-2k,l) t^{l-2k}
    fn legendre_monomial_oracle(l: u32, t: f64) -> f64 {
        fn binom(n: u32, k: u32) -> f64 {
            let mut acc = 1.0;
            for i in 0..k {
                acc = acc * (n - i) as f64 / (i + 1) as f64;
            }
            acc
        }
        let mut sum = 0.0;
        for k in 0..=(l / 2) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom(l, k) * binom(2 * l - 2 * k, l) * t.powi((l - 2 * k) as i32);
        }
        sum / 2.0f64.powi(l as i32)
    }

    #[test]
    fn endpoint_and_closed_values() {
        for l in [0, 1, 2, 7, 40, 333] {
            assert!((legendre(l, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        // P_2(0) = (3 t^2 - 1)/2 at t = 0
        assert!((legendre(2, 0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(legendre(3, 1.2).is_err());
    }

    #[test]
    fn matches_monomial_oracle_at_low_degree() {
        for l in 0..=12u32 {
            for i in -9..=9 {
                let t = i as f64 / 9.5;
                let got = legendre(l, t).unwrap();
                let want = legendre_monomial_oracle(l, t);
                assert!((got - want).abs() < 1e-12, "l = {l}, t = {t}");
            }
        }
    }

    #[test]
    fn chebyshev_u_endpoints() {
        for l in [0u32, 1, 2, 5, 17] {
            assert!((chebyshev_u(l, 1.0) - (l + 1) as f64).abs() < 1e-12);
            let want = if l % 2 == 0 {
                (l + 1) as f64
            } else {
                -((l + 1) as f64)
            };
            assert!((chebyshev_u(l, -1.0) - want).abs() < 1e-12);
        }
        // sin((l+1)th)/sin(th) check away from the poles
        for l in [1u32, 3, 9] {
            for i in 1..10 {
                let th = 0.3 * i as f64;
                if th.sin().abs() < 1e-3 {
                    continue;
                }
                let want = ((l + 1) as f64 * th).sin() / th.sin();
                assert!((chebyshev_u(l, th.cos()) - want).abs() < 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn legendre_bounded_by_one(l in 0u32..=500, t in -1.0f64..=1.0) {
            let v = legendre(l, t).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-12);
        }
    }
}
