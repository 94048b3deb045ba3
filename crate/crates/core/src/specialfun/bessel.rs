//! Bessel functions of the first and second kind for the four orders the
//! radial theory needs: 0, 1/2, 1, 3/2.
//!
//! Integer orders use the ascending power series (and, for `Y`, the
//! logarithmic series) up to `x = 12` and the Hankel asymptotic expansion
//! beyond. Half-integer orders reduce to closed trigonometric forms, valid
//! for every argument.

use super::BesselOrder;
use crate::{Error, Result};

/// Crossover between the power series and the asymptotic expansion for the
/// integer orders. Validated by overlap agreement in the tests.
pub const SERIES_ASYMPTOTIC_CROSSOVER: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_SERIES_TERMS: usize = 80;

/// `J_nu(x)` for `nu` in `{0, 1/2, 1, 3/2}` and `x >= 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "bessel_j: x = {x} must be nonnegative"
        )));
    }
    Ok(match order {
        BesselOrder::Zero => j0(x),
        BesselOrder::One => j1(x),
        BesselOrder::Half => j_half(x),
        BesselOrder::ThreeHalves => j_three_halves(x),
    })
}

/// `Y_nu(x)` for `nu` in `{0, 1/2, 1, 3/2}` and `x > 0`.
pub fn bessel_y(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "bessel_y: x = {x} must be positive (singular at 0)"
        )));
    }
    Ok(match order {
        BesselOrder::Zero => y0(x),
        BesselOrder::One => y1(x),
        BesselOrder::Half => y_half(x),
        BesselOrder::ThreeHalves => y_three_halves(x),
    })
}

pub fn j0(x: f64) -> f64 {
    if x <= SERIES_ASYMPTOTIC_CROSSOVER {
        j0_series(x)
    } else {
        asymptotic(0.0, x).0
    }
}

pub fn j1(x: f64) -> f64 {
    if x <= SERIES_ASYMPTOTIC_CROSSOVER {
        j1_series(x)
    } else {
        asymptotic(1.0, x).0
    }
}

pub fn y0(x: f64) -> f64 {
    if x <= SERIES_ASYMPTOTIC_CROSSOVER {
        y0_series(x)
    } else {
        asymptotic(0.0, x).1
    }
}

pub fn y1(x: f64) -> f64 {
    if x <= SERIES_ASYMPTOTIC_CROSSOVER {
        y1_series(x)
    } else {
        asymptotic(1.0, x).1
    }
}

/// Ascending series `J_0(x) = sum (-1)^m (x/2)^{2m} / (m!)^2`.
pub fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..=MAX_SERIES_TERMS {
        term *= -q / ((m * m) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// Ascending series `J_1(x) = (x/2) sum (-1)^m (x/2)^{2m} / (m! (m+1)!)`.
pub fn j1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..=MAX_SERIES_TERMS {
        term *= -q / ((m * (m + 1)) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    0.5 * x * sum
}

/// Logarithmic series for `Y_0`:
/// `(2/pi) [ (ln(x/2) + gamma) J_0(x) + sum (-1)^{m+1} H_m (x/2)^{2m} / (m!)^2 ]`.
fn y0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x/2)^{2m} / (m!)^2
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for m in 1..=MAX_SERIES_TERMS {
        term *= q / ((m * m) as f64);
        harmonic += 1.0 / m as f64;
        let contribution = if m % 2 == 1 {
            term * harmonic
        } else {
            -term * harmonic
        };
        sum += contribution;
        if term * harmonic < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    std::f64::consts::FRAC_2_PI * (((0.5 * x).ln() + EULER_GAMMA) * j0_series(x) + sum)
}

/// Logarithmic series for `Y_1` (Abramowitz–Stegun 9.1.11 with `n = 1`).
fn y1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    // sum_{m>=0} (-1)^m [psi(m+1) + psi(m+2)] (x/2)^{2m+1} / (m! (m+1)!)
    // with psi(1) = -gamma, psi(k) = -gamma + H_{k-1}.
    let mut factor = half; // (x/2)^{2m+1} / (m!(m+1)!)
    let mut h_m = 0.0; // H_m
    let mut h_m1 = 1.0; // H_{m+1}
    let mut sum = factor * (-2.0 * EULER_GAMMA + h_m + h_m1);
    let mut sign = -1.0;
    for m in 1..=MAX_SERIES_TERMS {
        factor *= q / ((m * (m + 1)) as f64);
        h_m += 1.0 / m as f64;
        h_m1 += 1.0 / (m + 1) as f64;
        let contribution = sign * factor * (-2.0 * EULER_GAMMA + h_m + h_m1);
        sum += contribution;
        sign = -sign;
        if factor * (h_m + h_m1 + 2.0) < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    (2.0 * half.ln() * j1_series(x) - 2.0 / x - sum) / std::f64::consts::PI
}

/// Hankel asymptotic expansion; returns `(J_nu(x), Y_nu(x))`. Truncated at
/// the smallest term, adequate from `x ≳ 10` for the integer orders.
fn asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=40usize {
        let kk = (2 * k - 1) as f64;
        term *= (mu - kk * kk) / (k as f64 * 8.0 * x);
        if term.abs() >= prev {
            break; // divergent tail reached
        }
        prev = term.abs();
        let signed = match (k / 2) % 2 {
            0 => term,
            _ => -term,
        };
        if k % 2 == 1 {
            q += signed;
        } else {
            p += signed;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    (
        amp * (p * chi.cos() - q * chi.sin()),
        amp * (p * chi.sin() + q * chi.cos()),
    )
}

// Half-integer orders: exact closed trigonometric forms.

pub fn j_half(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin()
}

pub fn j_three_halves(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos())
}

pub fn y_half(x: f64) -> f64 {
    -(2.0 / (std::f64::consts::PI * x)).sqrt() * x.cos()
}

pub fn y_three_halves(x: f64) -> f64 {
    -(2.0 / (std::f64::consts::PI * x)).sqrt() * (x.cos() / x + x.sin())
}

pub fn j_minus_half(x: f64) -> f64 {
    (2.0 / (std::f64::consts::PI * x)).sqrt() * x.cos()
}

/// `J_{nu+1}` for a supported base order, via one step of the forward
/// recurrence where the order is not itself supported.
pub fn j_next_order(order: BesselOrder, x: f64) -> f64 {
    match order {
        BesselOrder::Zero => j1(x),
        BesselOrder::Half => j_three_halves(x),
        BesselOrder::One => {
            if x == 0.0 {
                0.0
            } else {
                2.0 / x * j1(x) - j0(x)
            }
        }
        BesselOrder::ThreeHalves => {
            if x == 0.0 {
                0.0
            } else {
                3.0 / x * j_three_halves(x) - j_half(x)
            }
        }
    }
}

/// `Y_{nu+1}` for a supported base order. Forward recurrence is stable for
/// `Y`, whose magnitude grows with the order.
pub fn y_next_order(order: BesselOrder, x: f64) -> f64 {
    match order {
        BesselOrder::Zero => y1(x),
        BesselOrder::Half => y_three_halves(x),
        BesselOrder::One => 2.0 / x * y1(x) - y0(x),
        BesselOrder::ThreeHalves => 3.0 / x * y_three_halves(x) - y_half(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent truncated-series oracle, kept deliberately naive.
    fn j0_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut fact = 1.0;
        for m in 0..30u32 {
            if m > 0 {
                fact *= m as f64;
            }
            sum += (-1.0f64).powi(m as i32) * (0.5 * x).powi(2 * m as i32) / (fact * fact);
        }
        sum
    }

    #[test]
    fn j0_matches_series_oracle() {
        // series constant term
        assert_eq!(bessel_j(BesselOrder::Zero, 0.0).unwrap(), 1.0);
        let v = bessel_j(BesselOrder::Zero, 1.0).unwrap();
        assert!((v - 0.7651976865579666).abs() < 1e-12);
        for &x in &[0.1, 0.5, 1.0, 2.0, 4.0, 7.0, 10.0] {
            let rel = (bessel_j(BesselOrder::Zero, x).unwrap() - j0_oracle(x)).abs()
                / j0_oracle(x).abs().max(1e-3);
            assert!(rel < 1e-12, "x = {x}: rel = {rel}");
        }
    }

    #[test]
    fn half_integer_closed_forms() {
        let x = std::f64::consts::FRAC_PI_2;
        let v = bessel_j(BesselOrder::Half, x).unwrap();
        // sqrt(2/(pi x)) sin x at x = pi/2 is 2/pi
        assert!((v - std::f64::consts::FRAC_2_PI).abs() < 1e-14);
        let y = bessel_y(BesselOrder::Half, x).unwrap();
        assert!(y.abs() < 1e-14);
    }

    #[test]
    fn y0_log_series_value_and_sign() {
        let v = bessel_y(BesselOrder::Zero, 1.0).unwrap();
        assert!((v - 0.0882569642).abs() < 1e-9);
        // leading log term is negative for small x
        for &x in &[1e-6, 1e-3, 0.1, 0.3, 0.49] {
            assert!(bessel_y(BesselOrder::Zero, x).unwrap() < 0.0, "x = {x}");
        }
        assert!(bessel_y(BesselOrder::Zero, 0.0).is_err());
        assert!(bessel_j(BesselOrder::One, -0.5).is_err());
    }

    #[test]
    fn wronskian_identity_pins_y_values() {
        // J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x)
        for order in [BesselOrder::Zero, BesselOrder::Half, BesselOrder::One] {
            for &x in &[0.05, 0.3, 1.0, 2.5, 6.0, 9.0, 11.0, 14.0, 20.0] {
                let j = bessel_j(order, x).unwrap();
                let y = bessel_y(order, x).unwrap();
                let j_up = j_next_order(order, x);
                let y_up = y_next_order(order, x);
                let w = j_up * y - j * y_up;
                let expected = 2.0 / (std::f64::consts::PI * x);
                assert!(
                    (w - expected).abs() < 1e-10 * expected.abs().max(1.0),
                    "order {order:?}, x = {x}: {w} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn series_asymptotic_overlap() {
        for i in 0..=30 {
            let x = 11.0 + 1.5 * i as f64 / 30.0;
            let (ja, ya) = asymptotic(0.0, x);
            assert!((ja - j0_series(x)).abs() < 1e-10, "J0 overlap at {x}");
            assert!((ya - y0_series(x)).abs() < 1e-10, "Y0 overlap at {x}");
            let (ja1, ya1) = asymptotic(1.0, x);
            assert!((ja1 - j1_series(x)).abs() < 1e-10, "J1 overlap at {x}");
            assert!((ya1 - y1_series(x)).abs() < 1e-10, "Y1 overlap at {x}");
        }
    }

    #[test]
    fn half_integer_matches_trig_forms_on_range() {
        for i in 1..=100 {
            let x = 0.1 * i as f64;
            let j = bessel_j(BesselOrder::ThreeHalves, x).unwrap();
            let closed = (2.0 / (std::f64::consts::PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((j - closed).abs() < 1e-12 * closed.abs().max(1.0));
        }
    }
}
