//! From-scratch special functions: Bessel `J_nu`/`Y_nu`, the fundamental
//! radial pair with its Wronskian, Legendre polynomials and the universal
//! profile `v0`.

pub mod bessel;
mod legendre;

pub use bessel::{bessel_j, bessel_y};
pub(crate) use legendre::legendre_unchecked;
pub use legendre::{chebyshev_u, legendre};

use crate::{Error, Result};

/// The Bessel orders `(n-2)/2` arising from dimensions `n = 2..=5`.
///
/// Integer orders route to the logarithmic series for `Y`; half-integer
/// orders route to closed trigonometric forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    Half,
    One,
    ThreeHalves,
}

impl BesselOrder {
    /// Order for the radial equation in dimension `n`, i.e. `(n-2)/2`.
    pub fn from_dimension(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Self::Zero),
            3 => Ok(Self::Half),
            4 => Ok(Self::One),
            5 => Ok(Self::ThreeHalves),
            _ => Err(Error::Unsupported(format!(
                "bessel order for dimension {n}: only n in 2..=5"
            ))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Half => 0.5,
            Self::One => 1.0,
            Self::ThreeHalves => 1.5,
        }
    }
}

/// `Gamma(nu + 1)` for the supported orders.
fn gamma_nu_plus_one(order: BesselOrder) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    match order {
        BesselOrder::Zero => 1.0,
        BesselOrder::Half => 0.5 * sqrt_pi,
        BesselOrder::One => 1.0,
        BesselOrder::ThreeHalves => 0.75 * sqrt_pi,
    }
}

/// The fundamental solution pair of `u'' + ((n-1)/x) u' + u = 0`:
///
/// `y1(x) = x^{-(n-2)/2} J_{(n-2)/2}(x)` (regular at the origin) and
/// `y2(x) = x^{-(n-2)/2} Y_{(n-2)/2}(x)` (singular like `log x` for `n = 2`,
/// like `x^{2-n}` for `n >= 3`). The Wronskian satisfies
/// `x^{n-1} W(y1, y2)(x) = 2/pi` identically.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalPair {
    n: u32,
    nu: BesselOrder,
}

/// Build the fundamental pair for dimension `n` in `2..=5`.
pub fn fundamental_pair(n: u32) -> Result<FundamentalPair> {
    Ok(FundamentalPair {
        n,
        nu: BesselOrder::from_dimension(n)?,
    })
}

impl FundamentalPair {
    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// Value of `y1` at the origin, `2^{-nu} / Gamma(nu+1)`.
    pub fn y1_at_zero(&self) -> f64 {
        let nu = self.nu.value();
        0.5f64.powf(nu) / gamma_nu_plus_one(self.nu)
    }

    pub fn y1_at(&self, x: f64) -> f64 {
        if x == 0.0 {
            return self.y1_at_zero();
        }
        self.y1_at_zero() * v0_series(self.nu, x)
    }

    pub fn y2_at(&self, x: f64) -> f64 {
        x.powf(-self.nu.value()) * bessel::bessel_y(self.nu, x).expect("y2 needs x > 0")
    }

    /// `y1'(x) = -x^{-nu} J_{nu+1}(x)`.
    pub fn dy1_at(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        -x.powf(-self.nu.value()) * bessel::j_next_order(self.nu, x)
    }

    /// `y2'(x) = -x^{-nu} Y_{nu+1}(x)`.
    pub fn dy2_at(&self, x: f64) -> f64 {
        -x.powf(-self.nu.value()) * bessel::y_next_order(self.nu, x)
    }

    /// `W(y1, y2)(x) = y1 y2' - y1' y2`, evaluated from the four functions.
    /// Identically `(2/pi) x^{1-n}` up to floating error.
    pub fn wronskian_at(&self, x: f64) -> f64 {
        self.y1_at(x) * self.dy2_at(x) - self.dy1_at(x) * self.y2_at(x)
    }

    /// Bounded factored ratio `y1(t) / W(t) = (pi/2) t^{n-1} y1(t)`.
    pub fn y1_over_w(&self, t: f64) -> f64 {
        std::f64::consts::FRAC_PI_2 * t.powi(self.n as i32 - 1) * self.y1_at(t)
    }

    /// Bounded factored ratio `y2(t) / W(t) = (pi/2) t^{n-1} y2(t)`;
    /// vanishes at the origin despite `y2` being singular there.
    pub fn y2_over_w(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        std::f64::consts::FRAC_PI_2 * t.powi(self.n as i32 - 1) * self.y2_at(t)
    }

    /// Derivative of `y1/W` in factored form.
    pub fn d_y1_over_w(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let nm1 = (self.n - 1) as f64;
        std::f64::consts::FRAC_PI_2
            * (nm1 * t.powi(self.n as i32 - 2) * self.y1_at(t)
                + t.powi(self.n as i32 - 1) * self.dy1_at(t))
    }

    /// Derivative of `y2/W` in factored form; bounded as `t -> 0`.
    pub fn d_y2_over_w(&self, t: f64) -> f64 {
        let nm1 = (self.n - 1) as f64;
        std::f64::consts::FRAC_PI_2
            * (nm1 * t.powi(self.n as i32 - 2) * self.y2_at(t)
                + t.powi(self.n as i32 - 1) * self.dy2_at(t))
    }
}

/// Normalized series `sum_m (-1)^m Gamma(nu+1) / (m! Gamma(m+nu+1)) (x/2)^{2m}`,
/// i.e. `2^nu Gamma(nu+1) x^{-nu} J_nu(x)` continued through the origin.
fn v0_series(order: BesselOrder, x: f64) -> f64 {
    let nu = order.value();
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..200usize {
        let mf = m as f64;
        term *= -q / ((mf + 1.0) * (mf + 1.0 + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// The universal profile: the solution of
/// `v0'' + ((n-1)/rho) v0' + v0 = 0, v0(0) = 1, v0'(0) = 0`,
/// i.e. the regular fundamental solution normalized to 1 at the origin.
///
/// Closed reductions: `n = 2` gives `J_0(rho)`, `n = 3` gives `sin(rho)/rho`.
pub fn v0_profile(n: u32, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("v0_profile: rho = {rho} < 0")));
    }
    let order = BesselOrder::from_dimension(n)?;
    Ok(v0_series(order, rho))
}

/// Derivative of [`v0_profile`] in `rho`; equals
/// `-2^nu Gamma(nu+1) rho^{-nu} J_{nu+1}(rho)`.
pub fn v0_profile_deriv(n: u32, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("v0_profile: rho = {rho} < 0")));
    }
    let pair = fundamental_pair(n)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(pair.dy1_at(rho) / pair.y1_at_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v0_initial_condition_and_closed_forms() {
        for n in 2..=5 {
            assert_eq!(v0_profile(n, 0.0).unwrap(), 1.0);
        }
        // n = 2 reduces to J0
        let v = v0_profile(2, 1.0).unwrap();
        assert!((v - 0.7651976865579666).abs() < 1e-13);
        // n = 3 reduces to sin(rho)/rho, zero at pi
        assert!(v0_profile(3, std::f64::consts::PI).unwrap().abs() < 1e-13);
        for i in 1..=30 {
            let rho = 0.2 * i as f64;
            let closed = rho.sin() / rho;
            assert!((v0_profile(3, rho).unwrap() - closed).abs() < 1e-13);
        }
        // n = 5 reduces to 3 (sin r - r cos r) / r^3
        for i in 1..=20 {
            let rho = 0.3 * i as f64;
            let closed = 3.0 * (rho.sin() - rho * rho.cos()) / (rho * rho * rho);
            assert!((v0_profile(5, rho).unwrap() - closed).abs() < 1e-12);
        }
        assert!(v0_profile(6, 1.0).is_err());
    }

    #[test]
    fn v0_derivative_matches_finite_differences() {
        for n in 2..=5 {
            for i in 1..=15 {
                let rho = 0.25 * i as f64;
                let h = 1e-5;
                let fd =
                    (v0_profile(n, rho + h).unwrap() - v0_profile(n, rho - h).unwrap()) / (2.0 * h);
                let d = v0_profile_deriv(n, rho).unwrap();
                assert!((fd - d).abs() < 1e-9, "n = {n}, rho = {rho}");
            }
        }
    }

    #[test]
    fn wronskian_scaling_is_constant() {
        // x^{n-1} W(y1, y2)(x) = 2/pi for every catalog dimension
        for n in 2..=5u32 {
            let pair = fundamental_pair(n).unwrap();
            for i in 0..=60 {
                let x = 0.01 + (10.0 - 0.01) * i as f64 / 60.0;
                let scaled = x.powi(n as i32 - 1) * pair.wronskian_at(x);
                assert!(
                    (scaled - std::f64::consts::FRAC_2_PI).abs() < 1e-8,
                    "n = {n}, x = {x}: {scaled}"
                );
            }
        }
    }

    #[test]
    fn pair_satisfies_radial_equation() {
        // Residual of u'' + ((n-1)/x) u' + u from centered differences at
        // step 1e-4. The tolerance is 1e-8 relative to the cancellation
        // scale plus the stencil's own resolution: truncation h^2 u''''/12
        // (estimated from a five-point fourth difference) and the h^{-2}
        // roundoff amplification. A function that fails the equation leaves
        // an O(scale) residual that this budget cannot absorb.
        let h = 1e-4;
        let eps = f64::EPSILON;
        // alternating-series cancellation magnitude: sum of |terms| = I_0(x)
        let cancellation = |x: f64| -> f64 {
            let q = 0.25 * x * x;
            let mut term = 1.0;
            let mut sum = 1.0;
            for m in 1..60 {
                term *= q / ((m * m) as f64);
                sum += term;
                if term < 1e-16 * sum {
                    break;
                }
            }
            sum * (2.0 + (0.5 * x).ln().abs())
        };
        for n in 2..=5u32 {
            let pair = fundamental_pair(n).unwrap();
            for i in 0..=40 {
                let x = 0.01 + (10.0 - 0.01) * i as f64 / 40.0;
                for (f, name) in [
                    (&(|t: f64| pair.y1_at(t)) as &dyn Fn(f64) -> f64, "y1"),
                    (&(|t: f64| pair.y2_at(t)) as &dyn Fn(f64) -> f64, "y2"),
                ] {
                    let samples = [f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h)];
                    let upp = (samples[3] - 2.0 * samples[2] + samples[1]) / (h * h);
                    let up = (samples[3] - samples[1]) / (2.0 * h);
                    let res = upp + (n - 1) as f64 / x * up + samples[2];
                    let fourth = (samples[0] - 4.0 * samples[1] + 6.0 * samples[2]
                        - 4.0 * samples[3]
                        + samples[4])
                        / h.powi(4);
                    let umax = samples.iter().fold(0.0f64, |a, s| a.max(s.abs()));
                    let g = (n - 1) as f64 / x;
                    let scale = upp.abs() + (g * up).abs() + samples[2].abs();
                    let noise = eps * (1.0 + umax + cancellation(x));
                    let fd_budget = 2.0 * h * h / 12.0 * fourth.abs()
                        + 8.0 * noise / (h * h)
                        + 2.0 * noise * g / h;
                    let tol = 1e-8 * (1.0 + scale) + fd_budget;
                    assert!(res.abs() < tol, "{name}, n={n}, x={x}: {res} vs {tol}");
                }
            }
        }
    }

    #[test]
    fn residual_budget_rejects_non_solutions() {
        // Same stencil and budget as above applied to a plausible impostor:
        // cos(x) does not solve the n = 2 equation and must be caught.
        let h = 1e-4;
        let eps = f64::EPSILON;
        let mut caught = false;
        for i in 0..=20 {
            let x = 0.5 + 9.0 * i as f64 / 20.0;
            let f = |t: f64| t.cos();
            let samples = [f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h)];
            let upp = (samples[3] - 2.0 * samples[2] + samples[1]) / (h * h);
            let up = (samples[3] - samples[1]) / (2.0 * h);
            let res = upp + 1.0 / x * up + samples[2];
            let fourth = (samples[0] - 4.0 * samples[1] + 6.0 * samples[2] - 4.0 * samples[3]
                + samples[4])
                / h.powi(4);
            let umax = samples.iter().fold(0.0f64, |a, s| a.max(s.abs()));
            let scale = upp.abs() + (up / x).abs() + samples[2].abs();
            let tol = 1e-8 * (1.0 + scale)
                + 2.0 * h * h / 12.0 * fourth.abs()
                + 8.0 * eps * umax / (h * h)
                + 2.0 * eps * umax / (x * h);
            if res.abs() > tol {
                caught = true;
            }
        }
        assert!(caught, "impostor passed the residual budget everywhere");
    }

    #[test]
    fn y2_log_growth_near_zero_for_n2() {
        let pair = fundamental_pair(2).unwrap();
        let x = 1e-6f64;
        let y2 = pair.y2_at(x);
        assert!(y2.is_finite());
        let ratio = y2.abs() / x.ln().abs();
        assert!((0.5..2.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn y1_closed_form_dimension_three() {
        // y1(x) = sqrt(2/pi) sin(x)/x; zero at pi, nonzero at pi/2
        let pair = fundamental_pair(3).unwrap();
        let at_pi = pair.y1_at(std::f64::consts::PI);
        let at_half = pair.y1_at(std::f64::consts::FRAC_PI_2);
        assert!((at_pi / at_half).abs() < 1e-13);
        let c = (2.0 / std::f64::consts::PI).sqrt();
        for i in 1..=10 {
            let x = 0.4 * i as f64;
            assert!((pair.y1_at(x) - c * x.sin() / x).abs() < 1e-13);
        }
    }
}
