//! Default sweeps and knobs for the experiment harness.

use serde::Serialize;

/// Degrees used for the zonal sweeps on the 2-sphere.
pub const S2_DEGREES: &[u32] = &[1, 2, 3, 5, 8, 12, 20, 30, 50, 75, 100, 150, 200];

/// Degrees used for the zonal sweeps on the 3-sphere.
pub const S3_DEGREES: &[u32] = &[1, 2, 3, 5, 8, 12, 20, 30, 50];

/// Torus frequencies; the Pythagorean ones keep `lambda` an exact integer.
pub const T2_FREQS: &[(i32, i32)] = &[
    (1, 0),
    (2, 1),
    (3, 4),
    (5, 0),
    (6, 8),
    (9, 12),
    (12, 16),
    (15, 20),
];

/// Zonal degrees for the differential-inequality and comparison sweeps.
pub const EPD_S2_DEGREES: &[u32] = &[10, 20, 30, 40, 50, 60, 70, 80, 90, 100];

/// Torus frequencies with `|k| = 5, 10, 15, 20, 25` for those sweeps.
pub const EPD_T2_FREQS: &[(i32, i32)] = &[(3, 4), (6, 8), (9, 12), (12, 16), (15, 20)];

/// Frequencies for the half-bound certificates.
pub const HALF_BOUND_LAMBDAS: &[f64] = &[10.0, 25.0, 50.0, 100.0, 200.0];

/// Frequencies for the perturbation-series sweep.
pub const SERIES_LAMBDAS: &[f64] = &[25.0, 50.0, 100.0, 200.0];

/// Harness configuration; the suite runs everything off one of these.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub kappa: f64,
    /// Extra restriction exponent checked next to `p = 2`.
    pub p_extra: f64,
    /// Perturbation-series order.
    pub order: usize,
    /// Grid for series and half-bound solves.
    pub series_grid: usize,
    /// Radius grid for mean profiles.
    pub profile_grid: usize,
    /// Quadrature nodes per geodesic sphere (0 picks the default rule).
    pub nodes: usize,
    /// Coarse scan resolution for maxima searches.
    pub coarse: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            kappa: 1.0,
            p_extra: 4.0,
            order: 3,
            series_grid: 4096,
            profile_grid: 600,
            nodes: 256,
            coarse: 64,
        }
    }
}
