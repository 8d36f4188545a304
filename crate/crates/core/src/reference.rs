//! Published ground-state values for the quartic double well, kept verbatim
//! for comparison. Missing cells are `None`.

use serde::Serialize;

pub const TABLE_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedRow {
    pub lambda: f64,
    pub z_squared: f64,
    /// Ground energy from the reduced double-well rule, in units of `hbar omega`.
    pub e_method: f64,
    /// Numerically exact ground energy.
    pub e_exact: Option<f64>,
    /// Ground energy from an earlier semiclassical treatment.
    pub e_reference_method: Option<f64>,
}

const fn row(lambda: f64, z_squared: f64, e_method: f64, e_exact: Option<f64>, e_reference_method: Option<f64>) -> PublishedRow {
    PublishedRow {
        lambda,
        z_squared,
        e_method,
        e_exact,
        e_reference_method,
    }
}

pub const PUBLISHED: [PublishedRow; 14] = [
    row(0.01, 0.0069, -5.55, None, None),
    row(0.02, 0.0138, -2.43, Some(-2.43), Some(-2.99)),
    row(0.025, 0.0167, -1.83, Some(-1.82), Some(-1.88)),
    row(0.03, 0.02, -1.41, None, None),
    row(0.035, 0.0233, -1.12, Some(-1.12), Some(-1.00)),
    row(0.04, 0.0272, -0.88, None, None),
    row(0.05, 0.0345, -0.56, Some(-0.63), Some(-0.50)),
    row(0.06, 0.0412, -0.35, None, None),
    row(0.07, 0.0492, -0.19, None, None),
    row(0.075, 0.0523, -0.13, Some(-0.30), Some(-0.26)),
    row(0.08, 0.0568, -0.07, None, None),
    row(0.085, 0.0593, -0.03, Some(-0.23), Some(-0.20)),
    row(0.09, 0.0610, -0.016, None, None),
    row(0.1, 0.0612, -0.013, Some(-0.15), Some(-0.13)),
];

/// Couplings of the published table, ascending.
pub fn published_lambdas() -> Vec<f64> {
    PUBLISHED.iter().map(|r| r.lambda).collect()
}

pub fn published_row(lambda: f64) -> Option<&'static PublishedRow> {
    PUBLISHED.iter().find(|r| (r.lambda - lambda).abs() < 1e-12)
}
