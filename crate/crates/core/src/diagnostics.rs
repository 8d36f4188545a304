//! Validity checks for the double-well quantization: the reduced mapping
//! `xi(eta)` and the size of the derivative terms dropped at zero order.
//!
//! `xi` solves `sqrt(1 - xi^2) xi' = sqrt(2) (z^2/lambda') sqrt((1 - eta^2)/(1 + 4 z eta))`
//! with `xi(-1) = -1`. It is built by matching the two partial integrals and
//! inverting the closed-form left side, so both boundary values hold by
//! construction whenever `(z, lambda')` solves the quantization equation.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::Serialize;

use crate::double_well::{eta_integral, solve_z, Z_MAX};
use crate::error::{Error, Result};
use crate::miller_good::AuxiliaryProblem;
use crate::quadrature::{integrate, Endpoint, IntegrandSpec};

pub const MIN_MAPPING_NODES: usize = 64;
pub const MIN_CORRECTION_NODES: usize = 128;
/// Nodes dropped at each end before differencing.
pub const EDGE_NODES: usize = 3;
pub const GOOD_THRESHOLD: f64 = 0.05;
pub const MARGINAL_THRESHOLD: f64 = 0.2;
const PAIR_TOLERANCE: f64 = 1e-8;
const MAX_REPORT_NODES: usize = 8192;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiMapping {
    pub z: f64,
    pub lambda: f64,
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    /// `xi'` from the mapping equation itself (limits at the endpoints).
    pub dxi: Vec<f64>,
    /// `max |xi - eta|` over the grid.
    pub sup_deviation: f64,
    /// `sqrt(2) (z^2/lambda') I(z) - pi/2`
    pub residual: f64,
}

/// Tabulate `xi(eta)` on `intervals + 1` uniform nodes of `[-1, 1]`.
pub fn xi_mapping(z: f64, lambda: f64, intervals: usize) -> Result<XiMapping> {
    if intervals < MIN_MAPPING_NODES {
        return Err(Error::InvalidParameter(format!(
            "xi mapping needs at least {MIN_MAPPING_NODES} intervals, got {intervals}"
        )));
    }
    if !(z > 0.0 && z < Z_MAX) {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "(0, 1/4)",
        });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "lambda'",
            value: lambda,
            domain: "(0, lambda'_max]",
        });
    }
    let scale = SQRT_2 * z * z / lambda;
    let residual = scale * eta_integral(z)? - FRAC_PI_2;
    if residual.abs() > PAIR_TOLERANCE {
        return Err(Error::InconsistentParameters { residual });
    }

    let n = intervals;
    let h = 2.0 / n as f64;
    let eta: Vec<f64> = (0..=n)
        .map(|k| if k == n { 1.0 } else { -1.0 + k as f64 * h })
        .collect();
    let weight = |t: f64| ((1.0 - t) * (1.0 + t) / (1.0 + 4.0 * z * t)).max(0.0).sqrt();

    let mut partial = vec![0.0; n + 1];
    for k in 1..=n {
        let left = if k == 1 { Endpoint::SqrtVanishing } else { Endpoint::Smooth };
        let right = if k == n { Endpoint::SqrtVanishing } else { Endpoint::Smooth };
        let piece = integrate(
            &IntegrandSpec::new(weight, eta[k - 1], eta[k])
                .endpoints(left, right)
                .tolerance(1e-15),
        )?;
        partial[k] = partial[k - 1] + piece.value;
    }

    let aux = AuxiliaryProblem::ground();
    let mut xi = Vec::with_capacity(n + 1);
    let mut dxi = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k == 0 {
            xi.push(-1.0);
            dxi.push((scale / (1.0 - 4.0 * z).sqrt()).powf(2.0 / 3.0));
        } else if k == n {
            xi.push(1.0);
            dxi.push((scale / (1.0 + 4.0 * z).sqrt()).powf(2.0 / 3.0));
        } else {
            let x = aux.invert_partial_action(scale * partial[k], 1.0)?;
            xi.push(x);
            dxi.push(scale * weight(eta[k]) / (1.0 - x * x).sqrt());
        }
    }
    let sup_deviation = xi
        .iter()
        .zip(&eta)
        .map(|(x, e)| (x - e).abs())
        .fold(0.0, f64::max);

    Ok(XiMapping {
        z,
        lambda,
        eta,
        xi,
        dxi,
        sup_deviation,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionReport {
    pub z: f64,
    pub lambda: f64,
    /// Interior nodes (three dropped at each end).
    pub eta: Vec<f64>,
    pub d_xi: Vec<f64>,
    pub d_eta_xi: Vec<f64>,
    /// `2 z^4 / lambda'^2 (1 - eta^2)/(1 + 4 z eta)`
    pub leading: Vec<f64>,
    /// `D_xi + 4 z^2 D_eta_xi`
    pub correction: Vec<f64>,
    /// Pointwise `|correction / leading|`.
    pub ratio: Vec<f64>,
    pub max_ratio: f64,
    /// Ratio at the well bottom `eta = 0` (nearest node).
    pub bottom_ratio: f64,
    /// Richardson estimate of the finite-difference error in `correction`.
    pub error_estimate: f64,
}

struct Derivatives {
    d1: f64,
    d2: f64,
    d3: f64,
}

/// Centered differences of `f` at node `i` with node stride `s`.
fn centered(f: &[f64], i: usize, s: usize, h: f64) -> Derivatives {
    let hs = h * s as f64;
    let (m2, m1, c, p1, p2) = (f[i - 2 * s], f[i - s], f[i], f[i + s], f[i + 2 * s]);
    Derivatives {
        d1: (p1 - m1) / (2.0 * hs),
        d2: (p1 - 2.0 * c + m1) / (hs * hs),
        d3: (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * hs * hs * hs),
    }
}

/// `(3/2) s''^2/s'^2 - (1/2) s'''/s'` as printed for the mapping equation.
fn d_mapping(d: &Derivatives) -> f64 {
    1.5 * d.d2 * d.d2 / (d.d1 * d.d1) - 0.5 * d.d3 / d.d1
}

fn d_cross(d: &Derivatives, z: f64, eta: f64) -> f64 {
    let w = 1.0 + 4.0 * z * eta;
    3.0 * d.d2 / (2.0 * z * d.d1 * w) + 3.0 / (2.0 * w)
}

/// Evaluate the dropped derivative terms on the interior of `map`.
pub fn correction_terms(map: &XiMapping) -> Result<CorrectionReport> {
    let n = map.eta.len() - 1;
    if n < MIN_CORRECTION_NODES {
        return Err(Error::InvalidParameter(format!(
            "correction terms need at least {MIN_CORRECTION_NODES} intervals, got {n}"
        )));
    }
    let (z, lambda) = (map.z, map.lambda);
    let h = 2.0 / n as f64;
    let lead_scale = 2.0 * z.powi(4) / (lambda * lambda);

    let interior = EDGE_NODES..=n - EDGE_NODES;
    let mut report = CorrectionReport {
        z,
        lambda,
        eta: Vec::new(),
        d_xi: Vec::new(),
        d_eta_xi: Vec::new(),
        leading: Vec::new(),
        correction: Vec::new(),
        ratio: Vec::new(),
        max_ratio: 0.0,
        bottom_ratio: f64::NAN,
        error_estimate: 0.0,
    };

    let mut coarse_diff: f64 = 0.0;
    let mut cross_diff: f64 = 0.0;
    let mut bottom_distance = f64::INFINITY;
    for i in interior {
        let eta = map.eta[i];
        let d = centered(&map.xi, i, 1, h);
        let d_xi = d_mapping(&d);
        let d_eta_xi = d_cross(&d, z, eta);
        let correction = d_xi + 4.0 * z * z * d_eta_xi;
        let leading = lead_scale * (1.0 - eta) * (1.0 + eta) / (1.0 + 4.0 * z * eta);
        let ratio = (correction / leading).abs();

        if i >= 4 && i + 4 <= n {
            let dc = centered(&map.xi, i, 2, h);
            let coarse = d_mapping(&dc) + 4.0 * z * z * d_cross(&dc, z, eta);
            coarse_diff = coarse_diff.max((coarse - correction).abs());
            cross_diff = cross_diff.max((d_cross(&dc, z, eta) - d_eta_xi).abs());
        }
        if eta.abs() < bottom_distance {
            bottom_distance = eta.abs();
            report.bottom_ratio = ratio;
        }

        for (v, name) in [(d_xi, "D_xi"), (d_eta_xi, "D_eta_xi"), (ratio, "ratio")] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite at eta = {eta}")));
            }
        }
        report.max_ratio = report.max_ratio.max(ratio);
        report.eta.push(eta);
        report.d_xi.push(d_xi);
        report.d_eta_xi.push(d_eta_xi);
        report.leading.push(leading);
        report.correction.push(correction);
        report.ratio.push(ratio);
    }

    // second-order scheme: error(h) ~ (D_2h - D_h) / 3
    report.error_estimate = coarse_diff / 3.0;
    let signal = report.correction.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let cross_signal = report.d_eta_xi.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if report.error_estimate > 0.1 * signal {
        return Err(Error::Resolution {
            estimate: report.error_estimate,
            signal,
        });
    }
    if cross_diff / 3.0 > 0.1 * cross_signal {
        return Err(Error::Resolution {
            estimate: cross_diff / 3.0,
            signal: cross_signal,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Good,
    Marginal,
    Poor,
}

impl Validity {
    pub fn from_ratio(ratio: f64) -> Self {
        if ratio < GOOD_THRESHOLD {
            Validity::Good
        } else if ratio < MARGINAL_THRESHOLD {
            Validity::Marginal
        } else {
            Validity::Poor
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Validity::Good => "good",
            Validity::Marginal => "marginal",
            Validity::Poor => "poor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub lambda: f64,
    pub z: f64,
    pub z_squared: f64,
    pub e_over_hw: f64,
    pub e_over_umin: f64,
    pub sup_xi_deviation: f64,
    pub max_ratio: f64,
    pub bottom_ratio: f64,
    pub flag: Validity,
    /// Classification thresholds applied to `bottom_ratio`.
    pub good_below: f64,
    pub marginal_below: f64,
    pub intervals: usize,
}

/// Solve, map and grade one coupling. The grid starts at `intervals` and is
/// doubled until the finite differences are resolved.
pub fn validity_report(lambda: f64, intervals: usize) -> Result<ValidityReport> {
    let sol = solve_z(lambda)?;
    if sol.z >= Z_MAX {
        return Err(Error::Domain {
            what: "z",
            value: sol.z,
            domain: "(0, 1/4)",
        });
    }
    let mut n = intervals.max(MIN_CORRECTION_NODES);
    n += n % 2;
    loop {
        let map = xi_mapping(sol.z, lambda, n)?;
        match correction_terms(&map) {
            Ok(report) => {
                return Ok(ValidityReport {
                    lambda,
                    z: sol.z,
                    z_squared: sol.z_squared,
                    e_over_hw: sol.e_over_hw,
                    e_over_umin: sol.e_over_umin,
                    sup_xi_deviation: map.sup_deviation,
                    max_ratio: report.max_ratio,
                    bottom_ratio: report.bottom_ratio,
                    flag: Validity::from_ratio(report.bottom_ratio),
                    good_below: GOOD_THRESHOLD,
                    marginal_below: MARGINAL_THRESHOLD,
                    intervals: n,
                })
            }
            Err(Error::Resolution { .. }) if n * 2 <= MAX_REPORT_NODES => n *= 2,
            Err(e) => return Err(e),
        }
    }
}
