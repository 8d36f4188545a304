//! Ground state of the symmetric quartic double well in the reduced
//! variables: `E / hbar omega = (z^2 - 1/16) / lambda'` with `z` fixed by
//! `pi/2 = sqrt(2) (z^2 / lambda') I(z)`,
//! `I(z) = int_{-1}^{1} sqrt((1 - eta^2) / (1 + 4 z eta)) d eta`.
//!
//! The classical turning points of one well sit at `y = +-2z`, so bound
//! states with `E < 0` need `z < 1/4`; this caps the coupling at
//! [`lambda_max`].

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Endpoint, IntegrandSpec};
use crate::roots::{brent, BrentOptions};

const ETA_TOLERANCE: f64 = 1e-13;
/// Lower end of the `z` bracket.
pub const Z_FLOOR: f64 = 1e-8;
pub const Z_MAX: f64 = 0.25;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZSolution {
    pub lambda: f64,
    pub z: f64,
    pub z_squared: f64,
    pub e_over_hw: f64,
    pub e_over_umin: f64,
    pub eta_integral: f64,
    /// `sqrt(2) (z^2/lambda') I(z) - pi/2`
    pub residual: f64,
    pub iterations: usize,
}

/// `I(z)` for `0 <= z <= 1/4`.
pub fn eta_integral(z: f64) -> Result<f64> {
    if !(0.0..=Z_MAX).contains(&z) {
        return Err(Error::Domain {
            what: "z",
            value: z,
            domain: "[0, 1/4]",
        });
    }
    let f = |eta: f64| ((1.0 - eta) * (1.0 + eta) / (1.0 + 4.0 * z * eta)).max(0.0).sqrt();
    let r = integrate(
        &IntegrandSpec::new(f, -1.0, 1.0)
            .endpoints(Endpoint::SqrtVanishing, Endpoint::SqrtVanishing)
            .tolerance(ETA_TOLERANCE),
    )?;
    Ok(r.value)
}

fn quantization_residual(z: f64, lambda: f64) -> Result<f64> {
    Ok(SQRT_2 * z * z / lambda * eta_integral(z)? - FRAC_PI_2)
}

/// Coupling at which `z = 1/4` and the level reaches the barrier top `E = 0`.
pub fn lambda_max() -> f64 {
    static LAMBDA_MAX: OnceLock<f64> = OnceLock::new();
    *LAMBDA_MAX.get_or_init(|| {
        let i = eta_integral(Z_MAX).expect("I(1/4) is finite");
        SQRT_2 * Z_MAX * Z_MAX * i / FRAC_PI_2
    })
}

/// Solve the quantization equation for `z`.
pub fn solve_z(lambda: f64) -> Result<ZSolution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain {
            what: "lambda'",
            value: lambda,
            domain: "(0, lambda'_max]",
        });
    }
    let lambda_max = lambda_max();
    if lambda > lambda_max {
        return Err(Error::NoBoundGroundState { lambda, lambda_max });
    }

    // z^2 I(z) is strictly increasing, so the root is unique.
    let at_edge = quantization_residual(Z_MAX, lambda)?;
    let (z, iterations) = if at_edge <= 0.0 {
        // lambda' == lambda'_max up to rounding
        (Z_MAX, 0)
    } else {
        let root = brent(
            |z| quantization_residual(z, lambda),
            Z_FLOOR,
            Z_MAX,
            BrentOptions {
                xtol: 1e-16,
                rtol: 2.0 * f64::EPSILON,
                ..Default::default()
            },
        )?;
        (root.x, root.iterations)
    };

    let residual = quantization_residual(z, lambda)?;
    if residual.abs() > RESIDUAL_TOLERANCE {
        return Err(Error::Accuracy {
            estimate: z,
            error: residual.abs(),
        });
    }
    let z_squared = z * z;
    Ok(ZSolution {
        lambda,
        z,
        z_squared,
        e_over_hw: (z_squared - 1.0 / 16.0) / lambda,
        e_over_umin: 1.0 - 16.0 * z_squared,
        eta_integral: eta_integral(z)?,
        residual,
        iterations,
    })
}

/// `(E / hbar omega, E / U_min)` of the ground state.
pub fn ground_energy(lambda: f64) -> Result<(f64, f64)> {
    let s = solve_z(lambda)?;
    Ok((s.e_over_hw, s.e_over_umin))
}

/// One independent solve per coupling, errors kept per row.
pub fn sweep(lambdas: &[f64]) -> Vec<Result<ZSolution>> {
    lambdas.iter().map(|&l| solve_z(l)).collect()
}
