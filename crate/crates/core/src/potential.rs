//! One-dimensional potentials: the quartic symmetric double well, the
//! harmonic oscillator and user-supplied closed forms.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{brent, BrentOptions};

/// Physical constants of the quartic double well
/// `v(x) = lambda x^4 - (m omega^2 / 2) x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
    pub lambda: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar), ("lambda", lambda)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            mass,
            omega,
            hbar,
            lambda,
        })
    }

    /// Natural units `hbar = m = omega = 1`, where the coupling is lambda'.
    pub fn natural(lambda_prime: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, lambda_prime)
    }

    /// Dimensionless coupling `hbar lambda / (m^2 omega^3)`.
    pub fn lambda_prime(&self) -> f64 {
        self.hbar * self.lambda / (self.mass * self.mass * self.omega.powi(3))
    }

    /// Outer turning point at zero energy: `x0^2 = m omega^2 / (2 lambda)`.
    pub fn x0(&self) -> f64 {
        (self.mass * self.omega * self.omega / (2.0 * self.lambda)).sqrt()
    }

    /// Well depth, `-m^2 omega^4 / (16 lambda) = -hbar omega / (16 lambda')`.
    pub fn u_min(&self) -> f64 {
        -(self.mass * self.omega * self.omega).powi(2) / (16.0 * self.lambda)
    }

    fn quadratic_coefficient(&self) -> f64 {
        0.5 * self.mass * self.omega * self.omega
    }
}

/// Well depth of the quartic double well.
pub fn u_min(params: &OscillatorParams) -> f64 {
    params.u_min()
}

/// The single dimensionless parameter of the reduced problem.
pub fn to_dimensionless(params: &OscillatorParams) -> f64 {
    params.lambda_prime()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicParams {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl HarmonicParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

/// A closed-form potential given as a function on a finite interval.
#[derive(Clone)]
pub struct CustomPotential {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: (f64, f64),
    mass: f64,
    hbar: f64,
}

impl CustomPotential {
    pub fn new<F>(label: impl Into<String>, f: F, domain: (f64, f64), mass: f64, hbar: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "custom potential domain [{lo}, {hi}] must be finite and non-empty"
            )));
        }
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(Error::InvalidParameter("mass and hbar must be positive".into()));
        }
        Ok(Self {
            label: label.into(),
            f: Arc::new(f),
            domain,
            mass,
            hbar,
        })
    }
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("mass", &self.mass)
            .field("hbar", &self.hbar)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Potential1D {
    QuarticDoubleWell(OscillatorParams),
    Harmonic(HarmonicParams),
    Custom(CustomPotential),
}

/// A real solution of `v(x) = E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    pub x: f64,
    /// 2 where the level touches a local maximum of `v` (double root).
    pub multiplicity: u8,
}

const SCAN_SAMPLES: usize = 4096;

impl Potential1D {
    pub fn quartic(params: OscillatorParams) -> Self {
        Potential1D::QuarticDoubleWell(params)
    }

    pub fn harmonic(params: HarmonicParams) -> Self {
        Potential1D::Harmonic(params)
    }

    pub fn mass(&self) -> f64 {
        match self {
            Potential1D::QuarticDoubleWell(p) => p.mass,
            Potential1D::Harmonic(p) => p.mass,
            Potential1D::Custom(c) => c.mass,
        }
    }

    pub fn hbar(&self) -> f64 {
        match self {
            Potential1D::QuarticDoubleWell(p) => p.hbar,
            Potential1D::Harmonic(p) => p.hbar,
            Potential1D::Custom(c) => c.hbar,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Potential1D::Custom(c) => c.domain,
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x.is_nan() || x.is_infinite() || x < lo || x > hi {
            return Err(Error::Domain {
                what: "x",
                value: x,
                domain: "the potential's domain",
            });
        }
        Ok(())
    }

    fn value_unchecked(&self, x: f64) -> f64 {
        match self {
            Potential1D::QuarticDoubleWell(p) => {
                let x2 = x * x;
                p.lambda * x2 * x2 - p.quadratic_coefficient() * x2
            }
            Potential1D::Harmonic(p) => 0.5 * p.mass * p.omega * p.omega * x * x,
            Potential1D::Custom(c) => (c.f)(x),
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.value_unchecked(x))
    }

    /// dv/dx; analytic for the built-in kinds, a centered difference for
    /// custom potentials.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            Potential1D::QuarticDoubleWell(p) => {
                4.0 * p.lambda * x.powi(3) - 2.0 * p.quadratic_coefficient() * x
            }
            Potential1D::Harmonic(p) => p.mass * p.omega * p.omega * x,
            Potential1D::Custom(c) => {
                let (lo, hi) = c.domain;
                let h = 1e-5 * (hi - lo);
                let (a, b) = ((x - h).max(lo), (x + h).min(hi));
                ((c.f)(b) - (c.f)(a)) / (b - a)
            }
        })
    }

    /// `p^2(x) = 2 m (E - v(x))`.
    pub fn momentum_sq(&self, energy: f64, x: f64) -> f64 {
        2.0 * self.mass() * (energy - self.value_unchecked(x))
    }

    /// All real solutions of `v(x) = E`, ascending.
    pub fn turning_points(&self, energy: f64) -> Result<Vec<TurningPoint>> {
        if !energy.is_finite() {
            return Err(Error::NoTurningPoints { energy });
        }
        match self {
            Potential1D::QuarticDoubleWell(p) => quartic_turning_points(self, p, energy),
            Potential1D::Harmonic(p) => {
                if energy <= 0.0 {
                    return Err(Error::NoTurningPoints { energy });
                }
                let a = (2.0 * energy / (p.mass * p.omega * p.omega)).sqrt();
                Ok(vec![
                    TurningPoint { x: -a, multiplicity: 1 },
                    TurningPoint { x: a, multiplicity: 1 },
                ])
            }
            Potential1D::Custom(c) => scan_turning_points(c, energy),
        }
    }
}

fn quartic_turning_points(v: &Potential1D, p: &OscillatorParams, energy: f64) -> Result<Vec<TurningPoint>> {
    if energy <= p.u_min() {
        return Err(Error::NoTurningPoints { energy });
    }
    // lambda u^2 - b u - E = 0 with u = x^2
    let b = p.quadratic_coefficient();
    let disc = (b * b + 4.0 * p.lambda * energy).max(0.0);
    let u_outer = (b + disc.sqrt()) / (2.0 * p.lambda);
    // Vieta instead of the cancelling difference
    let u_inner = -energy / (p.lambda * u_outer);

    let polish = |x: f64| -> f64 {
        let r = v.value_unchecked(x) - energy;
        let d = v.derivative(x).unwrap_or(0.0);
        if d == 0.0 {
            return x;
        }
        let candidate = x - r / d;
        if (v.value_unchecked(candidate) - energy).abs() < r.abs() {
            candidate
        } else {
            x
        }
    };

    let xo = polish(u_outer.sqrt());
    let mut points = Vec::with_capacity(4);
    points.push(TurningPoint { x: -xo, multiplicity: 1 });
    if energy < 0.0 {
        let xi = polish(u_inner.sqrt());
        points.push(TurningPoint { x: -xi, multiplicity: 1 });
        points.push(TurningPoint { x: xi, multiplicity: 1 });
    } else if energy == 0.0 {
        points.push(TurningPoint { x: 0.0, multiplicity: 2 });
    }
    points.push(TurningPoint { x: xo, multiplicity: 1 });
    Ok(points)
}

fn scan_turning_points(c: &CustomPotential, energy: f64) -> Result<Vec<TurningPoint>> {
    let (lo, hi) = c.domain;
    let g = |x: f64| (c.f)(x) - energy;
    let step = (hi - lo) / SCAN_SAMPLES as f64;
    let mut points = Vec::new();
    let mut x_prev = lo;
    let mut g_prev = g(lo);
    if g_prev == 0.0 {
        points.push(TurningPoint { x: lo, multiplicity: 1 });
    }
    for i in 1..=SCAN_SAMPLES {
        let x = if i == SCAN_SAMPLES { hi } else { lo + i as f64 * step };
        let gx = g(x);
        if gx == 0.0 {
            points.push(TurningPoint { x, multiplicity: 1 });
        } else if g_prev != 0.0 && gx.signum() != g_prev.signum() {
            let root = brent(|t| Ok(g(t)), x_prev, x, BrentOptions::default())?;
            points.push(TurningPoint {
                x: root.x,
                multiplicity: 1,
            });
        }
        x_prev = x;
        g_prev = gx;
    }
    if points.is_empty() {
        return Err(Error::NoTurningPoints { energy });
    }
    Ok(points)
}
