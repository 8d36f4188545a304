//! Miller-Good quantization: the original problem is mapped onto the
//! harmonic auxiliary problem `P^2(s) = hbar^2 (alpha - s^2)` through a
//! monotone change of variable `s0(x)` fixed by matching partial actions.
//! The transformed variant first changes coordinates `x = x(y)` and matches
//! `int x'(y) p(y) dy` instead.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::Potential1D;
use crate::quadrature::{action_integral, integrate, Endpoint, IntegrandSpec};
use crate::roots::{brent, BrentOptions};

/// Action tolerance of the quantization solve, in units of hbar.
pub const ACTION_TOLERANCE: f64 = 1e-9;
const QUAD_TOLERANCE: f64 = 1e-12;

/// The harmonic auxiliary problem of quantum number `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuxiliaryProblem {
    pub n: u32,
}

impl AuxiliaryProblem {
    pub fn new(n: u32) -> Self {
        Self { n }
    }

    pub fn ground() -> Self {
        Self { n: 0 }
    }

    /// `alpha = 2n + 1`.
    pub fn alpha(&self) -> f64 {
        2.0 * self.n as f64 + 1.0
    }

    /// `(s01, s02) = (-sqrt(alpha), +sqrt(alpha))`.
    pub fn turning_points(&self) -> (f64, f64) {
        let r = self.alpha().sqrt();
        (-r, r)
    }

    pub fn momentum(&self, s: f64, hbar: f64) -> f64 {
        let r = self.alpha().sqrt();
        hbar * ((r - s) * (r + s)).max(0.0).sqrt()
    }

    /// `int_{s01}^{s02} P ds = hbar alpha pi / 2`.
    pub fn action(&self, hbar: f64) -> f64 {
        hbar * self.alpha() * PI / 2.0
    }

    /// `int_{s01}^{s} P ds` in closed form.
    pub fn partial_action(&self, s: f64, hbar: f64) -> f64 {
        let alpha = self.alpha();
        let r = alpha.sqrt();
        let s = s.clamp(-r, r);
        let t = s / r;
        hbar * (0.5 * s * ((r - s) * (r + s)).max(0.0).sqrt()
            + 0.5 * alpha * t.clamp(-1.0, 1.0).asin()
            + alpha * PI / 4.0)
    }

    /// Inverse of [`partial_action`](Self::partial_action).
    pub fn invert_partial_action(&self, action: f64, hbar: f64) -> Result<f64> {
        let (lo, hi) = self.turning_points();
        if action <= 0.0 {
            return Ok(lo);
        }
        if action >= self.action(hbar) {
            return Ok(hi);
        }
        let root = brent(
            |s| Ok(self.partial_action(s, hbar) - action),
            lo,
            hi,
            BrentOptions {
                xtol: 1e-15,
                ..Default::default()
            },
        )?;
        Ok(root.x)
    }

    /// Unnormalized eigenfunction `H_n(s) exp(-s^2/2)`.
    pub fn eigenfunction(&self, s: f64) -> f64 {
        hermite(self.n, s) * (-0.5 * s * s).exp()
    }
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Monotone change of variable `x = x(y)`.
#[derive(Clone)]
pub struct CoordinateTransform {
    label: String,
    forward: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    inverse: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: (f64, f64),
    even_inverse: bool,
}

impl fmt::Debug for CoordinateTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoordinateTransform")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("even_inverse", &self.even_inverse)
            .finish()
    }
}

const MONOTONE_SAMPLES: usize = 512;

impl CoordinateTransform {
    /// Build a transform from `x(y)`, `x'(y)` and `y(x)` on the open
    /// interval `domain`. Rejects transforms whose derivative is not
    /// positive on a sample of the domain.
    pub fn new<F, D, I>(
        label: impl Into<String>,
        forward: F,
        derivative: D,
        inverse: I,
        domain: (f64, f64),
        even_inverse: bool,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        I: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let (lo, hi) = domain;
        if !(lo < hi) {
            return Err(Error::Transform(format!("empty domain ({lo}, {hi})")));
        }
        // sample the finite part of the domain
        let a = if lo.is_finite() { lo } else { hi.min(0.0) - 1e3 };
        let b = if hi.is_finite() { hi } else { lo.max(0.0) + 1e3 };
        for i in 1..MONOTONE_SAMPLES {
            let y = a + (b - a) * i as f64 / MONOTONE_SAMPLES as f64;
            let d = derivative(y);
            if !(d > 0.0) {
                return Err(Error::Transform(format!(
                    "x'(y) = {d} is not positive at y = {y}"
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            forward: Arc::new(forward),
            derivative: Arc::new(derivative),
            inverse: Arc::new(inverse),
            domain,
            even_inverse,
        })
    }

    pub fn identity() -> Self {
        Self {
            label: "identity".into(),
            forward: Arc::new(|y| y),
            derivative: Arc::new(|_| 1.0),
            inverse: Arc::new(|x| x),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            even_inverse: false,
        }
    }

    /// `x^2 / x0^2 = y + 1/2` on `y > -1/2`, mapping one well of the
    /// symmetric quartic onto a single well in `y`. The inverse
    /// `y = x^2/x0^2 - 1/2` is even in `x`.
    pub fn double_well(x0: f64) -> Result<Self> {
        if !(x0 > 0.0 && x0.is_finite()) {
            return Err(Error::InvalidParameter(format!("x0 must be positive, got {x0}")));
        }
        Ok(Self {
            label: "double-well".into(),
            forward: Arc::new(move |y: f64| x0 * (y + 0.5).sqrt()),
            derivative: Arc::new(move |y: f64| 0.5 * x0 / (y + 0.5).sqrt()),
            inverse: Arc::new(move |x: f64| (x / x0).powi(2) - 0.5),
            domain: (-0.5, f64::INFINITY),
            even_inverse: true,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn x(&self, y: f64) -> f64 {
        (self.forward)(y)
    }

    pub fn dx(&self, y: f64) -> f64 {
        (self.derivative)(y)
    }

    pub fn y(&self, x: f64) -> f64 {
        (self.inverse)(x)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn even_inverse(&self) -> bool {
        self.even_inverse
    }

    /// Open image of the domain under `x(y)`.
    pub fn image(&self) -> (f64, f64) {
        let (lo, hi) = self.domain;
        let a = if lo.is_finite() { self.x(lo) } else { f64::NEG_INFINITY };
        let b = if hi.is_finite() { self.x(hi) } else { f64::INFINITY };
        (a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizedLevel {
    pub energy: f64,
    /// Original-side action minus the auxiliary action at `energy`.
    pub action_residual: f64,
    /// Turning points in the integration variable (x, or y when transformed).
    pub turning_points: (f64, f64),
    pub iterations: usize,
}

fn two_turning_points(v: &Potential1D, energy: f64, window: (f64, f64)) -> Result<(f64, f64)> {
    let pts: Vec<_> = v
        .turning_points(energy)?
        .into_iter()
        .filter(|t| t.x > window.0 && t.x < window.1)
        .collect();
    let simple = pts.iter().all(|t| t.multiplicity == 1);
    if pts.len() != 2 || !simple {
        let found = pts.iter().map(|t| t.multiplicity as usize).sum();
        return Err(Error::WrongTopology {
            expected: 2,
            found,
            energy,
        });
    }
    Ok((pts[0].x, pts[1].x))
}

fn solve_quantization<A>(action: A, bracket: (f64, f64), target: f64) -> Result<QuantizedLevel>
where
    A: Fn(f64) -> Result<(f64, (f64, f64))>,
{
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("empty energy bracket [{lo}, {hi}]")));
    }
    let root = brent(
        |e| action(e).map(|(s, _)| s - target),
        lo,
        hi,
        BrentOptions {
            xtol: 1e-15,
            rtol: 2.0 * f64::EPSILON,
            ..Default::default()
        },
    )?;
    let (s, tp) = action(root.x)?;
    Ok(QuantizedLevel {
        energy: root.x,
        action_residual: s - target,
        turning_points: tp,
        iterations: root.iterations,
    })
}

/// Miller-Good quantization `int_{x1}^{x2} p dx = hbar alpha pi / 2` for a
/// potential with exactly two turning points throughout `bracket`.
pub fn mg_quantize(v: &Potential1D, aux: &AuxiliaryProblem, bracket: (f64, f64)) -> Result<QuantizedLevel> {
    let action = |e: f64| -> Result<(f64, (f64, f64))> {
        let (x1, x2) = two_turning_points(v, e, v.domain())?;
        let s = action_integral(|x| v.momentum_sq(e, x), x1, x2, QUAD_TOLERANCE)?;
        Ok((s, (x1, x2)))
    };
    solve_quantization(action, bracket, aux.action(v.hbar()))
}

/// The plain WKB rule `int p dx = hbar pi (n + 1/2)`.
pub fn wkb_quantize(v: &Potential1D, n: u32, bracket: (f64, f64)) -> Result<QuantizedLevel> {
    let action = |e: f64| -> Result<(f64, (f64, f64))> {
        let (x1, x2) = two_turning_points(v, e, v.domain())?;
        let s = action_integral(|x| v.momentum_sq(e, x), x1, x2, QUAD_TOLERANCE)?;
        Ok((s, (x1, x2)))
    };
    solve_quantization(action, bracket, v.hbar() * PI * (n as f64 + 0.5))
}

/// Quantization in the transformed variable:
/// `int_{y1}^{y2} x'(y) p(x(y)) dy = hbar alpha pi / 2`, where `y1, y2` are
/// the images of the two turning points lying inside the transform's range.
pub fn mg_quantize_transformed(
    v: &Potential1D,
    t: &CoordinateTransform,
    aux: &AuxiliaryProblem,
    bracket: (f64, f64),
) -> Result<QuantizedLevel> {
    let image = t.image();
    let (dlo, dhi) = v.domain();
    let window = (image.0.max(dlo), image.1.min(dhi));
    let action = |e: f64| -> Result<(f64, (f64, f64))> {
        let (x1, x2) = two_turning_points(v, e, window)?;
        let (y1, y2) = (t.y(x1), t.y(x2));
        if !(y1 < y2) {
            return Err(Error::Transform(format!(
                "transformed turning points out of order: y({x1}) = {y1}, y({x2}) = {y2}"
            )));
        }
        let s = action_integral(
            |y| {
                let d = t.dx(y);
                if d > 0.0 {
                    d * d * v.momentum_sq(e, t.x(y))
                } else {
                    f64::NAN
                }
            },
            y1,
            y2,
            QUAD_TOLERANCE,
        )
        .map_err(|err| match err {
            Error::Integrand { at } => Error::Transform(format!("x'(y) not positive at y = {at}")),
            other => other,
        })?;
        Ok((s, (y1, y2)))
    };
    solve_quantization(action, bracket, aux.action(v.hbar()))
}

/// Which classically allowed region to map when there are several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WellSelect {
    /// Exactly two turning points are required.
    Single,
    /// Outer pair on the left / right of a four-turning-point level.
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRecord {
    pub x1: f64,
    pub x2: f64,
    pub s_left: f64,
    pub s_right: f64,
    /// Total original-side action minus the auxiliary action.
    pub action_mismatch: f64,
}

/// Tabulated zero-order mapping `s0(x)` and its derivative on `[x1, x2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappingTable {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub ds: Vec<f64>,
    pub boundary: BoundaryRecord,
}

impl MappingTable {
    /// Cubic Hermite interpolation of `s0` at `x`.
    pub fn s_at(&self, x: f64) -> Option<f64> {
        let n = self.x.len();
        if n < 2 || x < self.x[0] || x > self.x[n - 1] {
            return None;
        }
        let k = match self.x.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(k) => return Some(self.s[k]),
            Err(k) => k - 1,
        };
        let (x0, x1) = (self.x[k], self.x[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        Some(
            (2.0 * t3 - 3.0 * t2 + 1.0) * self.s[k]
                + (t3 - 2.0 * t2 + t) * h * self.ds[k]
                + (-2.0 * t3 + 3.0 * t2) * self.s[k + 1]
                + (t3 - t2) * h * self.ds[k + 1],
        )
    }

    /// Linear interpolation of `s0'` at `x`.
    pub fn ds_at(&self, x: f64) -> Option<f64> {
        let n = self.x.len();
        if n < 2 || x < self.x[0] || x > self.x[n - 1] {
            return None;
        }
        let k = self.x.partition_point(|&p| p <= x).clamp(1, n - 1) - 1;
        let t = (x - self.x[k]) / (self.x[k + 1] - self.x[k]);
        Some(self.ds[k] + t * (self.ds[k + 1] - self.ds[k]))
    }
}

fn select_region(v: &Potential1D, energy: f64, well: WellSelect) -> Result<(f64, f64)> {
    let pts = v.turning_points(energy)?;
    match well {
        WellSelect::Single => two_turning_points(v, energy, v.domain()),
        WellSelect::Left | WellSelect::Right => {
            if pts.len() != 4 || pts.iter().any(|t| t.multiplicity != 1) {
                return Err(Error::WrongTopology {
                    expected: 4,
                    found: pts.iter().map(|t| t.multiplicity as usize).sum(),
                    energy,
                });
            }
            Ok(if well == WellSelect::Left {
                (pts[0].x, pts[1].x)
            } else {
                (pts[2].x, pts[3].x)
            })
        }
    }
}

/// Limit of `s0'` at a turning point, from the leading `3/2`-power terms of
/// both partial actions.
fn endpoint_slope(v: &Potential1D, aux: &AuxiliaryProblem, x: f64) -> Result<f64> {
    let force = v.derivative(x)?.abs();
    let hbar = v.hbar();
    Ok((2.0 * v.mass() * force / (2.0 * hbar * hbar * aux.alpha().sqrt())).cbrt())
}

/// Build `s0(x)` on a uniform grid of `nodes` points between the turning
/// points by matching `int_{x1}^{x} p dx = int_{s01}^{s0} P ds`.
pub fn mapping_s0(
    v: &Potential1D,
    energy: f64,
    aux: &AuxiliaryProblem,
    well: WellSelect,
    nodes: usize,
) -> Result<MappingTable> {
    if nodes < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 nodes, got {nodes}")));
    }
    let (x1, x2) = select_region(v, energy, well)?;
    let hbar = v.hbar();
    let target = aux.action(hbar);

    let h = (x2 - x1) / (nodes - 1) as f64;
    let x: Vec<f64> = (0..nodes)
        .map(|k| if k == nodes - 1 { x2 } else { x1 + k as f64 * h })
        .collect();

    let p = |x: f64| v.momentum_sq(energy, x).max(0.0).sqrt();
    let mut partial = vec![0.0; nodes];
    for k in 1..nodes {
        let left = if k == 1 { Endpoint::SqrtVanishing } else { Endpoint::Smooth };
        let right = if k == nodes - 1 { Endpoint::SqrtVanishing } else { Endpoint::Smooth };
        let piece = integrate(
            &IntegrandSpec::new(p, x[k - 1], x[k])
                .endpoints(left, right)
                .tolerance(QUAD_TOLERANCE / nodes as f64),
        )?;
        partial[k] = partial[k - 1] + piece.value;
    }

    let mismatch = partial[nodes - 1] - target;
    if mismatch.abs() > 1e-8 * target.max(hbar) {
        return Err(Error::QuantizationViolated { mismatch });
    }

    let (s_left, s_right) = aux.turning_points();
    let mut s = Vec::with_capacity(nodes);
    let mut ds = Vec::with_capacity(nodes);
    for k in 0..nodes {
        if k == 0 {
            s.push(s_left);
            ds.push(endpoint_slope(v, aux, x1)?);
        } else if k == nodes - 1 {
            s.push(s_right);
            ds.push(endpoint_slope(v, aux, x2)?);
        } else {
            let sk = aux.invert_partial_action(partial[k], hbar)?;
            s.push(sk);
            ds.push(p(x[k]) / aux.momentum(sk, hbar));
        }
    }

    Ok(MappingTable {
        x,
        s,
        ds,
        boundary: BoundaryRecord {
            x1,
            x2,
            s_left,
            s_right,
            action_mismatch: mismatch,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionSample {
    pub x: f64,
    pub psi: f64,
    /// False at (or numerically on top of) a turning point, where `s0'` is
    /// taken from the tabulated limit instead of `p / P`.
    pub valid: bool,
}

/// Zero-order Miller-Good wavefunction `phi_n(s0(x)) / sqrt(s0'(x))`,
/// unnormalized.
pub fn wavefunction(
    v: &Potential1D,
    energy: f64,
    aux: &AuxiliaryProblem,
    table: &MappingTable,
    grid: &[f64],
) -> Result<Vec<WavefunctionSample>> {
    let hbar = v.hbar();
    let (x1, x2) = (table.boundary.x1, table.boundary.x2);
    let eps = 1e-12 * (x2 - x1);
    grid.iter()
        .map(|&x| {
            let s = table.s_at(x).ok_or(Error::Domain {
                what: "x",
                value: x,
                domain: "the classically allowed interval of the mapping table",
            })?;
            let big_p = aux.momentum(s, hbar);
            let p = v.momentum_sq(energy, x).max(0.0).sqrt();
            let interior = x - x1 > eps && x2 - x > eps && big_p > 1e-8 * hbar && p > 0.0;
            let ds = if interior {
                p / big_p
            } else {
                table.ds_at(x).unwrap_or(f64::NAN)
            };
            Ok(WavefunctionSample {
                x,
                psi: aux.eigenfunction(s) / ds.sqrt(),
                valid: interior && ds.is_finite(),
            })
        })
        .collect()
}

/// Scale samples to unit norm by the trapezoid rule over the grid.
pub fn normalize_trapezoid(samples: &mut [WavefunctionSample]) {
    let norm: f64 = samples
        .windows(2)
        .map(|w| 0.5 * (w[1].x - w[0].x) * (w[0].psi.powi(2) + w[1].psi.powi(2)))
        .sum();
    if norm > 0.0 {
        let scale = norm.sqrt().recip();
        for s in samples {
            s.psi *= scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{CustomPotential, HarmonicParams, OscillatorParams};
    use proptest::prelude::*;

    fn harmonic() -> Potential1D {
        Potential1D::harmonic(HarmonicParams::natural())
    }

    #[test]
    fn auxiliary_action_closed_form() {
        for n in 0..6 {
            let aux = AuxiliaryProblem::new(n);
            let (lo, hi) = aux.turning_points();
            assert_eq!(lo, -hi);
            assert!((aux.partial_action(hi, 1.3) - aux.action(1.3)).abs() < 1e-12 * aux.action(1.3));
            assert_eq!(aux.partial_action(lo, 1.3), 0.0);
            let numeric = action_integral(|s| aux.alpha() - s * s, lo, hi, 1e-12).unwrap();
            assert!((numeric - aux.action(1.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn auxiliary_inversion_round_trips() {
        let aux = AuxiliaryProblem::new(2);
        for s in [-2.2, -1.0, 0.0, 0.3, 2.1] {
            let a = aux.partial_action(s, 1.0);
            assert!((aux.invert_partial_action(a, 1.0).unwrap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_functions_solve_the_auxiliary_equation() {
        // phi'' + (alpha - s^2) phi = 0 by finite differences
        for n in 0..5 {
            let aux = AuxiliaryProblem::new(n);
            let h = 1e-3;
            for s in [-1.7, -0.4, 0.25, 1.1] {
                let f = |t| aux.eigenfunction(t);
                let d2 = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
                let residual = d2 + (aux.alpha() - s * s) * f(s);
                assert!(residual.abs() < 1e-4 * (1.0 + f(s).abs()), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn harmonic_levels_are_exact() {
        let v = harmonic();
        for n in 0..6u32 {
            let aux = AuxiliaryProblem::new(n);
            let level = mg_quantize(&v, &aux, (0.1, 7.0)).unwrap();
            assert!((level.energy - (n as f64 + 0.5)).abs() < 1e-9, "n={n}: {}", level.energy);
            assert!(level.action_residual.abs() < ACTION_TOLERANCE);
        }
    }

    #[test]
    fn harmonic_in_physical_units() {
        let p = HarmonicParams::new(2.5, 0.7, 0.3).unwrap();
        let v = Potential1D::harmonic(p);
        let level = mg_quantize(&v, &AuxiliaryProblem::new(3), (0.01, 5.0)).unwrap();
        assert!((level.energy - 0.3 * 0.7 * 3.5).abs() < 1e-10);
    }

    #[test]
    fn identity_transform_matches_plain_rule() {
        let v = harmonic();
        let aux = AuxiliaryProblem::ground();
        let a = mg_quantize(&v, &aux, (0.1, 2.0)).unwrap().energy;
        let b = mg_quantize_transformed(&v, &CoordinateTransform::identity(), &aux, (0.1, 2.0))
            .unwrap()
            .energy;
        assert!((a - 0.5).abs() < 1e-10);
        assert!((a - b).abs() <= 1e-10 * a.abs());
    }

    #[test]
    fn pure_quartic_ground_level() {
        // int_{-a}^{a} sqrt(2(E - x^4)) dx = sqrt(2) E^{3/4} B with
        // B = int_{-1}^{1} sqrt(1 - u^4) du = 1.748038...; setting it to pi/2
        // gives E = (pi / (2 sqrt(2) B))^{4/3}.
        let b = 2.0 * integrate(&IntegrandSpec::new(|u: f64| (1.0 - u.powi(4)).sqrt(), 0.0, 1.0)
            .endpoints(Endpoint::Smooth, Endpoint::SqrtVanishing).tolerance(1e-14))
            .unwrap()
            .value;
        assert!((b - 1.748_038_369).abs() < 1e-8);
        let closed = (PI / (2.0 * 2f64.sqrt() * b)).powf(4.0 / 3.0);
        let c = CustomPotential::new("x^4", |x| x.powi(4), (-4.0, 4.0), 1.0, 1.0).unwrap();
        let level = mg_quantize(&Potential1D::Custom(c), &AuxiliaryProblem::ground(), (0.1, 2.0)).unwrap();
        assert!((level.energy - closed).abs() < 1e-9);
        assert!((level.energy - 0.546_2).abs() < 1e-3);
    }

    #[test]
    fn wrong_topology_and_missing_root() {
        let v = Potential1D::quartic(OscillatorParams::natural(0.05).unwrap());
        let err = mg_quantize(&v, &AuxiliaryProblem::ground(), (-1.0, -0.5)).unwrap_err();
        assert_eq!(err.kind(), "wrong_topology");
        let err = mg_quantize(&harmonic(), &AuxiliaryProblem::ground(), (1.0, 2.0)).unwrap_err();
        assert_eq!(err.kind(), "no_root");
    }

    #[test]
    fn transform_rejects_non_monotone_maps() {
        let err = CoordinateTransform::new("fold", |y| y * y, |y| 2.0 * y, |x| x.sqrt(), (-1.0, 1.0), false)
            .unwrap_err();
        assert_eq!(err.kind(), "transform");
        let t = CoordinateTransform::double_well(2.0).unwrap();
        assert!(t.even_inverse());
        assert_eq!(t.y(1.3), t.y(-1.3));
        assert!((t.x(t.y(1.3)) - 1.3).abs() < 1e-15);
        assert_eq!(t.image(), (0.0, f64::INFINITY));
    }

    #[test]
    fn harmonic_mapping_is_identity() {
        let v = harmonic();
        let aux = AuxiliaryProblem::ground();
        let t = mapping_s0(&v, 0.5, &aux, WellSelect::Single, 101).unwrap();
        for ((x, s), ds) in t.x.iter().zip(&t.s).zip(&t.ds) {
            assert!((x - s).abs() < 1e-9, "{x} {s}");
            assert!((ds - 1.0).abs() < 1e-6, "{x} {ds}");
        }
        assert!((t.s_at(0.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn mapping_rejects_unquantized_energy() {
        let err = mapping_s0(&harmonic(), 0.6, &AuxiliaryProblem::ground(), WellSelect::Single, 50)
            .unwrap_err();
        assert_eq!(err.kind(), "quantization_violated");
    }

    #[test]
    fn harmonic_wavefunction_is_gaussian() {
        let v = harmonic();
        let aux = AuxiliaryProblem::ground();
        let table = mapping_s0(&v, 0.5, &aux, WellSelect::Single, 201).unwrap();
        let grid: Vec<f64> = (0..=40).map(|k| -1.0 + k as f64 * 0.05).collect();
        let psi = wavefunction(&v, 0.5, &aux, &table, &grid).unwrap();
        for w in &psi[1..psi.len() - 1] {
            assert!(w.valid);
            assert!((w.psi - (-0.5 * w.x * w.x).exp()).abs() < 1e-6);
        }
        assert!(!psi[0].valid && !psi[psi.len() - 1].valid);
        assert!(psi[0].psi.is_finite());
        assert!(wavefunction(&v, 0.5, &aux, &table, &[1.5]).is_err());
    }

    #[test]
    fn excited_wavefunction_node_count() {
        let v = harmonic();
        for n in 0..4u32 {
            let aux = AuxiliaryProblem::new(n);
            let e = n as f64 + 0.5;
            let table = mapping_s0(&v, e, &aux, WellSelect::Single, 301).unwrap();
            let (x1, x2) = (table.boundary.x1, table.boundary.x2);
            let grid: Vec<f64> = (1..400).map(|k| x1 + (x2 - x1) * k as f64 / 400.0).collect();
            let psi = wavefunction(&v, e, &aux, &table, &grid).unwrap();
            let nodes = psi.windows(2).filter(|w| w[0].psi.signum() != w[1].psi.signum()).count();
            assert_eq!(nodes as u32, n);
        }
    }

    #[test]
    fn trapezoid_normalization() {
        let mut samples: Vec<_> = (0..=2000)
            .map(|k| {
                let x = -8.0 + k as f64 * 0.008;
                WavefunctionSample { x, psi: 3.0 * (-0.5 * x * x).exp(), valid: true }
            })
            .collect();
        normalize_trapezoid(&mut samples);
        let peak = samples[1000].psi;
        assert!((peak - PI.powf(-0.25)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn wkb_and_mg_rules_agree(w in 0.3..3.0f64, m in 0.3..3.0f64, n in 0u32..4) {
            let v = Potential1D::harmonic(HarmonicParams::new(m, w, 1.0).unwrap());
            let hi = w * (n as f64 + 2.0);
            let a = mg_quantize(&v, &AuxiliaryProblem::new(n), (1e-3, hi)).unwrap().energy;
            let b = wkb_quantize(&v, n, (1e-3, hi)).unwrap().energy;
            prop_assert!((a - b).abs() <= 1e-10 * a);
        }

        #[test]
        fn mapping_is_monotone(n in 0u32..3, l in 0.3..3.0f64) {
            // anharmonic single well x^2/2 + l x^4/10
            let c = CustomPotential::new("aho", move |x| 0.5 * x * x + 0.1 * l * x.powi(4),
                (-8.0, 8.0), 1.0, 1.0).unwrap();
            let v = Potential1D::Custom(c);
            let aux = AuxiliaryProblem::new(n);
            let e = mg_quantize(&v, &aux, (0.05, 20.0)).unwrap().energy;
            let t = mapping_s0(&v, e, &aux, WellSelect::Single, 64).unwrap();
            prop_assert!(t.s.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(t.ds.iter().all(|&d| d > 0.0));
            prop_assert!((t.s[0] + aux.alpha().sqrt()).abs() < 1e-12);
            // even potential: s0(0) = 0
            prop_assert!(t.s_at(0.0).unwrap().abs() < 1e-7);
        }
    }
}
