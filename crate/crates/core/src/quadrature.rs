//! Adaptive Gauss-Kronrod quadrature with endpoint-singularity handling.
//!
//! Integrands that vanish like a square root (classical turning points) or
//! blow up like an inverse square root at an endpoint are integrated after
//! the substitution `x = m - r cos(theta)`, which turns both behaviours into
//! smooth functions of `theta`. Everything else goes straight to the
//! adaptive 7/15-point Gauss-Kronrod driver.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Maximum bisection depth of any subinterval.
pub const MAX_DEPTH: u32 = 60;
const MAX_INTERVALS: usize = 20_000;

/// Relative slack on negative momentum-squared samples attributed to
/// round-off next to a turning point.
const FORBIDDEN_SLACK: f64 = 1e-9;

/// Behaviour of the integrand at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Smooth,
    /// f ~ sqrt(distance to the endpoint)
    SqrtVanishing,
    /// f ~ 1/sqrt(distance to the endpoint)
    InverseSqrt,
}

#[derive(Clone)]
pub struct IntegrandSpec<F> {
    pub f: F,
    pub a: f64,
    pub b: f64,
    pub left: Endpoint,
    pub right: Endpoint,
    pub tolerance: f64,
}

impl<F: Fn(f64) -> f64> IntegrandSpec<F> {
    pub fn new(f: F, a: f64, b: f64) -> Self {
        Self {
            f,
            a,
            b,
            left: Endpoint::Smooth,
            right: Endpoint::Smooth,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn endpoints(mut self, left: Endpoint, right: Endpoint) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

// Kronrod abscissae (descending) and weights; every second abscissa is a
// 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = g(center);
    if !fc.is_finite() {
        return Err(Error::Integrand { at: center });
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = kronrod.abs();
    let mut samples = [(0.0, 0.0); 7];

    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let (xl, xr) = (center - half * x, center + half * x);
        let (fl, fr) = (g(xl), g(xr));
        if !fl.is_finite() {
            return Err(Error::Integrand { at: xl });
        }
        if !fr.is_finite() {
            return Err(Error::Integrand { at: xr });
        }
        samples[j] = (fl, fr);
        kronrod += w * (fl + fr);
        abs_k += w * (fl.abs() + fr.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(fl, fr)) in samples.iter().enumerate() {
        asc += WGK[j] * ((fl - mean).abs() + (fr - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_k * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Segment {
        a,
        b,
        value,
        error,
        depth: 0,
    })
}

/// Globally adaptive bisection: always split the segment with the largest
/// error estimate. The refinement sequence does not depend on the tolerance,
/// so a tighter tolerance only extends it.
fn adaptive<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64, tol: f64) -> Result<Integral> {
    let first = kronrod15(g, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut frozen: Vec<Segment> = Vec::new();
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = 15;

    loop {
        let floor = 50.0 * f64::EPSILON * value.abs();
        if error <= tol.max(floor) {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Accuracy {
                estimate: value,
                error,
            });
        };
        if worst.depth >= MAX_DEPTH || heap.len() + frozen.len() >= MAX_INTERVALS {
            frozen.push(worst);
            if heap.len() + frozen.len() >= MAX_INTERVALS {
                return Err(Error::Accuracy {
                    estimate: value,
                    error,
                });
            }
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let mut left = kronrod15(g, worst.a, mid)?;
        let mut right = kronrod15(g, mid, worst.b)?;
        evaluations += 30;
        left.depth = worst.depth + 1;
        right.depth = worst.depth + 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running totals.
    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = all.iter().map(|s| s.value).sum();
    let error = all.iter().map(|s| s.error).sum();
    Ok(Integral {
        value,
        error,
        intervals: all.len(),
        evaluations,
    })
}

/// Integrate `spec.f` over `[spec.a, spec.b]` to the requested absolute
/// tolerance (floored at a few ulps of the result).
pub fn integrate<F: Fn(f64) -> f64>(spec: &IntegrandSpec<F>) -> Result<Integral> {
    let (a, b) = (spec.a, spec.b);
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidParameter(format!(
            "integration interval [{a}, {b}] must be finite with a < b"
        )));
    }
    if !(spec.tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {} must be positive",
            spec.tolerance
        )));
    }

    let smooth = spec.left == Endpoint::Smooth && spec.right == Endpoint::Smooth;
    if smooth {
        return adaptive(&spec.f, a, b, spec.tolerance);
    }

    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let g = |theta: f64| {
        let x = (m - r * theta.cos()).clamp(a, b);
        let s = theta.sin();
        if s == 0.0 {
            return 0.0;
        }
        (spec.f)(x) * r * s
    };
    adaptive(&g, 0.0, PI, spec.tolerance)
}

/// Action integral `int_{x1}^{x2} p dx` between two classical turning
/// points, given the momentum squared `p^2(x)`.
pub fn action_integral<F>(momentum_sq: F, x1: f64, x2: f64, tolerance: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if x1 == x2 {
        return Ok(0.0);
    }
    if !(x1 < x2) {
        return Err(Error::InvalidParameter(format!(
            "turning points out of order: {x1} > {x2}"
        )));
    }

    let scale = [0.25, 0.5, 0.75]
        .iter()
        .map(|t| momentum_sq(x1 + t * (x2 - x1)).abs())
        .fold(0.0_f64, f64::max);
    let slack = FORBIDDEN_SLACK * scale.max(f64::MIN_POSITIVE);
    let forbidden = Cell::new(None);

    let p = |x: f64| {
        let p2 = momentum_sq(x);
        if p2 >= 0.0 {
            p2.sqrt()
        } else if p2 >= -slack {
            0.0
        } else {
            forbidden.set(Some(x));
            f64::NAN
        }
    };
    let spec = IntegrandSpec::new(p, x1, x2)
        .endpoints(Endpoint::SqrtVanishing, Endpoint::SqrtVanishing)
        .tolerance(tolerance);
    match integrate(&spec) {
        Ok(r) => Ok(r.value),
        Err(Error::Integrand { at }) => Err(match forbidden.get() {
            Some(x) => Error::ClassicallyForbidden { at: x },
            None => Error::Integrand { at },
        }),
        Err(e) => Err(e),
    }
}
