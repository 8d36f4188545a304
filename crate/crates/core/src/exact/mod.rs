//! Converged eigenvalues of `H = -(1/2) d^2/dx^2 + v(x)` for even `v` on a
//! box `[-L, L]` with hard walls (`hbar = m = 1`).
//!
//! Both backends split the problem into even and odd sectors on the
//! half-line grid `x_j = j h`, `h = L/(M + 1)`, so parities are exact and
//! tunneling doublets never compete inside one bisection. `M + 1` doubles
//! from level to level and the eigenvalues are Romberg-extrapolated in `h`.

mod numerov;
pub mod tridiagonal;

use serde::Serialize;

use crate::error::{Error, Result};
use tridiagonal::Tridiagonal;

/// Half-grid sizes `M + 1`; full grids have `2M + 1` interior nodes
/// (1023, 2047, 4095, 8191).
const HALF_CELLS: [usize; 4] = [512, 1024, 2048, 4096];
pub const MAX_LEVELS: usize = 8;
pub const MIN_TOLERANCE: f64 = 1e-12;
/// `int sqrt(2 (v - E)) dx` from the outer turning point to the wall.
pub const TAIL_ACTION: f64 = 34.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    FiniteDifference,
    Numerov,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::FiniteDifference => "finite_difference",
            Backend::Numerov => "numerov",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fd" | "finite_difference" | "finite-difference" => Ok(Backend::FiniteDifference),
            "numerov" => Ok(Backend::Numerov),
            other => Err(Error::InvalidParameter(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Coupling for the quartic double well, `None` for a caller-supplied potential.
    pub lambda: Option<f64>,
    pub backend: Backend,
    pub half_width: f64,
    /// Interior nodes of the finest full grid.
    pub nodes: usize,
    /// Ascending, in units of `hbar omega`.
    pub eigenvalues: Vec<f64>,
    pub parities: Vec<Parity>,
    /// Per-level change between the last two extrapolants.
    pub convergence: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    /// Unit-norm (`sum psi^2 h = 1`) on `grid`, positive at the right-hand maximum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl EigenResult {
    pub fn ground(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_convergence(&self) -> f64 {
        self.convergence.iter().fold(0.0, |m, c| m.max(*c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub levels: usize,
    pub tolerance: f64,
    pub backend: Backend,
    pub vectors: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            levels: 1,
            tolerance: 1e-8,
            backend: Backend::FiniteDifference,
            vectors: false,
        }
    }
}

fn check_options(opts: &SolveOptions) -> Result<()> {
    if opts.levels == 0 || opts.levels > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "level count must be in 1..={MAX_LEVELS}, got {}",
            opts.levels
        )));
    }
    if !(opts.tolerance >= MIN_TOLERANCE && opts.tolerance.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be at least {MIN_TOLERANCE:e}, got {}",
            opts.tolerance
        )));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "lambda'",
            value: lambda,
            domain: "(0, inf)",
        })
    }
}

fn quartic(lambda: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x: f64| {
        let x2 = x * x;
        lambda * x2 * x2 - 0.5 * x2
    }
}

/// Lowest `k` levels of the quartic double well `lambda' x^4 - x^2/2`.
pub fn spectrum_with(lambda: f64, opts: SolveOptions) -> Result<EigenResult> {
    check_lambda(lambda)?;
    check_options(&opts)?;
    let v = quartic(lambda);
    let x_zero = (0.5 / lambda).sqrt();
    let base = 1.5 * x_zero;
    let x_min = 0.5 / lambda.sqrt();

    // size the box from a coarse estimate of the highest requested level;
    // a larger box only lowers the levels, so one pass is enough
    let coarse = sector_levels(&sample(v, base, HALF_CELLS[0] / 2), base / (HALF_CELLS[0] / 2) as f64, opts.levels, Backend::FiniteDifference, 1e-10);
    let top = merge(&coarse, opts.levels)
        .last()
        .map(|(e, _, _)| *e)
        .unwrap_or(0.0);
    let half_width = base.max(decay_half_width(v, top, x_min)?);

    let mut result = solve_symmetric(v, half_width, opts)?;
    result.lambda = Some(lambda);
    Ok(result)
}

pub fn ground_state(lambda: f64, tolerance: f64) -> Result<EigenResult> {
    spectrum_with(
        lambda,
        SolveOptions {
            tolerance,
            ..Default::default()
        },
    )
}

pub fn ground_state_with(lambda: f64, tolerance: f64, backend: Backend) -> Result<EigenResult> {
    spectrum_with(
        lambda,
        SolveOptions {
            tolerance,
            backend,
            ..Default::default()
        },
    )
}

pub fn spectrum(lambda: f64, k: usize, tolerance: f64) -> Result<EigenResult> {
    spectrum_with(
        lambda,
        SolveOptions {
            levels: k,
            tolerance,
            ..Default::default()
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub finite_difference: EigenResult,
    pub numerov: EigenResult,
    pub max_difference: f64,
}

/// Solve with both backends; disagreement beyond `tolerance` is an accuracy error.
pub fn cross_validate(lambda: f64, k: usize, tolerance: f64) -> Result<CrossValidation> {
    let opts = SolveOptions {
        levels: k,
        tolerance,
        ..Default::default()
    };
    let fd = spectrum_with(lambda, opts)?;
    let nv = spectrum_with(
        lambda,
        SolveOptions {
            backend: Backend::Numerov,
            ..opts
        },
    )?;
    let max_difference = fd
        .eigenvalues
        .iter()
        .zip(&nv.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if max_difference > tolerance || fd.parities != nv.parities {
        return Err(Error::Accuracy {
            estimate: fd.ground(),
            error: max_difference,
        });
    }
    Ok(CrossValidation {
        finite_difference: fd,
        numerov: nv,
        max_difference,
    })
}

/// Outermost `x` where the decay action from the turning point of `energy`
/// reaches [`TAIL_ACTION`]. `v` must increase beyond `from`.
pub fn decay_half_width<V: Fn(f64) -> f64>(v: V, energy: f64, from: f64) -> Result<f64> {
    let mut lo = from.max(0.0);
    let mut hi = lo.max(1.0);
    let mut guard = 0;
    while v(hi) <= energy {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::InvalidParameter("potential does not confine the level".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if v(mid) > energy {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let turning = hi;
    let dx = 1e-3 * turning.max(1.0);
    let kappa = |x: f64| (2.0 * (v(x) - energy)).max(0.0).sqrt();
    let mut x = turning;
    let mut action = 0.0;
    while action < TAIL_ACTION {
        action += 0.5 * dx * (kappa(x) + kappa(x + dx));
        x += dx;
        if x > 1e6 * turning.max(1.0) {
            return Err(Error::InvalidParameter("potential does not confine the level".into()));
        }
    }
    Ok(x)
}

/// Samples `v(j h)` for `j = 0..=cells`, `h = half_width / cells`.
fn sample<V: Fn(f64) -> f64>(v: V, half_width: f64, cells: usize) -> Vec<f64> {
    let h = half_width / cells as f64;
    (0..=cells).map(|j| v(j as f64 * h)).collect()
}

fn sector_matrix(v: &[f64], h: f64, parity: Parity) -> Tridiagonal {
    // unknowns j = 0..m (even) or 1..m (odd); psi(L) = 0
    let m = v.len() - 2;
    let kinetic = 1.0 / (h * h);
    let off = -0.5 * kinetic;
    match parity {
        Parity::Even => {
            let diag: Vec<f64> = v[..=m].iter().map(|p| kinetic + p).collect();
            let mut lower = vec![off; m];
            let mut upper = vec![off; m];
            if m > 0 {
                // psi_{-1} = psi_1 doubles the coupling in row 0
                lower[0] = off;
                upper[0] = 2.0 * off;
            }
            Tridiagonal { diag, lower, upper }
        }
        Parity::Odd => {
            let diag: Vec<f64> = v[1..=m].iter().map(|p| kinetic + p).collect();
            Tridiagonal {
                diag,
                lower: vec![off; m - 1],
                upper: vec![off; m - 1],
            }
        }
    }
}

/// `k` lowest levels in each parity sector: `[even, odd]`.
fn sector_levels(v: &[f64], h: f64, k: usize, backend: Backend, width: f64) -> [Vec<f64>; 2] {
    [Parity::Even, Parity::Odd].map(|parity| match backend {
        Backend::FiniteDifference => {
            let t = sector_matrix(v, h, parity);
            (0..k.min(t.len()))
                .map(|i| t.eigenvalue(i, width).expect("index below matrix size"))
                .collect()
        }
        Backend::Numerov => (0..k).map(|i| numerov::level(v, h, parity, i, width)).collect(),
    })
}

/// Lowest `k` of the two sectors: `(energy, parity, sector index)`.
fn merge(sectors: &[Vec<f64>; 2], k: usize) -> Vec<(f64, Parity, usize)> {
    let mut all: Vec<(f64, Parity, usize)> = sectors[0]
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, Parity::Even, i))
        .chain(sectors[1].iter().enumerate().map(|(i, &e)| (e, Parity::Odd, i)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(k);
    all
}

/// Romberg table in `h`, halving per row, error terms `h^p, h^(p+2), ...`.
#[derive(Debug, Default)]
struct Romberg {
    rows: Vec<Vec<f64>>,
    leading: i32,
}

impl Romberg {
    fn new(leading: i32) -> Self {
        Self { rows: Vec::new(), leading }
    }

    fn push(&mut self, value: f64) {
        let mut row = vec![value];
        if let Some(prev) = self.rows.last() {
            for j in 0..prev.len() {
                let factor = 2f64.powi(self.leading + 2 * j as i32) - 1.0;
                let next = row[j] + (row[j] - prev[j]) / factor;
                row.push(next);
            }
        }
        self.rows.push(row);
    }

    fn best(&self) -> f64 {
        *self.rows.last().and_then(|r| r.last()).expect("at least one row")
    }

    fn change(&self) -> f64 {
        let row = self.rows.last().expect("at least one row");
        if row.len() < 2 {
            f64::INFINITY
        } else {
            (row[row.len() - 1] - row[row.len() - 2]).abs()
        }
    }
}

/// Lowest levels of an even potential `v` (with `hbar = m = 1`) in the box
/// `[-half_width, half_width]`, refined until each changes by less than
/// the tolerance.
pub fn solve_symmetric<V: Fn(f64) -> f64>(v: V, half_width: f64, opts: SolveOptions) -> Result<EigenResult> {
    check_options(&opts)?;
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidParameter(format!("half width must be positive, got {half_width}")));
    }
    let k = opts.levels;
    let leading = match opts.backend {
        Backend::FiniteDifference => 2,
        Backend::Numerov => 4,
    };
    let width = 1e-3 * opts.tolerance;
    let mut tables: [Vec<Romberg>; 2] = [
        (0..k).map(|_| Romberg::new(leading)).collect(),
        (0..k).map(|_| Romberg::new(leading)).collect(),
    ];

    let mut last = None;
    for (level, &cells) in HALF_CELLS.iter().enumerate() {
        let h = half_width / cells as f64;
        let samples = sample(&v, half_width, cells);
        let sectors = sector_levels(&samples, h, k, opts.backend, width);
        for (tabs, values) in tables.iter_mut().zip(&sectors) {
            for (t, &e) in tabs.iter_mut().zip(values) {
                t.push(e);
            }
        }
        let best = [0, 1].map(|s| tables[s].iter().map(Romberg::best).collect::<Vec<_>>());
        let picked = merge(&best, k);
        let convergence: Vec<f64> = picked
            .iter()
            .map(|&(_, p, i)| tables[p as usize][i].change())
            .collect();
        let done = level > 0 && convergence.iter().all(|c| *c <= opts.tolerance);
        last = Some((cells, h, samples, picked, convergence));
        if done {
            break;
        }
    }

    let (cells, h, samples, picked, convergence) = last.expect("at least one level");
    let worst = convergence.iter().copied().fold(0.0, f64::max);
    if worst > opts.tolerance {
        return Err(Error::Accuracy {
            estimate: picked[0].0,
            error: worst,
        });
    }

    let (grid, eigenvectors) = if opts.vectors {
        let grid: Vec<f64> = (1..2 * cells).map(|i| (i as f64 - cells as f64) * h).collect();
        let raw = sector_levels(&samples, h, k, opts.backend, 1e-3 * opts.tolerance.min(1e-10));
        let vectors = picked
            .iter()
            .map(|&(_, parity, i)| {
                let e = raw[parity as usize][i];
                full_vector(&samples, h, parity, e, opts.backend)
            })
            .collect();
        (Some(grid), Some(vectors))
    } else {
        (None, None)
    };

    Ok(EigenResult {
        lambda: None,
        backend: opts.backend,
        half_width,
        nodes: 2 * cells - 1,
        eigenvalues: picked.iter().map(|p| p.0).collect(),
        parities: picked.iter().map(|p| p.1).collect(),
        convergence,
        grid,
        eigenvectors,
    })
}

/// Eigenvector of one sector level mirrored onto the full grid `x_i`,
/// `i = 1 - cells ..= cells - 1`.
fn full_vector(samples: &[f64], h: f64, parity: Parity, energy: f64, backend: Backend) -> Vec<f64> {
    let m = samples.len() - 2;
    // half[j] = psi(j h), j = 0..=m
    let half: Vec<f64> = match backend {
        Backend::FiniteDifference => {
            let t = sector_matrix(samples, h, parity);
            let u = t.eigenvector(energy);
            match parity {
                Parity::Even => u,
                Parity::Odd => std::iter::once(0.0).chain(u).collect(),
            }
        }
        Backend::Numerov => numerov::shoot(samples, h, energy, parity)[..=m].to_vec(),
    };
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut full: Vec<f64> = half[1..].iter().rev().map(|p| sign * p).collect();
    full.extend_from_slice(&half);
    let norm = (full.iter().map(|p| p * p).sum::<f64>() * h).sqrt();
    let peak = half.iter().copied().fold(0.0_f64, |a, p| if p.abs() > a.abs() { p } else { a });
    let scale = peak.signum() / norm;
    full.iter_mut().for_each(|p| *p *= scale);
    full
}
