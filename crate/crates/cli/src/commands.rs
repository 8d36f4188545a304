use rayon::prelude::*;
use serde::Serialize;

use millergood::diagnostics::validity_report;
use millergood::exact::{self, Backend, EigenResult, SolveOptions};
use millergood::miller_good::normalize_trapezoid;
use millergood::reference::{PublishedRow, PUBLISHED, TABLE_VERSION};
use millergood::{
    lambda_max, mapping_s0, solve_z, wavefunction, AuxiliaryProblem, Error, OscillatorParams, Potential1D,
    Result, WellSelect, ZSolution,
};

use crate::output::{Cell, Report, Table};

/// Tolerances a reproduced table row is graded against.
pub const Z_SQUARED_TOLERANCE: f64 = 2e-4;
pub const Z_SQUARED_TOLERANCE_EDGE: f64 = 1e-3;
pub const ENERGY_TOLERANCE: f64 = 0.02;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "lambda'",
            value: lambda,
            domain: "(0, lambda'_max]",
        })
    }
}

#[derive(Debug, Serialize)]
struct TableRow {
    lambda: f64,
    z_squared: f64,
    e_over_hw: f64,
    e_oracle: Option<f64>,
    published_z_squared: f64,
    published_e_over_hw: f64,
    published_e_exact: Option<f64>,
    published_e_reference_method: Option<f64>,
    z_squared_ok: bool,
    e_over_hw_ok: bool,
    oracle_ok: Option<bool>,
    oracle_error: Option<String>,
}

#[derive(Debug, Serialize)]
struct TableReport {
    table_version: &'static str,
    all_ok: bool,
    rows: Vec<TableRow>,
}

fn table_row(row: &PublishedRow, tol: f64) -> Result<TableRow> {
    let s = solve_z(row.lambda)?;
    let (e_oracle, oracle_error) = match exact::ground_state(row.lambda, tol) {
        Ok(r) => (Some(r.ground()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let z_tol = if row.lambda <= 0.08 {
        Z_SQUARED_TOLERANCE
    } else {
        Z_SQUARED_TOLERANCE_EDGE
    };
    let oracle_ok = match (e_oracle, row.e_exact) {
        (None, _) => Some(false),
        (Some(o), Some(p)) => Some((o - p).abs() <= ENERGY_TOLERANCE),
        (Some(_), None) => None,
    };
    Ok(TableRow {
        lambda: row.lambda,
        z_squared: s.z_squared,
        e_over_hw: s.e_over_hw,
        e_oracle,
        published_z_squared: row.z_squared,
        published_e_over_hw: row.e_method,
        published_e_exact: row.e_exact,
        published_e_reference_method: row.e_reference_method,
        z_squared_ok: (s.z_squared - row.z_squared).abs() <= z_tol,
        e_over_hw_ok: (s.e_over_hw - row.e_method).abs() <= ENERGY_TOLERANCE,
        oracle_ok,
        oracle_error,
    })
}

/// Recompute every published row next to the published values.
pub fn table(tol: f64) -> Result<Report> {
    let rows = PUBLISHED
        .par_iter()
        .map(|r| table_row(r, tol))
        .collect::<Result<Vec<_>>>()?;
    let all_ok = rows
        .iter()
        .all(|r| r.z_squared_ok && r.e_over_hw_ok && r.oracle_ok != Some(false));

    let mut t = Table::new(vec![
        "lambda",
        "z_squared",
        "e_over_hw",
        "e_oracle",
        "published_z_squared",
        "published_e_over_hw",
        "published_e_exact",
        "published_e_reference_method",
        "z_squared_ok",
        "e_over_hw_ok",
        "oracle_ok",
    ]);
    for r in &rows {
        t.push(vec![
            r.lambda.into(),
            r.z_squared.into(),
            r.e_over_hw.into(),
            r.e_oracle.into(),
            r.published_z_squared.into(),
            r.published_e_over_hw.into(),
            r.published_e_exact.into(),
            r.published_e_reference_method.into(),
            r.z_squared_ok.into(),
            r.e_over_hw_ok.into(),
            r.oracle_ok.into(),
        ]);
    }
    let report = TableReport {
        table_version: TABLE_VERSION,
        all_ok,
        rows,
    };
    Ok(Report::new(&report, t).with_status(if all_ok { 0 } else { 1 }))
}

#[derive(Debug, Serialize)]
struct FigureRow {
    lambda: f64,
    e_over_umin_method: Option<f64>,
    e_over_umin_oracle: Option<f64>,
    e_over_umin_reference_method: Option<f64>,
    note: Option<String>,
}

/// Couplings `from, from + step, ...` up to `to`, rounded to 12 digits.
pub fn sweep_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    check_lambda(from)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    if !(to >= from && to.is_finite()) {
        return Err(Error::InvalidParameter(format!("empty range [{from}, {to}]")));
    }
    let count = ((to - from) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| {
            let x = from + k as f64 * step;
            format!("{x:.12e}").parse().expect("formatted float parses")
        })
        .collect())
}

/// `E / U_min` of this method and the exact solver over a coupling sweep.
pub fn figure(from: f64, to: f64, step: f64, tol: f64) -> Result<Report> {
    let points = sweep_points(from, to, step)?;
    let limit = lambda_max();
    let (inside, beyond): (Vec<f64>, Vec<f64>) = points.into_iter().partition(|&l| l <= limit);

    let mut rows = inside
        .par_iter()
        .map(|&lambda| -> Result<FigureRow> {
            let s: ZSolution = solve_z(lambda)?;
            let umin = -1.0 / (16.0 * lambda);
            let oracle = exact::ground_state(lambda, tol).ok().map(|r| r.ground() / umin);
            let reference = PUBLISHED
                .iter()
                .find(|r| (r.lambda - lambda).abs() < 1e-12)
                .and_then(|r| r.e_reference_method)
                .map(|e| e / umin);
            Ok(FigureRow {
                lambda,
                e_over_umin_method: Some(s.e_over_umin),
                e_over_umin_oracle: oracle,
                e_over_umin_reference_method: reference,
                note: if oracle.is_none() {
                    Some("oracle did not converge".into())
                } else {
                    None
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(&first) = beyond.first() {
        rows.push(FigureRow {
            lambda: first,
            e_over_umin_method: None,
            e_over_umin_oracle: None,
            e_over_umin_reference_method: None,
            note: Some(format!(
                "warning: sweep truncated, {} point(s) above lambda'_max = {limit:.6} have no bound ground state",
                beyond.len()
            )),
        });
    }

    let mut t = Table::new(vec![
        "lambda",
        "e_over_umin_method",
        "e_over_umin_oracle",
        "e_over_umin_reference_method",
        "note",
    ]);
    for r in &rows {
        t.push(vec![
            r.lambda.into(),
            r.e_over_umin_method.into(),
            r.e_over_umin_oracle.into(),
            r.e_over_umin_reference_method.into(),
            r.note.clone().map_or(Cell::Null, Cell::Text),
        ]);
    }
    Ok(Report::new(&rows, t))
}

pub fn solve(lambda: f64) -> Result<Report> {
    check_lambda(lambda)?;
    let s = solve_z(lambda)?;
    let mut t = Table::new(vec![
        "lambda",
        "z",
        "z_squared",
        "e_over_hw",
        "e_over_umin",
        "eta_integral",
        "residual",
        "iterations",
    ]);
    t.push(vec![
        s.lambda.into(),
        s.z.into(),
        s.z_squared.into(),
        s.e_over_hw.into(),
        s.e_over_umin.into(),
        s.eta_integral.into(),
        s.residual.into(),
        s.iterations.into(),
    ]);
    Ok(Report::new(&s, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BackendChoice {
    Fd,
    Numerov,
    Both,
}

fn eigen_table(results: &[&EigenResult]) -> Table {
    let mut t = Table::new(vec![
        "lambda",
        "backend",
        "level",
        "energy",
        "parity",
        "convergence",
        "half_width",
        "nodes",
    ]);
    for r in results {
        for (i, e) in r.eigenvalues.iter().enumerate() {
            t.push(vec![
                r.lambda.into(),
                r.backend.as_str().into(),
                i.into(),
                (*e).into(),
                format!("{:?}", r.parities[i]).to_lowercase().into(),
                r.convergence[i].into(),
                r.half_width.into(),
                r.nodes.into(),
            ]);
        }
    }
    t
}

pub fn exact_levels(lambda: f64, k: usize, tol: f64, backend: BackendChoice) -> Result<Report> {
    let single = |backend: Backend| {
        exact::spectrum_with(
            lambda,
            SolveOptions {
                levels: k,
                tolerance: tol,
                backend,
                vectors: false,
            },
        )
    };
    match backend {
        BackendChoice::Fd => {
            let r = single(Backend::FiniteDifference)?;
            let t = eigen_table(&[&r]);
            Ok(Report::new(&r, t))
        }
        BackendChoice::Numerov => {
            let r = single(Backend::Numerov)?;
            let t = eigen_table(&[&r]);
            Ok(Report::new(&r, t))
        }
        BackendChoice::Both => {
            let cv = exact::cross_validate(lambda, k, tol)?;
            let t = eigen_table(&[&cv.finite_difference, &cv.numerov]);
            Ok(Report::new(&cv, t))
        }
    }
}

pub fn diagnose(lambda: f64, grid: usize) -> Result<Report> {
    check_lambda(lambda)?;
    let r = validity_report(lambda, grid)?;
    let mut t = Table::new(vec![
        "lambda",
        "z",
        "z_squared",
        "e_over_hw",
        "e_over_umin",
        "sup_xi_deviation",
        "max_ratio",
        "bottom_ratio",
        "flag",
        "intervals",
    ]);
    t.push(vec![
        r.lambda.into(),
        r.z.into(),
        r.z_squared.into(),
        r.e_over_hw.into(),
        r.e_over_umin.into(),
        r.sup_xi_deviation.into(),
        r.max_ratio.into(),
        r.bottom_ratio.into(),
        r.flag.as_str().into(),
        r.intervals.into(),
    ]);
    Ok(Report::new(&r, t))
}

#[derive(Debug, Serialize)]
struct WavefunctionReport {
    lambda: f64,
    e_over_hw: f64,
    x1: f64,
    x2: f64,
    normalized: bool,
    samples: Vec<millergood::miller_good::WavefunctionSample>,
}

/// Zero-order ground-state amplitude across the right-hand well.
pub fn wavefunction_samples(lambda: f64, points: usize, normalize: bool) -> Result<Report> {
    check_lambda(lambda)?;
    if points < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 grid points, got {points}")));
    }
    let s = solve_z(lambda)?;
    let v = Potential1D::quartic(OscillatorParams::natural(lambda)?);
    let aux = AuxiliaryProblem::ground();
    let table = mapping_s0(&v, s.e_over_hw, &aux, WellSelect::Right, points.max(1025))?;
    let (x1, x2) = (table.boundary.x1, table.boundary.x2);
    let grid: Vec<f64> = (0..points)
        .map(|k| if k + 1 == points { x2 } else { x1 + (x2 - x1) * k as f64 / (points - 1) as f64 })
        .collect();
    let mut samples = wavefunction(&v, s.e_over_hw, &aux, &table, &grid)?;
    if normalize {
        normalize_trapezoid(&mut samples);
    }
    let mut t = Table::new(vec!["x", "psi", "valid"]);
    for p in &samples {
        t.push(vec![p.x.into(), p.psi.into(), p.valid.into()]);
    }
    let report = WavefunctionReport {
        lambda,
        e_over_hw: s.e_over_hw,
        x1,
        x2,
        normalized: normalize,
        samples,
    };
    Ok(Report::new(&report, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points_cover_the_range() {
        let p = sweep_points(0.01, 0.1, 0.01).unwrap();
        assert_eq!(p.len(), 10);
        assert_eq!(p[2], 0.03);
        assert_eq!(p[9], 0.1);
        assert_eq!(sweep_points(0.02, 0.03, 0.5).unwrap(), vec![0.02]);
        assert!(sweep_points(0.02, 0.01, 0.01).is_err());
        assert!(sweep_points(0.02, 0.03, 0.0).is_err());
        assert!(sweep_points(-0.02, 0.03, 0.01).is_err());
    }
}
