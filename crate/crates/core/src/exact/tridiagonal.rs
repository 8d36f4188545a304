//! Tridiagonal eigenvalues by Sturm-sequence bisection and eigenvectors by
//! inverse iteration.

use crate::error::{Error, Result};

/// Real tridiagonal matrix with `lower[i] * upper[i] > 0`, so it is similar
/// to a symmetric one and has real simple eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `lower[i]` sits at `(i + 1, i)`.
    pub lower: Vec<f64>,
    /// `upper[i]` sits at `(i, i + 1)`.
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn symmetric(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::new(diag, off.clone(), off)
    }

    pub fn new(diag: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal sizes {n}/{}/{} do not fit",
                lower.len(),
                upper.len()
            )));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l * u > 0.0)) {
            return Err(Error::InvalidParameter(
                "off-diagonal products must be positive".into(),
            ));
        }
        Ok(Self { diag, lower, upper })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma` (negative LDL^T pivots).
    pub fn sturm_count(&self, sigma: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - sigma;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - sigma - self.lower[i - 1] * self.upper[i - 1] / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.lower[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.upper[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `index`-th eigenvalue (0-based, ascending), bisected to `width`.
    pub fn eigenvalue(&self, index: usize, width: f64) -> Result<f64> {
        if index >= self.len() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue {index} requested from a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..2000 {
            let scale = lo.abs().max(hi.abs());
            if hi - lo <= width.max(4.0 * f64::EPSILON * scale) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Solve `(T - sigma) x = rhs` by the Thomas algorithm.
    fn shifted_solve(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.diag.iter().fold(1.0_f64, |m, d| m.max(d.abs()));
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - sigma;
        for i in 0..n {
            if i > 0 {
                pivot = self.diag[i] - sigma - self.lower[i - 1] * c[i - 1];
            }
            if pivot.abs() < tiny {
                pivot = tiny.copysign(pivot);
            }
            c[i] = if i + 1 < n { self.upper[i] / pivot } else { 0.0 };
            d[i] = if i > 0 {
                (rhs[i] - self.lower[i - 1] * d[i - 1]) / pivot
            } else {
                rhs[0] / pivot
            };
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }

    /// Eigenvector for an eigenvalue already known to high accuracy.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let shift = eigenvalue + 1e-10 * eigenvalue.abs().max(1.0);
        let mut x = vec![1.0; self.len()];
        for _ in 0..4 {
            x = self.shifted_solve(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn hand_case() -> Tridiagonal {
        Tridiagonal::symmetric(vec![2.0, 2.0, 2.0], vec![-1.0, -1.0]).unwrap()
    }

    #[test]
    fn sturm_count_three_by_three() {
        // eigenvalues 2 - sqrt 2, 2, 2 + sqrt 2
        let t = hand_case();
        assert_eq!(t.sturm_count(0.0), 0);
        assert_eq!(t.sturm_count(0.5), 0);
        assert_eq!(t.sturm_count(1.0), 1);
        assert_eq!(t.sturm_count(2.5), 2);
        assert_eq!(t.sturm_count(3.5), 3);
    }

    #[test]
    fn bisection_three_by_three() {
        let t = hand_case();
        let expect = [2.0 - SQRT_2, 2.0, 2.0 + SQRT_2];
        for (i, e) in expect.iter().enumerate() {
            assert!((t.eigenvalue(i, 1e-14).unwrap() - e).abs() < 1e-13);
        }
        assert!(t.eigenvalue(3, 1e-14).is_err());
    }

    #[test]
    fn inverse_iteration_three_by_three() {
        let t = hand_case();
        let v = t.eigenvector(t.eigenvalue(0, 1e-15).unwrap());
        let expect = [0.5, SQRT_2 / 2.0, 0.5];
        let sign = v[1].signum();
        for (a, b) in v.iter().zip(expect) {
            assert!((sign * a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn nonsymmetric_similar_matrix() {
        // D^-1 A D keeps the spectrum
        let t = Tridiagonal::new(vec![2.0, 2.0, 2.0], vec![-0.5, -2.0], vec![-2.0, -0.5]).unwrap();
        assert!((t.eigenvalue(0, 1e-14).unwrap() - (2.0 - SQRT_2)).abs() < 1e-13);
        assert!(Tridiagonal::new(vec![1.0, 1.0], vec![1.0], vec![-1.0]).is_err());
        assert!(Tridiagonal::symmetric(vec![1.0, 1.0], vec![]).is_err());
    }
}
