//! Outward Numerov shooting from `x = 0` for even potentials.

use super::Parity;

const RESCALE_ABOVE: f64 = 1e100;

/// Solution of `psi'' = 2 (v - E) psi` on `x_j = j h`, `j = 0..=m + 1`,
/// started with the given parity. `v` holds the samples `v(x_j)`.
pub(crate) fn shoot(v: &[f64], h: f64, energy: f64, parity: Parity) -> Vec<f64> {
    let n = v.len();
    let c = h * h / 12.0;
    let k2 = |j: usize| 2.0 * (energy - v[j]);
    let mut psi = vec![0.0; n];
    match parity {
        Parity::Even => {
            psi[0] = 1.0;
            psi[1] = (1.0 - 5.0 * c * k2(0)) / (1.0 + c * k2(1));
        }
        Parity::Odd => {
            psi[0] = 0.0;
            psi[1] = h;
        }
    }
    for j in 1..n - 1 {
        psi[j + 1] = (2.0 * psi[j] * (1.0 - 5.0 * c * k2(j)) - psi[j - 1] * (1.0 + c * k2(j - 1)))
            / (1.0 + c * k2(j + 1));
        if psi[j + 1].abs() > RESCALE_ABOVE {
            psi[..=j + 1].iter_mut().for_each(|p| *p /= RESCALE_ABOVE);
        }
    }
    psi
}

/// Sign changes of `psi` on `(0, x_max]`, the number of levels of this
/// parity below `energy`.
pub(crate) fn node_count(psi: &[f64]) -> usize {
    let mut count = 0;
    let mut last = psi[1];
    for &p in &psi[2..] {
        if p == 0.0 {
            continue;
        }
        if last != 0.0 && (p > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = p;
    }
    // a zero at the wall still counts as a level crossed
    if psi[psi.len() - 1] == 0.0 {
        count += 1;
    }
    count
}

/// The `index`-th level of the given parity, bisected on the node count.
pub(crate) fn level(v: &[f64], h: f64, parity: Parity, index: usize, width: f64) -> f64 {
    let mut lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let mut step = 1.0_f64;
    let mut hi = lo + step;
    while node_count(&shoot(v, h, hi, parity)) <= index {
        lo = hi;
        step *= 2.0;
        hi += step;
    }
    for _ in 0..2000 {
        let scale = lo.abs().max(hi.abs());
        if hi - lo <= width.max(4.0 * f64::EPSILON * scale) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if node_count(&shoot(v, h, mid, parity)) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
