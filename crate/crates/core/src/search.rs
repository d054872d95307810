//! Scalar root finding and derivative-free maximization.

use crate::error::{Error, Result};

/// Argument tolerance for [`bisect`].
pub const BISECTION_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in
/// sign (or one of them vanish).
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (a, b) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::BracketFailure { lo: a, hi: b });
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOL {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    // the endpoints can beat the interior for monotone f
    [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}

/// Visits every point of the lattice `{k / divisions : Σk = divisions}` on the
/// probability simplex with `dim` atoms, in lexicographic order of `k`.
pub fn for_each_simplex_point(dim: usize, divisions: usize, mut visit: impl FnMut(&[f64])) {
    assert!(dim >= 1);
    let scale = divisions as f64;
    let mut counts = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    fn rec(
        i: usize,
        left: usize,
        counts: &mut [usize],
        point: &mut [f64],
        scale: f64,
        visit: &mut dyn FnMut(&[f64]),
    ) {
        let last = counts.len() - 1;
        if i == last {
            counts[i] = left;
            point[i] = left as f64 / scale;
            visit(point);
            return;
        }
        for k in 0..=left {
            counts[i] = k;
            point[i] = k as f64 / scale;
            rec(i + 1, left - k, counts, point, scale, visit);
        }
    }
    if divisions == 0 {
        point[dim - 1] = 1.0;
        visit(&point);
        return;
    }
    rec(0, divisions, &mut counts, &mut point, scale, &mut visit);
}

/// Number of points [`for_each_simplex_point`] visits: `C(divisions + dim - 1, dim - 1)`.
pub fn simplex_lattice_size(dim: usize, divisions: usize) -> u128 {
    let k = (dim - 1) as u128;
    let n = divisions as u128 + k;
    (1..=k).fold(1u128, |acc, i| acc * (n - k + i) / i)
}
