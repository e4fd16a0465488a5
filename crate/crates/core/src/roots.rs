//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::math;

/// Root of an increasing function on `[lo, hi]`.
///
/// A few bisection steps shrink the bracket, then secant steps take over;
/// any secant iterate that leaves the bracket is replaced by a midpoint.
/// Stops when `|f(x)| <= tol` or the bracket collapses to machine precision.
pub fn bisect_secant<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    what: &'static str,
) -> Result<f64> {
    const BISECTIONS: usize = 6;
    const MAX_ITER: usize = 200;

    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(Error::Bracketing { what });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    for iter in 0..MAX_ITER {
        let x = if iter < BISECTIONS {
            0.5 * (lo + hi)
        } else {
            let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            let width = hi - lo;
            if secant > lo + 1e-3 * width && secant < hi - 1e-3 * width {
                secant
            } else {
                0.5 * (lo + hi)
            }
        };
        let fx = f(x);
        if math::abs(fx) <= tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if hi - lo <= 4.0 * f64::EPSILON * math::abs(hi).max(f64::MIN_POSITIVE) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = bisect_secant(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, "cube").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_bracket() {
        let err = bisect_secant(|x| x + 10.0, 0.0, 1.0, 1e-10, "shifted").unwrap_err();
        assert_eq!(err, Error::Bracketing { what: "shifted" });
    }
}
