//! One-dimensional derivative-free maximization.

use crate::math;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Non-finite values rank below every finite one. The interior optimum is
/// compared against both endpoints, so monotone objectives return the
/// better endpoint. Returns `(argmax, max)`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let score = |v: f64| if v.is_nan() { f64::NEG_INFINITY } else { v };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(f(c));
    let mut fd = score(f(d));
    while math::abs(b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(f(d));
        }
    }
    let (mut best_x, mut best_f) = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = score(f(x));
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f)
}
