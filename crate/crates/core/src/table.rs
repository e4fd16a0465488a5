//! Strictly monotone lookup tables `α ↦ statistic(α)` with clamped
//! piecewise-linear inversion.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        }
    }
}

/// Result of inverting a table at one statistic value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub alpha: f64,
    /// The value fell outside the tabulated range and `alpha` is an endpoint.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    alphas: Vec<f64>,
    values: Vec<f64>,
    direction: Direction,
}

impl MonotoneTable {
    /// Fails with [`Error::NonMonotone`] at the first α where the values stop
    /// being strictly monotone in the direction set by the first two points.
    pub fn new(alphas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if alphas.len() != values.len() || alphas.len() < 2 {
            return Err(Error::param(
                "grid",
                alphas.len() as f64,
                "needs at least two (alpha, value) pairs",
            ));
        }
        if let Some(w) = alphas.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::param("alpha", w[1], "grid must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::param("value", *v, "table values must be finite"));
        }
        let direction = if values[1] > values[0] {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        for i in 1..values.len() {
            let ok = match direction {
                Direction::Increasing => values[i] > values[i - 1],
                Direction::Decreasing => values[i] < values[i - 1],
            };
            if !ok {
                return Err(Error::NonMonotone { alpha: alphas[i] });
            }
        }
        Ok(Self {
            alphas,
            values,
            direction,
        })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        (self.alphas[0], self.alphas[self.alphas.len() - 1])
    }

    /// Linear interpolation of the statistic at `alpha` (clamped to range).
    pub fn value_at(&self, alpha: f64) -> f64 {
        let n = self.alphas.len();
        let i = self.alphas.partition_point(|&a| a <= alpha).clamp(1, n - 1);
        let (a0, a1) = (self.alphas[i - 1], self.alphas[i]);
        let t = ((alpha - a0) / (a1 - a0)).clamp(0.0, 1.0);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }

    /// α whose tabulated statistic equals `value`.
    pub fn invert(&self, value: f64) -> Inversion {
        let n = self.values.len();
        // orient so that `key` increases along the grid
        let sign = match self.direction {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        };
        let key = sign * value;
        let first = sign * self.values[0];
        let last = sign * self.values[n - 1];
        if !(key > first) {
            return Inversion {
                alpha: self.alphas[0],
                clamped: key < first || value.is_nan(),
            };
        }
        if key >= last {
            return Inversion {
                alpha: self.alphas[n - 1],
                clamped: key > last,
            };
        }
        // first index whose oriented value exceeds key; 1 <= i <= n-1
        let i = self.values.partition_point(|&v| sign * v <= key);
        let (v0, v1) = (sign * self.values[i - 1], sign * self.values[i]);
        let (a0, a1) = (self.alphas[i - 1], self.alphas[i]);
        let t = (key - v0) / (v1 - v0);
        Inversion {
            alpha: a0 + t * (a1 - a0),
            clamped: false,
        }
    }
}

/// Grid from `lo` to `hi` with spacing at most `step`.
///
/// When `1/step` is an integer and both ends sit on the lattice, nodes are
/// formed as `k / (1/step)` so that values such as 1.5 are exact.
pub fn alpha_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::param("step", step, "must be positive"));
    }
    if !(lo < hi) {
        return Err(Error::param("alpha_lo", lo, "must be below alpha_hi"));
    }
    let inv = math::round(1.0 / step);
    let k_lo = math::round(lo * inv);
    let k_hi = math::round(hi * inv);
    let on_lattice = math::abs(inv * step - 1.0) < 1e-12
        && math::abs(lo * inv - k_lo) < 1e-9
        && math::abs(hi * inv - k_hi) < 1e-9;
    if on_lattice {
        let n = (k_hi - k_lo) as usize;
        return Ok((0..=n).map(|i| (k_lo + i as f64) / inv).collect());
    }
    let n = math::ceil((hi - lo) / step - 1e-9) as usize;
    Ok((0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn decreasing() -> MonotoneTable {
        MonotoneTable::new(vec![1.0, 1.5, 2.0], vec![9.0, 5.0, 4.0]).unwrap()
    }

    #[test]
    fn grid_points_round_trip() {
        let t = decreasing();
        assert_eq!(t.direction(), Direction::Decreasing);
        for (a, v) in t.alphas().iter().zip(t.values()) {
            assert_eq!(t.invert(*v), Inversion { alpha: *a, clamped: false });
        }
    }

    #[test]
    fn interpolates_and_clamps() {
        let t = decreasing();
        assert_eq!(t.invert(7.0).alpha, 1.25);
        assert_eq!(t.invert(3.0), Inversion { alpha: 2.0, clamped: true });
        assert_eq!(t.invert(10.0), Inversion { alpha: 1.0, clamped: true });
        let inc = MonotoneTable::new(vec![1.0, 2.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(inc.invert(0.25).alpha, 1.25);
        assert!(inc.invert(2.0).clamped);
    }

    #[test]
    fn rejects_non_monotone() {
        let err = MonotoneTable::new(vec![1.0, 1.5, 2.0], vec![3.0, 2.0, 2.5]).unwrap_err();
        assert_eq!(err, Error::NonMonotone { alpha: 2.0 });
    }

    #[test]
    fn lattice_grid_is_exact() {
        let g = alpha_grid(0.6, 2.0, 0.0025).unwrap();
        assert_eq!(g.len(), 561);
        assert!(g.contains(&1.5));
        assert_eq!(*g.last().unwrap(), 2.0);
        let g = alpha_grid(1.0, 2.0, 0.3).unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.windows(2).all(|w| w[1] - w[0] <= 0.3));
    }
}
