//! Finite support intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite open interval `(lower, upper)` with `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || lower >= upper {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Closed-interval membership; the measure-zero boundary is included.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Membership of the open interior.
    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    /// `count + 1` equally spaced points from `lower` to `upper` inclusive.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        let n = count.max(1);
        (0..=n)
            .map(|i| self.lower + self.width() * i as f64 / n as f64)
            .collect()
    }

    /// The affine map sending `self` onto `target`, as `(scale, shift)` with
    /// `y = scale * x + shift`.
    pub fn affine_to(&self, target: &Interval) -> (f64, f64) {
        let scale = target.width() / self.width();
        let shift = target.lower - scale * self.lower;
        (scale, shift)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}
