//! Closed real intervals with directed rounding.
//!
//! Sums and products are computed in round-to-nearest together with their
//! exact rounding error (two-sum, fma). A bound moves one ulp outward only
//! when the rounded value lies on the wrong side of the exact result, so exact
//! operations stay exact and inexact ones give the tightest float enclosure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unconditional one-ulp widening, used when the error term is unreliable.
#[inline]
pub(crate) fn round_down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub(crate) fn round_up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error terms are exact only away from the subnormal range.
#[inline]
fn err_reliable(x: f64) -> bool {
    x.is_finite() && (x == 0.0 || x.abs() >= f64::MIN_POSITIVE * 4.0)
}

#[inline]
fn directed(v: f64, err: f64, up: bool) -> f64 {
    if !err_reliable(v) || !err.is_finite() {
        return if up { round_up(v) } else { round_down(v) };
    }
    match (up, err.partial_cmp(&0.0)) {
        (true, Some(std::cmp::Ordering::Greater)) => round_up(v),
        (false, Some(std::cmp::Ordering::Less)) => round_down(v),
        _ => v,
    }
}

/// Largest float `<= a + b`.
#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    directed(s, e, false)
}

/// Smallest float `>= a + b`.
#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    directed(s, e, true)
}

/// Largest float `<= a * b`.
#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p != 0.0 && !err_reliable(p) {
        return round_down(p);
    }
    directed(p, a.mul_add(b, -p), false)
}

/// Smallest float `>= a * b`.
#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p != 0.0 && !err_reliable(p) {
        return round_up(p);
    }
    directed(p, a.mul_add(b, -p), true)
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval holding exactly `x`.
    pub fn point(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        Self { lo: x, hi: x }
    }

    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    /// Enclosure of the exact real `1 - x`.
    pub fn one_minus(x: f64) -> Self {
        Self {
            lo: add_down(1.0, -x),
            hi: add_up(1.0, -x),
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    /// Product of two intervals that both lie in `[0, inf)`.
    pub fn mul_nonneg(&self, other: &Interval) -> Interval {
        debug_assert!(self.lo >= 0.0 && other.lo >= 0.0);
        Interval {
            lo: mul_down(self.lo, other.lo).max(0.0),
            hi: mul_up(self.hi, other.hi),
        }
    }

    /// `self * factor` for an exact non-negative `factor`.
    pub fn scale(&self, factor: f64) -> Interval {
        debug_assert!(factor >= 0.0);
        if factor == 0.0 {
            return Interval::point(0.0);
        }
        let mut lo = mul_down(self.lo, factor);
        if self.lo >= 0.0 {
            lo = lo.max(0.0);
        }
        Interval {
            lo,
            hi: mul_up(self.hi, factor),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Closed intervals share at least one point. Touching counts.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        !self.intersects(other)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
