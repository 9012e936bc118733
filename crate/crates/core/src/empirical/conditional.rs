use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{IfsParams, ProbVector};
use crate::interval::Interval;
use crate::separation::{self, Status};

use super::interval_mass::{interval_mass_by_first_symbol, IntervalMass};

/// Separation check run before the conditional bounds.
pub const SEPARATION_DEPTH: usize = 8;
pub const SEPARATION_MAX_EXPONENT: u64 = 20;
/// Ratio bounds are widened by this much to absorb rounding in the weight
/// sums; probabilities themselves are only normalized to 1e-12.
pub const RATIO_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalBounds {
    pub m: u64,
    pub n: u64,
    pub dyadic_level: u32,
    /// `a^m b^n`, the projection of `1^m 2^n 3 3 3 ...`.
    pub representative: f64,
    pub dyadic: Interval,
    /// Bounds on the share of `nu(Q)` carried by first symbols 1, 2, 3.
    pub ratios: [Interval; 3],
    /// `m/(m+n)`, `n/(m+n)`, `0`; or `0, 0, 1` when `m = n = 0`.
    pub expected: [f64; 3],
    pub masses: [IntervalMass; 3],
}

impl ConditionalBounds {
    pub fn ratio1(&self) -> Interval {
        self.ratios[0]
    }

    pub fn ratio2(&self) -> Interval {
        self.ratios[1]
    }
}

/// Closed dyadic interval `[k 2^-l, (k+1) 2^-l]` with `k = floor(x 2^l)`,
/// taking the last interval when `x = 1`.
pub fn dyadic_interval(x: f64, level: u32) -> Result<Interval> {
    if !(0.0..=1.0).contains(&x) || level > 1000 {
        return Err(Error::InvalidArgument(format!(
            "dyadic cell needs x in [0, 1] and level <= 1000 (x = {x}, level = {level})"
        )));
    }
    let scale = 2f64.powi(level as i32);
    let k = (x * scale).floor().min(scale - 1.0);
    Interval::new(k / scale, (k + 1.0) / scale)
}

/// Share of `nu(Q)` carried by each first symbol, where `Q` is the dyadic
/// cell of level `dyadic_level` around the projection of `1^m 2^n 3 3 3 ...`.
///
/// Needs a separated system (checked with `SEPARATION_DEPTH` and
/// `SEPARATION_MAX_EXPONENT`). Masses use cylinders of length `mass_depth`.
pub fn conditional_measure_check(
    params: &IfsParams,
    probs: &ProbVector,
    m: u64,
    n: u64,
    dyadic_level: u32,
    mass_depth: usize,
) -> Result<ConditionalBounds> {
    let verdict =
        separation::check_forward_separation(params, SEPARATION_DEPTH, SEPARATION_MAX_EXPONENT)?;
    if verdict.status != Status::Separated {
        return Err(Error::HypothesisViolated(format!(
            "conditional measures need a forward separated system; the check returned {}",
            verdict.status.as_str()
        )));
    }
    let representative = params.alpha().powi(m as i32) * params.beta().powi(n as i32);
    let dyadic = dyadic_interval(representative, dyadic_level)?;
    let masses = interval_mass_by_first_symbol(params, probs, &dyadic, mass_depth)?;

    let ratios = std::array::from_fn(|k| {
        let others_lo: f64 = (0..3).filter(|&j| j != k).map(|j| masses[j].lower).sum();
        let others_hi: f64 = (0..3).filter(|&j| j != k).map(|j| masses[j].upper).sum();
        let own = masses[k];
        let lo_den = own.lower + others_hi;
        let hi_den = own.upper + others_lo;
        let lo = if lo_den > 0.0 { own.lower / lo_den - RATIO_SLACK } else { 0.0 };
        let hi = if hi_den > 0.0 { own.upper / hi_den + RATIO_SLACK } else { 1.0 };
        let (lo, hi) = (lo.max(0.0), hi.min(1.0));
        Interval::new(lo.min(hi), hi).expect("ordered ratio bounds")
    });
    let expected = if m + n == 0 {
        [0.0, 0.0, 1.0]
    } else {
        let k = (m + n) as f64;
        [m as f64 / k, n as f64 / k, 0.0]
    };
    Ok(ConditionalBounds {
        m,
        n,
        dyadic_level,
        representative,
        dyadic,
        ratios,
        expected,
        masses,
    })
}
