//! The entropy correction
//!
//! ```text
//! Phi(p1, p2, p3) = sum_{k>=1} sum_{m=1}^{k} C(k-1, m-1) p3 log(m/k) (p1^m p2^(k-m) + p1^(k-m) p2^m)
//! ```
//!
//! truncated at `k <= K` with a certified tail bound. Since the inner weights
//! sum to `p3 q^k` with `q = p1 + p2` and `|log(m/k)| <= log k <= k`, the tail
//! past `K` is at most `p3 q^(K+1) ((K+1)(1-q) + q) / (1-q)^2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::ProbVector;

pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on the truncation index.
pub const MAX_TERMS: u64 = 1_000_000;
/// Above this `k` binomial weights are evaluated in log space.
pub const DIRECT_WEIGHT_MAX_K: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiSeries {
    pub phi: f64,
    /// Certified bound on `|Phi - phi|`.
    pub bound: f64,
    pub terms_used: usize,
    /// `sum_{k<=K} sum_m C(k-1,m-1) p3 (p1^m p2^(k-m) + p1^(k-m) p2^m)`.
    pub weight_sum: f64,
}

/// Tail bound after truncating at `k <= terms`.
pub fn tail_bound(probs: &ProbVector, terms: u64) -> f64 {
    let p3 = probs.p3();
    let q = probs.p1() + probs.p2();
    let one_minus_q = p3;
    let j = (terms + 1) as f64;
    let log_q = (-p3).ln_1p();
    p3 * (j * log_q).exp() * (j * one_minus_q + q) / (one_minus_q * one_minus_q)
}

/// Smallest `K >= 1` with `tail_bound(K) <= tol`.
pub fn required_terms(probs: &ProbVector, tol: f64) -> u64 {
    // The tail of a positive series is decreasing in K: double, then bisect.
    let mut hi = 1u64;
    while tail_bound(probs, hi) > tol {
        if hi >= u64::MAX / 4 {
            return u64::MAX;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return hi;
    }
    // invariant: tail(lo) > tol >= tail(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(probs, mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `(sum_m C(k-1,m-1) p3 log(m/k) (..), sum_m C(k-1,m-1) p3 (..))` for one `k`.
pub fn phi_term(probs: &ProbVector, k: usize) -> (f64, f64) {
    assert!(k >= 1);
    let (p1, p2, p3) = (probs.p1(), probs.p2(), probs.p3());
    let mut value = 0.0;
    let mut weight = 0.0;
    if k <= DIRECT_WEIGHT_MAX_K {
        for m in 1..=k {
            let c = binomial_f64(k - 1, m - 1);
            let a = p1.powi(m as i32) * p2.powi((k - m) as i32);
            let b = p1.powi((k - m) as i32) * p2.powi(m as i32);
            let w = c * p3 * (a + b);
            weight += w;
            value += w * (m as f64 / k as f64).ln();
        }
    } else {
        let (l1, l2) = (p1.ln(), p2.ln());
        for m in 1..=k {
            let lc = ln_binomial(k - 1, m - 1);
            let a = (lc + (m as f64 * l1 + (k - m) as f64 * l2)).exp();
            let b = (lc + ((k - m) as f64 * l1 + m as f64 * l2)).exp();
            let w = p3 * (a + b);
            weight += w;
            value += w * (m as f64 / k as f64).ln();
        }
    }
    (value, weight)
}

/// Partial sums over `k <= terms`.
pub fn phi_truncated(probs: &ProbVector, terms: usize) -> (f64, f64) {
    (1..=terms).fold((0.0, 0.0), |(v, w), k| {
        let (dv, dw) = phi_term(probs, k);
        (v + dv, w + dw)
    })
}

pub fn phi_series(probs: &ProbVector, tol: f64) -> Result<PhiSeries> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let k = required_terms(probs, tol);
    if k > MAX_TERMS {
        return Err(Error::ToleranceUnreachable {
            required: k,
            cap: MAX_TERMS,
        });
    }
    let terms = k as usize;
    let (phi, weight_sum) = phi_truncated(probs, terms);
    Ok(PhiSeries {
        phi,
        bound: tail_bound(probs, k),
        terms_used: terms,
        weight_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(a: f64, b: f64, c: f64) -> ProbVector {
        ProbVector::new(a, b, c).unwrap()
    }

    #[test]
    fn uniform_matches_high_precision_reference() {
        // 50-digit mpmath evaluation of the full series.
        let s = phi_series(&ProbVector::uniform(), 1e-12).unwrap();
        assert!((s.phi - (-0.213_848_472_989_677)).abs() < 1e-12);
        let s = phi_series(&pv(0.2, 0.3, 0.5), 1e-12).unwrap();
        assert!((s.phi - (-0.104_401_090_513_902)).abs() < 1e-12);
        let s = phi_series(&pv(0.5, 0.25, 0.25), 1e-12).unwrap();
        assert!((s.phi - (-0.257_991_465_590_11)).abs() < 1e-12);
    }

    #[test]
    fn bound_is_within_tolerance_and_minimal() {
        let p = pv(0.2, 0.3, 0.5);
        let s = phi_series(&p, 1e-10).unwrap();
        assert!(s.bound <= 1e-10);
        assert!(tail_bound(&p, s.terms_used as u64 - 1) > 1e-10);
    }

    #[test]
    fn tail_bound_matches_direct_sum() {
        // sum_{k>K} k q^k summed directly.
        let p = pv(0.3, 0.4, 0.3);
        let q: f64 = 0.7;
        for kk in [1u64, 5, 20] {
            let direct: f64 = ((kk + 1)..2000).map(|k| k as f64 * q.powi(k as i32)).sum::<f64>() * 0.3;
            let closed = tail_bound(&p, kk);
            assert!((direct - closed).abs() < 1e-12 * closed.max(1.0), "K = {kk}");
        }
    }

    #[test]
    fn weights_normalize_to_geometric_sum() {
        for p in [pv(0.2, 0.3, 0.5), ProbVector::uniform(), pv(0.45, 0.45, 0.1)] {
            for terms in [1usize, 10, 59, 60, 61, 150] {
                let (_, w) = phi_truncated(&p, terms);
                let q = p.p1() + p.p2();
                let exact = p.p3() * q * (1.0 - q.powi(terms as i32)) / (1.0 - q);
                assert!((w - exact).abs() < 1e-12, "terms = {terms}");
            }
        }
    }

    #[test]
    fn swap_symmetry_is_exact() {
        for (a, b, c) in [(0.2, 0.3, 0.5), (0.01, 0.6, 0.39), (0.45, 0.45, 0.1)] {
            let s = phi_series(&pv(a, b, c), 1e-10).unwrap();
            let t = phi_series(&pv(b, a, c), 1e-10).unwrap();
            assert_eq!(s.phi.to_bits(), t.phi.to_bits());
        }
    }

    #[test]
    fn vanishes_when_p1_vanishes() {
        let s = phi_series(&pv(1e-300, 0.5, 0.5), 1e-10).unwrap();
        assert!(s.phi.abs() < 1e-10);
        let s = phi_series(&pv(1e-8, 0.5 - 0.5e-8, 0.5 - 0.5e-8), 1e-10).unwrap();
        assert!(s.phi.abs() < 1e-6);
        assert!(s.phi < 0.0);
    }

    #[test]
    fn log_space_and_direct_agree_at_the_switch() {
        let p = pv(0.3, 0.5, 0.2);
        let k = DIRECT_WEIGHT_MAX_K + 1;
        let (_, w) = phi_term(&p, k);
        let exact = 0.2 * 0.8f64.powi(k as i32);
        assert!((w - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn unreachable_tolerance() {
        let p = pv(0.5, 0.5 - 1e-7, 1e-7);
        assert!(matches!(
            phi_series(&p, 1e-10),
            Err(Error::ToleranceUnreachable { .. })
        ));
        assert!(phi_series(&ProbVector::uniform(), 0.0).is_err());
    }
}
