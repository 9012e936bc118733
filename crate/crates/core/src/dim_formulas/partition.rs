//! Bernoulli measure of `H(m, n)`: sequences whose first `3` sits at position
//! `m + n + 1` after exactly `m` ones and `n` twos.

use serde::Serialize;

use crate::ifs::ProbVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionMeasure {
    /// `mu(H(m, n))`
    pub total: f64,
    /// `mu(H(m, n) & [1])`
    pub in_cyl1: f64,
    /// `mu(H(m, n) & [2])`
    pub in_cyl2: f64,
}

/// Mass of one word of `E(m, n)`: `p1^m p2^n p3`, multiplied in that order.
pub fn word_weight(probs: &ProbVector, m: usize, n: usize) -> f64 {
    let mut w = 1.0;
    for _ in 0..m {
        w *= probs.p1();
    }
    for _ in 0..n {
        w *= probs.p2();
    }
    w * probs.p3()
}

/// `C(n, k)` when it is exactly representable, `None` otherwise.
fn exact_binomial(n: usize, k: usize) -> Option<f64> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    (c <= 1u128 << 53).then_some(c as f64)
}

fn binomial_times(n: usize, k: usize, w: f64) -> f64 {
    match exact_binomial(n, k) {
        Some(c) => c * w,
        None => {
            let lc = libm::lgamma(n as f64 + 1.0)
                - libm::lgamma(k as f64 + 1.0)
                - libm::lgamma((n - k) as f64 + 1.0);
            (lc + w.ln()).exp()
        }
    }
}

/// `(m+n)!/(m! n!) w`, `(m+n-1)!/((m-1)! n!) w` and `(m+n-1)!/(m! (n-1)!) w`
/// with `w = p1^m p2^n p3`; the last two vanish when `m = 0` (resp. `n = 0`).
///
/// While the binomial coefficient is below `2^53` each value is one correctly
/// rounded product.
pub fn partition_measure(probs: &ProbVector, m: usize, n: usize) -> PartitionMeasure {
    let w = word_weight(probs, m, n);
    let k = m + n;
    PartitionMeasure {
        total: binomial_times(k, m, w),
        in_cyl1: if m == 0 { 0.0 } else { binomial_times(k - 1, m - 1, w) },
        in_cyl2: if n == 0 { 0.0 } else { binomial_times(k - 1, n - 1, w) },
    }
}
