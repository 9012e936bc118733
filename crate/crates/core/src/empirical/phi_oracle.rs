use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{ProbVector, Symbol};
use crate::par;
use crate::rng::{self, Domain};

/// Longest symbol stream read for one sample.
pub const STREAM_CAP: u64 = 1_000_000;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiOracleEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    /// Streams that hit `STREAM_CAP` without a `3`.
    pub truncated: usize,
    /// `(1 - p3)^STREAM_CAP`
    pub truncation_probability: f64,
}

/// `ln(c / (T - 1))` for the sample, where `T` is the position of the first
/// `3` and `c` counts the first symbol among the preceding positions.
fn one_sample(probs: &ProbVector, seed: u64, index: usize) -> (f64, bool) {
    let mut rng = rng::stream(seed, Domain::PhiOracle, index as u64);
    let mut first = None;
    let mut same = 0u64;
    let mut len = 0u64;
    while len < STREAM_CAP {
        let s = probs.symbol_for(rng::uniform(&mut rng));
        if s == Symbol::Three {
            if len == 0 {
                return (0.0, false);
            }
            return ((same as f64 / len as f64).ln(), false);
        }
        len += 1;
        match first {
            None => {
                first = Some(s);
                same = 1;
            }
            Some(f) if f == s => same += 1,
            _ => {}
        }
    }
    ((same as f64 / len as f64).ln(), true)
}

#[derive(Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
    truncated: usize,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
            truncated: self.truncated + o.truncated,
        }
    }
}

/// Monte Carlo estimate of `Phi` as the mean of `ln mu_i([i_1])` over
/// Bernoulli sequences `i`.
pub fn phi_oracle(probs: &ProbVector, samples: usize, seed: u64) -> Result<PhiOracleEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let parts = par::map_indexed(chunks, |c| {
        let mut acc = Moments {
            n: 0.0,
            mean: 0.0,
            m2: 0.0,
            truncated: 0,
        };
        for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
            let (v, cut) = one_sample(probs, seed, i);
            acc.n += 1.0;
            let d = v - acc.mean;
            acc.mean += d / acc.n;
            acc.m2 += d * (v - acc.mean);
            acc.truncated += cut as usize;
        }
        acc
    });
    let total = parts.into_iter().reduce(Moments::merge).expect("at least one chunk");
    let var = if samples > 1 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(PhiOracleEstimate {
        estimate: total.mean,
        stderr: (var / total.n).sqrt(),
        samples,
        seed,
        truncated: total.truncated,
        truncation_probability: (STREAM_CAP as f64 * (-probs.p3()).ln_1p()).exp(),
    })
}
