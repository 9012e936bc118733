//! Seed-split random streams.
//!
//! Every random quantity is a pure function of `(seed, domain, index)`. The
//! generator is ChaCha8 keyed by `seed` and `domain`; `index` selects the
//! ChaCha stream. Two draws with different `(domain, index)` never share
//! keystream, so results do not depend on evaluation order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), key = seed || domain, stream = sample index";

/// Independent families of streams derived from one user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Domain {
    MeasureSamples = 1,
    Probes = 2,
    ProbeResample = 3,
    PhiOracle = 4,
    CoverCheck = 5,
}

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, domain: Domain, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform draw in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform(rng: &mut StreamRng) -> f64 {
    rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_stream() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, Domain::Probes, 3).random()).collect();
        let mut r = stream(7, Domain::Probes, 3);
        let first: u64 = r.random();
        assert!(a.iter().all(|&x| x == first));
    }

    #[test]
    fn domains_and_indices_differ() {
        let x: u64 = stream(7, Domain::Probes, 3).random();
        let y: u64 = stream(7, Domain::Probes, 4).random();
        let z: u64 = stream(7, Domain::MeasureSamples, 3).random();
        let w: u64 = stream(8, Domain::Probes, 3).random();
        assert_ne!(x, y);
        assert_ne!(x, z);
        assert_ne!(x, w);
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = stream(1, Domain::PhiOracle, 0);
        for _ in 0..1000 {
            let u = uniform(&mut r);
            assert!((0.0..1.0).contains(&u));
        }
    }
}
