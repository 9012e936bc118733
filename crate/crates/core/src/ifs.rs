//! The three-map system `S1(x) = a x`, `S2(x) = b x`, `S3(x) = c x + 1 - c`,
//! symbolic words over `{1, 2, 3}`, certified cylinder hulls and sampling of
//! the self-similar measure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::rng::{self, Domain, StreamRng};

/// Tolerance on `p1 + p2 + p3 = 1`.
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    One = 1,
    Two = 2,
    Three = 3,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::One, Symbol::Two, Symbol::Three];

    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Symbol {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Symbol::One),
            2 => Ok(Symbol::Two),
            3 => Ok(Symbol::Three),
            other => Err(Error::InvalidSymbol(other)),
        }
    }
}

/// Contraction ratios of the three maps. The translation of `S3` is `1 - gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IfsParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    in_ninth_range: bool,
}

impl IfsParams {
    /// Requires `0 < alpha, beta, gamma < 1` and `max(alpha, beta) + gamma < 1`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must lie in (0, 1)"
                )));
            }
        }
        if alpha.max(beta) + gamma >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "max(alpha, beta) + gamma = {} must be < 1",
                alpha.max(beta) + gamma
            )));
        }
        let ninth = 1.0 / 9.0;
        Ok(Self {
            alpha,
            beta,
            gamma,
            in_ninth_range: alpha < ninth && beta < ninth && gamma < ninth,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// All three ratios are below `1/9`.
    pub fn in_ninth_range(&self) -> bool {
        self.in_ninth_range
    }

    pub fn ratio(&self, s: Symbol) -> f64 {
        match s {
            Symbol::One => self.alpha,
            Symbol::Two => self.beta,
            Symbol::Three => self.gamma,
        }
    }

    /// Enclosure of the translation part of `S_s`.
    pub fn translation(&self, s: Symbol) -> Interval {
        match s {
            Symbol::One | Symbol::Two => Interval::point(0.0),
            Symbol::Three => Interval::one_minus(self.gamma),
        }
    }

    fn translation_nearest(&self, s: Symbol) -> f64 {
        match s {
            Symbol::One | Symbol::Two => 0.0,
            Symbol::Three => 1.0 - self.gamma,
        }
    }

    pub fn max_ratio(&self) -> f64 {
        self.alpha.max(self.beta).max(self.gamma)
    }

    /// `S_s(x)` in round-to-nearest.
    pub fn apply(&self, s: Symbol, x: f64) -> f64 {
        match s {
            Symbol::One => self.alpha * x,
            Symbol::Two => self.beta * x,
            Symbol::Three => self.gamma * x + (1.0 - self.gamma),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbVector {
    p1: f64,
    p2: f64,
    p3: f64,
}

impl ProbVector {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("p3", p3)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidProbabilities(format!(
                    "probabilities must be strictly positive ({name} = {v})"
                )));
            }
        }
        let sum = p1 + p2 + p3;
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!(
                "probabilities must sum to 1 (sum = {sum})"
            )));
        }
        Ok(Self { p1, p2, p3 })
    }

    pub fn uniform() -> Self {
        let t = 1.0 / 3.0;
        Self { p1: t, p2: t, p3: t }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn get(&self, s: Symbol) -> f64 {
        match s {
            Symbol::One => self.p1,
            Symbol::Two => self.p2,
            Symbol::Three => self.p3,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    /// `(p2, p1, p3)`.
    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2,
            p2: self.p1,
            p3: self.p3,
        }
    }

    /// Inverse-CDF symbol for `u` in `[0, 1)`: 1 on `[0, p1)`, 2 on
    /// `[p1, p1 + p2)`, 3 otherwise.
    #[inline]
    pub fn symbol_for(&self, u: f64) -> Symbol {
        if u < self.p1 {
            Symbol::One
        } else if u < self.p1 + self.p2 {
            Symbol::Two
        } else {
            Symbol::Three
        }
    }
}

/// Finite word over `{1, 2, 3}`; the empty word is the identity map.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        symbols
            .iter()
            .map(|&s| Symbol::try_from(s))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    /// `s` repeated `k` times.
    pub fn repeat(s: Symbol, k: usize) -> Self {
        Word(vec![s; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    /// Concatenation `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self|_n`.
    pub fn truncate(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_u8())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|s| s.as_u8()))
    }
}

/// Certified enclosure of the affine map `S_w(x) = scale * x + offset`.
///
/// Extending on the right composes `S_w` with `S_s`, matching `S_{w*s}`. The
/// hull of every prefix is kept as a bound, so hulls of extensions nest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineEnclosure {
    pub scale: Interval,
    pub offset: Interval,
    bound: Interval,
}

impl AffineEnclosure {
    pub fn identity() -> Self {
        Self {
            scale: Interval::point(1.0),
            offset: Interval::point(0.0),
            bound: Interval::UNIT,
        }
    }

    pub fn then(&self, params: &IfsParams, s: Symbol) -> Self {
        let t = params.translation(s);
        let offset = if s == Symbol::Three {
            self.offset.add(&self.scale.mul_nonneg(&t))
        } else {
            self.offset
        };
        Self {
            scale: self.scale.scale(params.ratio(s)),
            offset,
            bound: self.hull(),
        }
    }

    pub fn of_word(params: &IfsParams, word: &Word) -> Self {
        word.symbols()
            .iter()
            .fold(Self::identity(), |acc, &s| acc.then(params, s))
    }

    /// Enclosure of `S_w([0, 1])`, clipped to the hull of the parent word.
    pub fn hull(&self) -> Interval {
        let raw = Interval::new(self.offset.lo(), self.offset.add(&self.scale).hi())
            .expect("affine hull has ordered endpoints");
        raw.intersection(&self.bound).unwrap_or(raw)
    }
}

/// `S_symbol(x)`.
pub fn apply_map(params: &IfsParams, symbol: u8, x: f64) -> Result<f64> {
    Ok(params.apply(Symbol::try_from(symbol)?, x))
}

/// Outward-rounded enclosure of `S_w([0, 1])`.
pub fn cylinder_interval(params: &IfsParams, word: &Word) -> Interval {
    AffineEnclosure::of_word(params, word).hull()
}

/// `S_{i1} o ... o S_{in}(0)` in round-to-nearest.
///
/// Any infinite extension of `word` projects within `max_ratio^n` of this.
pub fn project_prefix(params: &IfsParams, word: &Word) -> f64 {
    project_symbols(params, word.symbols())
}

pub(crate) fn project_symbols(params: &IfsParams, symbols: &[Symbol]) -> f64 {
    let mut scale = 1.0;
    let mut x = 0.0;
    for &s in symbols {
        if s == Symbol::Three {
            x += scale * params.translation_nearest(s);
        }
        scale *= params.ratio(s);
    }
    x
}

/// Smallest depth `n` with `max_ratio^n <= delta`.
pub fn depth_for_accuracy(params: &IfsParams, delta: f64) -> usize {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    (delta.ln() / params.max_ratio().ln()).ceil().max(1.0) as usize
}

pub(crate) fn draw_symbols(probs: &ProbVector, rng: &mut StreamRng, out: &mut [Symbol]) {
    for s in out.iter_mut() {
        *s = probs.symbol_for(rng::uniform(rng));
    }
}

/// Draw `count` approximate samples of the self-similar measure.
///
/// Sample `i` projects a Bernoulli word of length `depth` drawn from the
/// stream `(seed, MeasureSamples, i)`.
pub fn sample_measure(
    params: &IfsParams,
    probs: &ProbVector,
    depth: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    Ok(par::map_indexed(count, |i| {
        let mut rng = rng::stream(seed, Domain::MeasureSamples, i as u64);
        let mut buf = vec![Symbol::One; depth];
        draw_symbols(probs, &mut rng, &mut buf);
        project_symbols(params, &buf)
    }))
}
