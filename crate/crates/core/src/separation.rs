//! Forward separation of `S1^m(R)` and `S2^n(R)`, where `R = S3(Lambda)`,
//! decided with certified interval covers; the ratio bands `D_{m,n}` and
//! structural checks on the first-level decomposition of the attractor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{self, AffineEnclosure, IfsParams, Symbol, Word};
use crate::interval::Interval;
use crate::par;
use crate::rng::{self, Domain};

/// Lower end of the enclosure `R ⊆ [8/9, 1]` valid for `gamma < 1/9`.
const BAND_LO: f64 = 8.0 / 9.0;
const BAND_HI: f64 = 9.0 / 8.0;

/// Relative log tolerance per unit exponent for `a^m = b^n`.
pub const COINCIDENCE_TOL: f64 = 1e-14;
/// Upper limit on live cover pieces across one pair.
pub const MAX_COVER_PIECES: u64 = 10_000_000;
/// Upper limit on the exponent bounds `candidate_pairs` may need.
pub const MAX_EXPONENT_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Separated,
    Intersecting,
    Inconclusive,
}

impl Status {
    fn rank(self) -> u8 {
        match self {
            Status::Separated => 0,
            Status::Inconclusive => 1,
            Status::Intersecting => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Separated => "separated",
            Status::Intersecting => "intersecting",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Pairs `(m, n)` whose ratio `a^m / b^n` can fall in `[8/9, 9/8]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidatePairs {
    /// Sorted by `(m, n)`.
    pub pairs: Vec<(u64, u64)>,
    /// Every pair with `min(m, n) <= max_exponent` was examined.
    pub max_exponent: u64,
    /// Largest `m` that can pair with some `n <= max_exponent`.
    pub m_bound: u64,
    /// Largest `n` that can pair with some `m <= max_exponent`.
    pub n_bound: u64,
}

fn require_ninth(params: &IfsParams) -> Result<()> {
    if params.in_ninth_range() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "forward separation needs alpha, beta, gamma < 1/9 (got {}, {}, {})",
            params.alpha(),
            params.beta(),
            params.gamma()
        )))
    }
}

/// `ln(a^m / b^n)`.
fn log_ratio(params: &IfsParams, m: u64, n: u64) -> f64 {
    m as f64 * params.alpha().ln() - n as f64 * params.beta().ln()
}

fn in_band(params: &IfsParams, m: u64, n: u64) -> bool {
    // Widened by the coincidence tolerance so rounding never drops a pair.
    let slack = COINCIDENCE_TOL * m.max(n) as f64;
    let lr = log_ratio(params, m, n);
    lr >= BAND_LO.ln() - slack && lr <= BAND_HI.ln() + slack
}

/// For a fixed exponent `k` on one side with log-ratio magnitudes
/// `lk` (this side) and `lo` (other side), the integer range of the other
/// exponent that can land in the band, padded by one on each end.
fn other_range(k: u64, lk: f64, lo: f64) -> (u64, u64) {
    let w = BAND_HI.ln();
    let a = ((k as f64 * lk - w) / lo).floor() - 1.0;
    let b = ((k as f64 * lk + w) / lo).ceil() + 1.0;
    (a.max(1.0) as u64, b.max(1.0) as u64)
}

/// All pairs with `min(m, n) <= max_exponent` and `8/9 <= a^m / b^n <= 9/8`.
///
/// For a fixed `m` the admissible `n` satisfy
/// `|m ln a - n ln b| <= ln(9/8)`, an interval of length `2 ln(9/8) / |ln b|`,
/// and symmetrically for fixed `n`; these windows are scanned in full.
pub fn candidate_pairs(params: &IfsParams, max_exponent: u64) -> Result<CandidatePairs> {
    require_ninth(params)?;
    if max_exponent == 0 {
        return Err(Error::InvalidArgument("max_exponent must be >= 1".into()));
    }
    let la = -params.alpha().ln();
    let lb = -params.beta().ln();
    let mut pairs = Vec::new();
    let mut m_bound = 0;
    let mut n_bound = 0;
    for k in 1..=max_exponent {
        let (n_lo, n_hi) = other_range(k, la, lb);
        let (m_lo, m_hi) = other_range(k, lb, la);
        n_bound = n_bound.max(n_hi);
        m_bound = m_bound.max(m_hi);
        if n_hi > MAX_EXPONENT_BOUND || m_hi > MAX_EXPONENT_BOUND {
            return Err(Error::ExhaustivenessUncertifiable {
                required: n_hi.max(m_hi),
                cap: MAX_EXPONENT_BOUND,
            });
        }
        for n in n_lo..=n_hi {
            if in_band(params, k, n) {
                pairs.push((k, n));
            }
        }
        for m in m_lo..=m_hi {
            if in_band(params, m, k) {
                pairs.push((m, k));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(CandidatePairs {
        pairs,
        max_exponent,
        m_bound,
        n_bound,
    })
}

/// `S1^m` and `S2^n` agree as maps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub m: u64,
    pub n: u64,
    pub u: Word,
    pub v: Word,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverPiece {
    pub word: Word,
    pub interval: Interval,
}

/// Disjoint certified covers of `S1^m(R)` and `S2^n(R)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCover {
    pub m: u64,
    pub n: u64,
    pub side1: Vec<CoverPiece>,
    pub side2: Vec<CoverPiece>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOutcome {
    pub m: u64,
    pub n: u64,
    pub status: Status,
    /// Refinement level at which the pair was decided.
    pub depth_used: usize,
    /// Cover pieces still overlapping when refinement stopped.
    pub unresolved_pieces: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationVerdict {
    pub status: Status,
    pub depth_used: usize,
    pub witness: Option<Witness>,
    pub offending_pair: Option<(u64, u64)>,
    pub checked_pairs: Vec<(u64, u64)>,
    pub candidates: CandidatePairs,
    pub pairs: Vec<PairOutcome>,
    /// Present for a separated verdict; one entry per checked pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<PairCover>>,
}

#[derive(Clone)]
struct Piece {
    enc: AffineEnclosure,
    hull: Interval,
    word: Vec<Symbol>,
}

impl Piece {
    fn root(params: &IfsParams, s: Symbol, k: u64) -> Piece {
        let mut word = vec![s; k as usize];
        word.push(Symbol::Three);
        let enc = AffineEnclosure::of_word(params, &Word::from_symbols(word.clone()));
        Piece {
            hull: enc.hull(),
            enc,
            word,
        }
    }

    fn child(&self, params: &IfsParams, s: Symbol) -> Piece {
        let enc = self.enc.then(params, s);
        let mut word = self.word.clone();
        word.push(s);
        Piece {
            hull: enc.hull(),
            enc,
            word,
        }
    }

    fn to_cover(&self) -> CoverPiece {
        CoverPiece {
            word: Word::from_symbols(self.word.clone()),
            interval: self.hull,
        }
    }
}

/// Sorted lower ends and running maximum of upper ends.
struct SweepIndex {
    lo: Vec<f64>,
    max_hi: Vec<f64>,
}

impl SweepIndex {
    fn new(pieces: &[Piece]) -> Self {
        let mut hulls: Vec<Interval> = pieces.iter().map(|p| p.hull).collect();
        hulls.sort_unstable_by(|a, b| a.lo().total_cmp(&b.lo()));
        let mut max_hi = Vec::with_capacity(hulls.len());
        let mut m = f64::NEG_INFINITY;
        for h in &hulls {
            m = m.max(h.hi());
            max_hi.push(m);
        }
        SweepIndex {
            lo: hulls.iter().map(|h| h.lo()).collect(),
            max_hi,
        }
    }

    /// Some indexed interval meets `x` (closed).
    fn meets(&self, x: &Interval) -> bool {
        let k = self.lo.partition_point(|&lo| lo <= x.hi());
        k > 0 && self.max_hi[k - 1] >= x.lo()
    }
}

struct PairRun {
    outcome: PairOutcome,
    cover: Option<PairCover>,
}

fn refine_pair(params: &IfsParams, m: u64, n: u64, refine_depth: usize) -> Result<PairRun> {
    let mut live1 = vec![Piece::root(params, Symbol::One, m)];
    let mut live2 = vec![Piece::root(params, Symbol::Two, n)];
    let mut done1 = Vec::new();
    let mut done2 = Vec::new();
    let mut level = 0;
    loop {
        let idx1 = SweepIndex::new(&live1);
        let idx2 = SweepIndex::new(&live2);
        let (keep1, free1): (Vec<Piece>, Vec<Piece>) =
            live1.into_iter().partition(|p| idx2.meets(&p.hull));
        let (keep2, free2): (Vec<Piece>, Vec<Piece>) =
            live2.into_iter().partition(|p| idx1.meets(&p.hull));
        done1.extend(free1);
        done2.extend(free2);
        if keep1.is_empty() || keep2.is_empty() {
            done1.extend(keep1);
            done2.extend(keep2);
            let cover = PairCover {
                m,
                n,
                side1: done1.iter().map(Piece::to_cover).collect(),
                side2: done2.iter().map(Piece::to_cover).collect(),
            };
            return Ok(PairRun {
                outcome: PairOutcome {
                    m,
                    n,
                    status: Status::Separated,
                    depth_used: level,
                    unresolved_pieces: 0,
                },
                cover: Some(cover),
            });
        }
        if level == refine_depth {
            return Ok(PairRun {
                outcome: PairOutcome {
                    m,
                    n,
                    status: Status::Inconclusive,
                    depth_used: level,
                    unresolved_pieces: keep1.len() + keep2.len(),
                },
                cover: None,
            });
        }
        let next = 3 * (keep1.len() + keep2.len()) as u64 + (done1.len() + done2.len()) as u64;
        if next > MAX_COVER_PIECES {
            return Err(Error::ResourceLimit {
                what: "cover pieces",
                needed: next,
                limit: MAX_COVER_PIECES,
            });
        }
        live1 = refine(params, &keep1);
        live2 = refine(params, &keep2);
        level += 1;
    }
}

fn refine(params: &IfsParams, pieces: &[Piece]) -> Vec<Piece> {
    pieces
        .iter()
        .flat_map(|p| Symbol::ALL.iter().map(move |&s| p.child(params, s)))
        .collect()
}

fn is_coincident(params: &IfsParams, m: u64, n: u64) -> bool {
    log_ratio(params, m, n).abs() <= COINCIDENCE_TOL * m.max(n) as f64
}

/// Three-valued forward-separation check over the candidate pairs with
/// `min(m, n) <= max_exponent`.
///
/// Pairs with `a^m = b^n` (to the coincidence tolerance) are intersecting;
/// the others are refined one symbol per level on both sides, up to
/// `refine_depth`, discarding pieces disjoint from every opposite piece.
pub fn check_forward_separation(
    params: &IfsParams,
    refine_depth: usize,
    max_exponent: u64,
) -> Result<SeparationVerdict> {
    let candidates = candidate_pairs(params, max_exponent)?;
    let runs = par::map_slice(&candidates.pairs, |&(m, n)| -> Result<PairRun> {
        if is_coincident(params, m, n) {
            return Ok(PairRun {
                outcome: PairOutcome {
                    m,
                    n,
                    status: Status::Intersecting,
                    depth_used: 0,
                    unresolved_pieces: 0,
                },
                cover: None,
            });
        }
        refine_pair(params, m, n, refine_depth)
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut status = Status::Separated;
    let mut worst: Option<&PairOutcome> = None;
    for r in &runs {
        if r.outcome.status.rank() > status.rank() {
            status = r.outcome.status;
            worst = Some(&r.outcome);
        }
    }
    let witness = worst.filter(|o| o.status == Status::Intersecting).map(|o| Witness {
        m: o.m,
        n: o.n,
        u: Word::repeat(Symbol::One, o.m as usize),
        v: Word::repeat(Symbol::Two, o.n as usize),
    });
    let offending_pair = worst.map(|o| (o.m, o.n));
    let depth_used = runs.iter().map(|r| r.outcome.depth_used).max().unwrap_or(0);
    let certificate = (status == Status::Separated)
        .then(|| runs.iter().filter_map(|r| r.cover.clone()).collect());
    Ok(SeparationVerdict {
        status,
        depth_used,
        witness,
        offending_pair,
        checked_pairs: candidates.pairs.clone(),
        pairs: runs.into_iter().map(|r| r.outcome).collect(),
        candidates,
        certificate,
    })
}

/// `S_w([0, 1])` recomputed from the innermost map outward and widened by a
/// few ulps.
fn verify_hull(params: &IfsParams, word: &Word) -> Interval {
    let mut acc = Interval::UNIT;
    for &s in word.symbols().iter().rev() {
        let scaled = acc.scale(params.ratio(s));
        acc = if s == Symbol::Three {
            scaled.add(&params.translation(s))
        } else {
            scaled
        };
    }
    let pad = 4.0 * f64::EPSILON * acc.hi().abs().max(f64::MIN_POSITIVE);
    Interval::new(acc.lo() - pad, acc.hi() + pad).expect("ordered hull")
}

/// The suffixes after `prefix` form a complete prefix code over `{1, 2, 3}`.
fn is_complete_code(prefix: &[Symbol], words: &[&Word]) -> std::result::Result<(), String> {
    let mut suffixes = Vec::with_capacity(words.len());
    for w in words {
        if !w.symbols().starts_with(prefix) {
            return Err(format!("word {w} lacks the expected prefix"));
        }
        suffixes.push(&w.symbols()[prefix.len()..]);
    }
    suffixes.sort_unstable();
    for pair in suffixes.windows(2) {
        if pair[1].starts_with(pair[0]) {
            return Err("cover words are not prefix-free".into());
        }
    }
    let depth = suffixes.iter().map(|s| s.len()).max().unwrap_or(0);
    if depth > 80 {
        return Err("cover words too deep to verify".into());
    }
    let kraft: u128 = suffixes.iter().map(|s| 3u128.pow((depth - s.len()) as u32)).sum();
    if kraft != 3u128.pow(depth as u32) {
        return Err("cover words do not exhaust the cylinder".into());
    }
    Ok(())
}

/// Independent re-check of a separation certificate: each side's words
/// partition its cylinder, and the recomputed hulls of the two sides are
/// pairwise disjoint.
pub fn verify_certificate(
    params: &IfsParams,
    certificate: &[PairCover],
) -> std::result::Result<(), String> {
    for cover in certificate {
        let mut p1 = vec![Symbol::One; cover.m as usize];
        p1.push(Symbol::Three);
        let mut p2 = vec![Symbol::Two; cover.n as usize];
        p2.push(Symbol::Three);
        let w1: Vec<&Word> = cover.side1.iter().map(|c| &c.word).collect();
        let w2: Vec<&Word> = cover.side2.iter().map(|c| &c.word).collect();
        is_complete_code(&p1, &w1)?;
        is_complete_code(&p2, &w2)?;

        let mut all: Vec<(Interval, u8)> = w1
            .iter()
            .map(|w| (verify_hull(params, w), 1))
            .chain(w2.iter().map(|w| (verify_hull(params, w), 2)))
            .collect();
        all.sort_by(|a, b| a.0.lo().total_cmp(&b.0.lo()));
        let mut reach = [f64::NEG_INFINITY; 2];
        for (h, side) in all {
            let other = if side == 1 { 1 } else { 0 };
            if h.lo() <= reach[other] {
                return Err(format!("pieces of pair ({}, {}) overlap near {}", cover.m, cover.n, h.lo()));
            }
            let own = (side - 1) as usize;
            reach[own] = reach[own].max(h.hi());
        }
    }
    Ok(())
}

/// Admissible `a` with `8/9 <= a^m / b^n <= 9/8`, clipped to `(0, 1/9)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBand {
    pub m: u64,
    pub n: u64,
    /// `[((8/9) b^n)^(1/m), ((9/8) b^n)^(1/m)]` before clipping.
    pub unclipped: Interval,
    /// `None` when the band misses `(0, 1/9)`.
    pub interval: Option<Interval>,
    /// `5 b^n`; informational only.
    pub lipschitz_constant: f64,
}

pub fn dmn_interval(beta: f64, gamma: f64, m: u64, n: u64) -> Result<RatioBand> {
    let ninth = 1.0 / 9.0;
    for (name, v) in [("beta", beta), ("gamma", gamma)] {
        if !(v > 0.0 && v < ninth) {
            return Err(Error::InvalidParams(format!("{name} = {v} must lie in (0, 1/9)")));
        }
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be >= 1".into()));
    }
    let bn = beta.powi(n as i32);
    let lo = (BAND_LO * bn).powf(1.0 / m as f64);
    let hi = (BAND_HI * bn).powf(1.0 / m as f64);
    let unclipped = Interval::new(lo, hi)?;
    let interval = (lo < ninth).then(|| Interval::new(lo, hi.min(ninth)).expect("ordered band"));
    Ok(RatioBand {
        m,
        n,
        unclipped,
        interval,
        lipschitz_constant: 5.0 * bn,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolicBound {
    /// `ln 3 / -ln a`
    pub value: f64,
    pub below_half: bool,
}

pub fn symbolic_dim_bound(a: f64) -> Result<SymbolicBound> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument(format!("a = {a} must lie in (0, 1)")));
    }
    Ok(SymbolicBound {
        value: 3f64.ln() / -a.ln(),
        below_half: a < 1.0 / 9.0,
    })
}

/// Hulls of `S_i^m S3([0, 1])` and `S_i^n S3([0, 1])` are disjoint.
///
/// Only needs `gamma < 1/2`, not the `1/9` bound.
pub fn hull_disjointness_lemma(params: &IfsParams, i: u8, m: u64, n: u64) -> Result<bool> {
    let s = Symbol::try_from(i)?;
    if s == Symbol::Three {
        return Err(Error::InvalidSymbol(i));
    }
    if m == n {
        return Err(Error::InvalidArgument("m and n must differ".into()));
    }
    let a = Piece::root(params, s, m).hull;
    let b = Piece::root(params, s, n).hull;
    Ok(a.is_disjoint(&b))
}

/// Fraction of sampled points `S_w(0)`, `w` uniform of length `depth` with at
/// least one `3`, that fall in some hull `S1^m S2^n S3([0, 1])` with
/// `m + n < depth`.
pub fn decomposition_cover_check(
    params: &IfsParams,
    depth: usize,
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be >= 1".into()));
    }
    let mut hulls = Vec::new();
    for k in 0..depth {
        for m in 0..=k {
            let mut w = vec![Symbol::One; m];
            w.extend(std::iter::repeat_n(Symbol::Two, k - m));
            w.push(Symbol::Three);
            hulls.push(ifs::cylinder_interval(params, &Word::from_symbols(w)));
        }
    }
    hulls.sort_unstable_by(|a, b| a.lo().total_cmp(&b.lo()));
    let probs = crate::ifs::ProbVector::uniform();
    let hits = par::map_indexed(sample_count, |i| {
        let mut rng = rng::stream(seed, Domain::CoverCheck, i as u64);
        let mut buf = vec![Symbol::One; depth];
        loop {
            ifs::draw_symbols(&probs, &mut rng, &mut buf);
            if buf.contains(&Symbol::Three) {
                break;
            }
        }
        let x = ifs::project_symbols(params, &buf);
        let k = hulls.partition_point(|h| h.lo() <= x);
        hulls[..k].iter().any(|h| h.contains(x))
    });
    let covered = hits.iter().filter(|&&h| h).count();
    Ok(covered as f64 / sample_count as f64)
}
