use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid IFS parameters: {0}")]
    InvalidParams(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid symbol {0}: the alphabet is {{1, 2, 3}}")]
    InvalidSymbol(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("tolerance unreachable: {required} series terms needed, cap is {cap}")]
    ToleranceUnreachable { required: u64, cap: u64 },

    #[error("root bracketing failed on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root solver did not certify a root: {0}")]
    SolverFailure(String),

    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("exhaustiveness not certifiable: exponent bound {required} exceeds cap {cap}")]
    ExhaustivenessUncertifiable { required: u64, cap: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("insufficient samples: {fitted} of {probes} probes have two radii with at least {min_hits} hits, need {needed}")]
    InsufficientSamples {
        fitted: usize,
        probes: usize,
        min_hits: usize,
        needed: usize,
    },
}
