use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{self, IfsParams, ProbVector, Symbol};
use crate::par;
use crate::rng::{self, Domain};

/// A `(probe, radius)` cell needs this many sample hits to enter a fit.
pub const MIN_CELL_HITS: usize = 10;
/// Radii must exceed `max_ratio^depth` by this factor.
pub const DEPTH_SAFETY: f64 = 10.0;
/// Leading probe symbols decoded from a stratified uniform.
const STRATIFIED_SYMBOLS: usize = 8;
const MAX_RESAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateConfig {
    pub probes: usize,
    pub samples: usize,
    /// Strictly decreasing.
    pub radii: Vec<f64>,
    pub depth: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDimEstimate {
    /// Mean over probes of the per-probe least-squares slope.
    pub slope: f64,
    pub intercept: f64,
    pub radii: Vec<f64>,
    /// Mean log mass per radius over the probes with a usable cell there.
    pub log_masses: Vec<Option<f64>>,
    /// Standard error of the mean slope.
    pub stderr: f64,
    pub sample_size: usize,
    pub seed: u64,
    pub depth: usize,
    pub probes: usize,
    pub probes_fitted: usize,
    /// Probes redrawn because they fell within the smallest radius of 0.
    pub resampled_probes: usize,
    pub discarded_cells: usize,
    pub probe_points: Vec<f64>,
    /// `None` for probes with fewer than two usable radii.
    pub probe_slopes: Vec<Option<f64>>,
}

/// `count` radii from `from` down to `to`, equally spaced in log.
pub fn geometric_radii(from: f64, to: f64, count: usize) -> Result<Vec<f64>> {
    if !(from > to && to > 0.0) || count < 2 {
        return Err(Error::InvalidArgument(
            "geometric radii need from > to > 0 and at least two points".into(),
        ));
    }
    let (a, b) = (from.ln(), to.ln());
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                from
            } else if i == count - 1 {
                to
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Smallest depth whose cylinders are `DEPTH_SAFETY * 1000` times finer than
/// the smallest radius.
pub fn default_depth(params: &IfsParams, radii: &[f64]) -> usize {
    let r_min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    ifs::depth_for_accuracy(params, (r_min / (DEPTH_SAFETY * 1000.0)).min(0.5))
}

fn validate(params: &IfsParams, cfg: &EstimateConfig) -> Result<()> {
    if cfg.probes < 2 {
        return Err(Error::InvalidArgument("probes must be >= 2".into()));
    }
    if cfg.samples < cfg.probes {
        return Err(Error::InvalidArgument("samples must be >= probes".into()));
    }
    if cfg.depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    if cfg.radii.len() < 2 {
        return Err(Error::InvalidArgument("need at least two radii".into()));
    }
    if cfg.radii.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidArgument("radii must be strictly decreasing".into()));
    }
    let floor = params.max_ratio().powi(cfg.depth as i32) * DEPTH_SAFETY;
    let r_min = *cfg.radii.last().expect("nonempty");
    if !(r_min > floor) || !(cfg.radii[0] < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "radii must lie in ({floor:e}, 1) for depth {}",
            cfg.depth
        )));
    }
    Ok(())
}

/// Probe `j` of `count`: the leading symbols come from the stratified uniform
/// `(j + U) / count` by inverse-CDF decoding, the rest are i.i.d.
fn draw_probe(
    params: &IfsParams,
    probs: &ProbVector,
    depth: usize,
    j: usize,
    count: usize,
    seed: u64,
    r_min: f64,
) -> Result<(f64, bool)> {
    let mut rng = rng::stream(seed, Domain::Probes, j as u64);
    let mut u = (j as f64 + rng::uniform(&mut rng)) / count as f64;
    let mut buf = vec![Symbol::One; depth];
    let lead = STRATIFIED_SYMBOLS.min(depth);
    for slot in buf.iter_mut().take(lead) {
        let s = probs.symbol_for(u);
        let below: f64 = Symbol::ALL[..s.index()].iter().map(|&t| probs.get(t)).sum();
        u = ((u - below) / probs.get(s)).clamp(0.0, 1.0f64.next_down());
        *slot = s;
    }
    ifs::draw_symbols(probs, &mut rng, &mut buf[lead..]);
    let x = ifs::project_symbols(params, &buf);
    if x > r_min {
        return Ok((x, false));
    }
    let mut rng = rng::stream(seed, Domain::ProbeResample, j as u64);
    for _ in 0..MAX_RESAMPLES {
        ifs::draw_symbols(probs, &mut rng, &mut buf);
        let x = ifs::project_symbols(params, &buf);
        if x > r_min {
            return Ok((x, true));
        }
    }
    Err(Error::ResourceLimit {
        what: "probe resamples",
        needed: MAX_RESAMPLES + 1,
        limit: MAX_RESAMPLES,
    })
}

/// Number of sorted values in `[x - r, x + r]`.
fn count_within(sorted: &[f64], x: f64, r: f64) -> usize {
    let lo = sorted.partition_point(|&v| v < x - r);
    let hi = sorted.partition_point(|&v| v <= x + r);
    hi - lo
}

/// Least-squares `(slope, intercept)` of `y` on `x`.
fn fit_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

struct ProbeFit {
    x: f64,
    resampled: bool,
    log_mass: Vec<Option<f64>>,
    fit: Option<(f64, f64)>,
}

/// Local dimension of the measure estimated from ball masses around
/// measure-distributed probe points.
///
/// Samples and probes come from independent seed-split streams. For each
/// probe the empirical log mass of `[x - r, x + r]` is regressed on `ln r`
/// over the radii with at least `MIN_CELL_HITS` hits; the result is the mean
/// of these per-probe slopes.
pub fn local_dimension_estimate(
    params: &IfsParams,
    probs: &ProbVector,
    cfg: &EstimateConfig,
) -> Result<LocalDimEstimate> {
    validate(params, cfg)?;
    let mut samples = ifs::sample_measure(params, probs, cfg.depth, cfg.samples, cfg.seed)?;
    par::sort_floats(&mut samples);
    let r_min = *cfg.radii.last().expect("validated");
    let n = cfg.samples as f64;

    let fits = par::map_indexed(cfg.probes, |j| -> Result<ProbeFit> {
        let (x, resampled) = draw_probe(params, probs, cfg.depth, j, cfg.probes, cfg.seed, r_min)?;
        let log_mass: Vec<Option<f64>> = cfg
            .radii
            .iter()
            .map(|&r| {
                let hits = count_within(&samples, x, r);
                (hits >= MIN_CELL_HITS).then(|| (hits as f64 / n).ln())
            })
            .collect();
        let pts: Vec<(f64, f64)> = cfg
            .radii
            .iter()
            .zip(&log_mass)
            .filter_map(|(&r, m)| m.map(|m| (r.ln(), m)))
            .collect();
        let fit = (pts.len() >= 2).then(|| fit_line(&pts));
        Ok(ProbeFit {
            x,
            resampled,
            log_mass,
            fit,
        })
    });
    let fits = fits.into_iter().collect::<Result<Vec<_>>>()?;

    let fitted: Vec<(f64, f64)> = fits.iter().filter_map(|f| f.fit).collect();
    if fitted.len() < 2 {
        return Err(Error::InsufficientSamples {
            fitted: fitted.len(),
            probes: cfg.probes,
            min_hits: MIN_CELL_HITS,
            needed: 2,
        });
    }
    let k = fitted.len() as f64;
    let slope = fitted.iter().map(|f| f.0).sum::<f64>() / k;
    let intercept = fitted.iter().map(|f| f.1).sum::<f64>() / k;
    let var = fitted.iter().map(|f| (f.0 - slope).powi(2)).sum::<f64>() / (k - 1.0);

    let log_masses = (0..cfg.radii.len())
        .map(|i| {
            let vals: Vec<f64> = fits.iter().filter_map(|f| f.log_mass[i]).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();
    let discarded_cells = fits
        .iter()
        .map(|f| f.log_mass.iter().filter(|m| m.is_none()).count())
        .sum();

    Ok(LocalDimEstimate {
        slope,
        intercept,
        radii: cfg.radii.clone(),
        log_masses,
        stderr: (var / k).sqrt(),
        sample_size: cfg.samples,
        seed: cfg.seed,
        depth: cfg.depth,
        probes: cfg.probes,
        probes_fitted: fitted.len(),
        resampled_probes: fits.iter().filter(|f| f.resampled).count(),
        discarded_cells,
        probe_points: fits.iter().map(|f| f.x).collect(),
        probe_slopes: fits.iter().map(|f| f.fit.map(|f| f.0)).collect(),
    })
}
