use std::fs::File;
use std::io::Write;

use overlapdim_core::dim_formulas::{
    measure_dimension, overlap_dimension, phi_series, similarity_dimension, subsystem_dimension,
    DimensionReport, MoranSolution,
};
use overlapdim_core::empirical::{
    default_depth, geometric_radii, local_dimension_estimate, phi_oracle, EstimateConfig,
};
use overlapdim_core::separation::{check_forward_separation, dmn_interval, COINCIDENCE_TOL};
use overlapdim_core::{par, IfsParams, ProbVector};
use serde::Serialize;
use serde_json::Value;

use crate::args::{
    CheckSeparationArgs, DimAttractorArgs, DimMeasureArgs, EstimateArgs, ParamArgs, PhiArgs,
    ProbArgs, SweepArgs, Which,
};
use crate::error::CliError;
use crate::output::Report;

pub const SWEEP_HEADER: [&str; 7] = [
    "alpha",
    "s0",
    "s1",
    "dim_measure",
    "phi",
    "separation_status",
    "in_dmn_band",
];

fn params(a: &ParamArgs) -> Result<IfsParams, CliError> {
    Ok(IfsParams::new(a.alpha, a.beta, a.gamma)?)
}

fn probs(a: &ProbArgs) -> Result<ProbVector, CliError> {
    Ok(ProbVector::new(a.p1, a.p2, a.p3)?)
}

#[derive(Serialize)]
struct WithInputs<T: Serialize> {
    params: IfsParams,
    probs: ProbVector,
    #[serde(flatten)]
    result: T,
}

pub fn dim_measure(a: &DimMeasureArgs) -> Result<Value, CliError> {
    let report = Report::start("dim-measure").tolerance("tol", a.tol);
    let (p, pr) = (params(&a.params)?, probs(&a.probs)?);
    let r: DimensionReport = measure_dimension(&p, &pr, a.tol)?;
    report.finish(WithInputs {
        params: p,
        probs: pr,
        result: r,
    })
}

#[derive(Serialize)]
struct AttractorDimension {
    params: IfsParams,
    which: &'static str,
    n: Option<usize>,
    #[serde(flatten)]
    solution: MoranSolution,
    dimension: f64,
}

pub fn dim_attractor(a: &DimAttractorArgs) -> Result<Value, CliError> {
    let report = Report::start("dim-attractor");
    let p = params(&a.params)?;
    let (which, n, solution) = match a.which {
        Which::S0 => ("s0", None, similarity_dimension(&p)?),
        Which::S1 => ("s1", None, overlap_dimension(&p)?),
        Which::Shat => {
            let n = a.n.expect("clap requires --n with shat");
            ("shat", Some(n), subsystem_dimension(&p, n)?)
        }
    };
    report.finish(AttractorDimension {
        params: p,
        which,
        n,
        solution,
        dimension: solution.exponent.min(1.0),
    })
}

pub fn check_separation(a: &CheckSeparationArgs) -> Result<Value, CliError> {
    let report = Report::start("check-separation").tolerance("coincidence_tol", COINCIDENCE_TOL);
    let p = params(&a.params)?;
    let mut verdict = check_forward_separation(&p, a.depth, a.max_exponent)?;
    if !a.emit_certificate {
        verdict.certificate = None;
    }
    let mut doc = serde_json::to_value(&verdict)?;
    doc["params"] = serde_json::to_value(p)?;
    report.finish(doc)
}

struct SweepRow {
    alpha: f64,
    s0: f64,
    s1: f64,
    dim_measure: f64,
    phi: f64,
    status: &'static str,
    bands: Vec<(u64, u64)>,
}

impl SweepRow {
    fn record(&self) -> [String; 7] {
        let bands: Vec<String> = self.bands.iter().map(|(m, n)| format!("({m},{n})")).collect();
        [
            num(self.alpha),
            num(self.s0),
            num(self.s1),
            num(self.dim_measure),
            num(self.phi),
            self.status.to_string(),
            bands.join(";"),
        ]
    }
}

/// Shortest round-trip decimal, independent of locale.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn sweep_grid(a: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let ninth = 1.0 / 9.0;
    if !(a.alpha_min > 0.0 && a.alpha_min < a.alpha_max && a.alpha_max < a.beta.min(ninth)) {
        return Err(CliError::Validation(format!(
            "need 0 < alpha-min < alpha-max < min(beta, 1/9), got alpha-min = {}, alpha-max = {}, beta = {}",
            a.alpha_min, a.alpha_max, a.beta
        )));
    }
    if a.steps < 2 {
        return Err(CliError::Validation(format!("steps must be >= 2, got {}", a.steps)));
    }
    let h = (a.alpha_max - a.alpha_min) / (a.steps - 1) as f64;
    Ok((0..a.steps)
        .map(|i| {
            if i + 1 == a.steps {
                a.alpha_max
            } else {
                a.alpha_min + i as f64 * h
            }
        })
        .collect())
}

#[derive(Serialize)]
struct SweepSummary {
    out: String,
    rows: usize,
    header: [&'static str; 7],
    beta: f64,
    gamma: f64,
    probs: ProbVector,
}

pub fn sweep(a: &SweepArgs) -> Result<Value, CliError> {
    let report = Report::start("sweep")
        .tolerance("tol", a.tol)
        .tolerance("coincidence_tol", COINCIDENCE_TOL);
    let grid = sweep_grid(a)?;
    let pr = match (a.p1, a.p2, a.p3) {
        (Some(p1), Some(p2), Some(p3)) => ProbVector::new(p1, p2, p3)?,
        _ => ProbVector::uniform(),
    };
    if a.max_exponent == 0 {
        return Err(CliError::Validation("max-exponent must be >= 1".into()));
    }
    let mut bands = Vec::new();
    for m in 1..=a.max_exponent {
        for n in 1..=a.max_exponent {
            if let Some(iv) = dmn_interval(a.beta, a.gamma, m, n)?.interval {
                bands.push(((m, n), iv));
            }
        }
    }

    let rows = par::map_indexed(grid.len(), |i| -> Result<SweepRow, CliError> {
        let alpha = grid[i];
        let p = IfsParams::new(alpha, a.beta, a.gamma)?;
        let r = measure_dimension(&p, &pr, a.tol)?;
        Ok(SweepRow {
            alpha,
            s0: similarity_dimension(&p)?.exponent,
            s1: overlap_dimension(&p)?.exponent,
            dim_measure: r.dimension,
            phi: r.phi,
            status: check_forward_separation(&p, a.depth, a.max_exponent)?
                .status
                .as_str(),
            bands: bands
                .iter()
                .filter(|(_, iv)| iv.contains(alpha))
                .map(|&(mn, _)| mn)
                .collect(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    write_csv(a, &rows)?;
    report.finish(SweepSummary {
        out: a.out.display().to_string(),
        rows: rows.len(),
        header: SWEEP_HEADER,
        beta: a.beta,
        gamma: a.gamma,
        probs: pr,
    })
}

fn write_csv(a: &SweepArgs, rows: &[SweepRow]) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv {
        path: a.out.clone(),
        source,
    };
    let file = File::create(&a.out).map_err(|source| CliError::Io {
        path: a.out.clone(),
        source,
    })?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    let mut file = w.into_inner().map_err(|e| CliError::Io {
        path: a.out.clone(),
        source: e.into_error(),
    })?;
    file.flush().map_err(|source| CliError::Io {
        path: a.out.clone(),
        source,
    })
}

pub fn phi(a: &PhiArgs) -> Result<Value, CliError> {
    let pr = probs(&a.probs)?;
    if a.oracle {
        let samples = a.samples.expect("clap requires --samples with --oracle");
        let report = Report::start("phi").seed(a.seed);
        let est = phi_oracle(&pr, samples, a.seed)?;
        let mut doc = serde_json::to_value(est)?;
        doc["mode"] = "oracle".into();
        doc["probs"] = serde_json::to_value(pr)?;
        report.finish(doc)
    } else {
        let report = Report::start("phi").tolerance("tol", a.tol);
        let s = phi_series(&pr, a.tol)?;
        let mut doc = serde_json::to_value(s)?;
        doc["mode"] = "series".into();
        doc["probs"] = serde_json::to_value(pr)?;
        report.finish(doc)
    }
}

fn parse_radii(s: &str) -> Result<Vec<f64>, CliError> {
    let radii = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("radius {t:?} is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(CliError::Validation(format!(
            "radii must be a strictly decreasing list of at least two values, got {s}"
        )));
    }
    Ok(radii)
}

pub fn estimate(a: &EstimateArgs) -> Result<Value, CliError> {
    let report = Report::start("estimate").seed(a.seed);
    let (p, pr) = (params(&a.params)?, probs(&a.probs)?);
    let radii = match &a.radii {
        Some(s) => parse_radii(s)?,
        None => geometric_radii(1e-2, 1e-4, 5)?,
    };
    let depth = a.depth.unwrap_or_else(|| default_depth(&p, &radii));
    let cfg = EstimateConfig {
        probes: a.probes,
        samples: a.samples,
        radii,
        depth,
        seed: a.seed,
    };
    let est = local_dimension_estimate(&p, &pr, &cfg)?;
    let mut doc = serde_json::to_value(WithInputs {
        params: p,
        probs: pr,
        result: est,
    })?;
    if !a.verbose {
        if let Value::Object(map) = &mut doc {
            map.remove("probe_points");
            map.remove("probe_slopes");
        }
    }
    report.finish(doc)
}
