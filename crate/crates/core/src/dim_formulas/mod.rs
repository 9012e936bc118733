//! Closed-form quantities: Moran exponents, entropy, Lyapunov exponent, the
//! correction series `Phi` and the assembled dimension of the measure.

pub mod moran;
pub mod partition;
pub mod phi;

use serde::Serialize;

use crate::error::Result;
use crate::ifs::{IfsParams, ProbVector, Symbol};

pub use moran::{
    overlap_dimension, similarity_dimension, subsystem_dimension, MoranSolution,
};
pub use partition::{partition_measure, PartitionMeasure};
pub use phi::{phi_series, PhiSeries};

/// `-sum p_i ln p_i`.
pub fn entropy(probs: &ProbVector) -> f64 {
    -probs.as_array().iter().map(|&p| p * p.ln()).sum::<f64>()
}

/// `-sum p_i ln r_i`.
pub fn lyapunov(params: &IfsParams, probs: &ProbVector) -> f64 {
    -Symbol::ALL
        .iter()
        .map(|&s| probs.get(s) * params.ratio(s).ln())
        .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub entropy: f64,
    pub phi: f64,
    pub phi_truncation_bound: f64,
    pub lyapunov: f64,
    /// `(entropy + phi) / lyapunov` before clamping.
    pub dimension_raw: f64,
    /// `dimension_raw` capped at 1.
    pub dimension: f64,
    /// `phi_truncation_bound / lyapunov`.
    pub uncertainty: f64,
    pub terms_used: usize,
    pub in_ninth_range: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn measure_dimension(
    params: &IfsParams,
    probs: &ProbVector,
    tol: f64,
) -> Result<DimensionReport> {
    let series = phi_series(probs, tol)?;
    let h = entropy(probs);
    let chi = lyapunov(params, probs);
    let raw = (h + series.phi) / chi;
    let mut warnings = Vec::new();
    if !params.in_ninth_range() {
        warnings.push(
            "ratios are not all below 1/9; the dimension formula is not guaranteed to hold"
                .to_string(),
        );
    }
    if raw > 1.0 {
        warnings.push(format!("formula value {raw} exceeds 1 and was clamped"));
    }
    Ok(DimensionReport {
        entropy: h,
        phi: series.phi,
        phi_truncation_bound: series.bound,
        lyapunov: chi,
        dimension_raw: raw,
        dimension: raw.min(1.0),
        uncertainty: series.bound / chi,
        terms_used: series.terms_used,
        in_ninth_range: params.in_ninth_range(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert!((entropy(&ProbVector::uniform()) - 3f64.ln()).abs() < 1e-15);
        let d = ProbVector::new(0.5, 0.25, 0.25).unwrap();
        assert!((entropy(&d) - 1.5 * 2f64.ln()).abs() < 1e-15);
        // 50-digit reference
        let e = ProbVector::new(0.2, 0.3, 0.5).unwrap();
        assert!((entropy(&e) - 1.029_653_014_064_573_5).abs() < 1e-14);
    }

    #[test]
    fn lyapunov_examples() {
        let r = IfsParams::new(0.05, 0.05, 0.05).unwrap();
        let pr = ProbVector::new(0.2, 0.3, 0.5).unwrap();
        assert!((lyapunov(&r, &pr) + 0.05f64.ln()).abs() < 1e-14);
        let q = IfsParams::new(0.03, 0.05, 0.07).unwrap();
        let hand = ((1.0 / 0.03f64).ln() + (1.0 / 0.05f64).ln() + (1.0 / 0.07f64).ln()) / 3.0;
        assert!((lyapunov(&q, &ProbVector::uniform()) - hand).abs() < 1e-14);
        let eps = 1e-9;
        let near = ProbVector::new(1.0 - 2.0 * eps, eps, eps).unwrap();
        assert!((lyapunov(&q, &near) + 0.03f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn dimension_report() {
        let q = IfsParams::new(0.03, 0.05, 0.07).unwrap();
        let r = measure_dimension(&q, &ProbVector::uniform(), 1e-10).unwrap();
        // 50-digit reference
        assert!((r.dimension - 0.289_720_777_251_596_6).abs() < 1e-10);
        assert!(r.dimension <= entropy(&ProbVector::uniform()) / r.lyapunov);
        assert!((r.uncertainty - r.phi_truncation_bound / r.lyapunov).abs() < 1e-30);
        assert!(r.warnings.is_empty());
        let wide = IfsParams::new(0.3, 0.3, 0.3).unwrap();
        assert!(!measure_dimension(&wide, &ProbVector::uniform(), 1e-10)
            .unwrap()
            .warnings
            .is_empty());
    }

    #[test]
    fn vanishing_p1_gives_two_map_value() {
        let q = IfsParams::new(0.03, 0.05, 0.07).unwrap();
        let p1 = 1e-12;
        let p2 = (1.0 - p1) / 2.0;
        let pr = ProbVector::new(p1, p2, p2).unwrap();
        let r = measure_dimension(&q, &pr, 1e-10).unwrap();
        let osc = (-2.0 * p2 * p2.ln()) / (-p2 * 0.05f64.ln() - p2 * 0.07f64.ln());
        assert!((r.dimension - osc).abs() < 1e-9);
    }

    #[test]
    fn swap_symmetry() {
        let q = IfsParams::new(0.03, 0.05, 0.07).unwrap();
        let s = IfsParams::new(0.05, 0.03, 0.07).unwrap();
        let pr = ProbVector::new(0.2, 0.3, 0.5).unwrap();
        let a = measure_dimension(&q, &pr, 1e-10).unwrap();
        let b = measure_dimension(&s, &pr.swapped(), 1e-10).unwrap();
        assert!((a.dimension_raw - b.dimension_raw).abs() < 1e-15);
    }
}
