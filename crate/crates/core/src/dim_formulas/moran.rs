//! Moran-type equations for the attractor: the similarity dimension `s0`, the
//! overlap-corrected exponent `s1`, and the finite-subsystem exponents `s_hat_n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::IfsParams;
use crate::interval::Interval;

/// Initial bracket for every exponent.
pub const BRACKET: (f64, f64) = (1e-9, 4.0);
/// Bisection hands over to Newton below this width.
pub const BISECT_WIDTH: f64 = 1e-6;
/// Target width of the final sign-change bracket.
pub const ROOT_TOL: f64 = 1e-13;
/// Contract on the returned solution.
pub const MAX_RESIDUAL: f64 = 1e-12;
pub const MAX_BRACKET_WIDTH: f64 = 1e-12;

const MAX_ITER: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoranSolution {
    pub exponent: f64,
    pub residual: f64,
    pub bracket: Interval,
    pub iterations: usize,
}

/// Root of a strictly decreasing `f` on `[lo, hi]` with `f(lo) > 0 > f(hi)`.
///
/// `fd` returns `(f(s), f'(s))`.
pub fn solve_decreasing<F>(fd: F, lo: f64, hi: f64) -> Result<MoranSolution>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = fd(lo);
    let (f_hi, _) = fd(hi);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;

    while hi - lo >= BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        let (fm, _) = fd(mid);
        iterations += 1;
        if fm == 0.0 {
            return finish(&fd, mid, mid, mid, iterations);
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Safeguarded Newton: every evaluation tightens the bracket, steps that
    // leave it fall back to bisection.
    let mut x = 0.5 * (lo + hi);
    let mut best = (x, f64::INFINITY);
    while hi - lo >= ROOT_TOL && iterations < MAX_ITER {
        let (fx, dfx) = fd(x);
        iterations += 1;
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx == 0.0 {
            return finish(&fd, x, x, x, iterations);
        }
        if fx > 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let step = fx / dfx;
        let newton = x - step;
        x = if dfx < 0.0 && newton > lo && newton < hi {
            if step.abs() < 0.25 * ROOT_TOL {
                // Newton has converged; straddle the iterate to close the bracket.
                let (fa, _) = fd(newton - 0.5 * ROOT_TOL);
                let (fb, _) = fd(newton + 0.5 * ROOT_TOL);
                iterations += 2;
                if fa > 0.0 {
                    lo = lo.max(newton - 0.5 * ROOT_TOL);
                }
                if fb < 0.0 {
                    hi = hi.min(newton + 0.5 * ROOT_TOL);
                }
                if hi - lo < ROOT_TOL {
                    best = (newton, fd(newton).0.abs());
                    break;
                }
                0.5 * (lo + hi)
            } else {
                newton
            }
        } else {
            0.5 * (lo + hi)
        };
    }
    let x = if best.0 >= lo && best.0 <= hi {
        best.0
    } else {
        0.5 * (lo + hi)
    };
    finish(&fd, x, lo, hi, iterations)
}

fn finish<F>(fd: &F, x: f64, lo: f64, hi: f64, iterations: usize) -> Result<MoranSolution>
where
    F: Fn(f64) -> (f64, f64),
{
    let residual = fd(x).0;
    if residual.abs() >= MAX_RESIDUAL {
        return Err(Error::SolverFailure(format!(
            "residual {residual:e} at s = {x} exceeds {MAX_RESIDUAL:e}"
        )));
    }
    if hi - lo >= MAX_BRACKET_WIDTH {
        return Err(Error::SolverFailure(format!(
            "bracket [{lo}, {hi}] wider than {MAX_BRACKET_WIDTH:e}"
        )));
    }
    Ok(MoranSolution {
        exponent: x,
        residual,
        bracket: Interval::new(lo, hi)?,
        iterations,
    })
}

/// `a^s + b^s + c^s - 1` and its derivative.
pub fn similarity_equation(params: &IfsParams, s: f64) -> (f64, f64) {
    let mut f = -1.0;
    let mut df = 0.0;
    for r in [params.alpha(), params.beta(), params.gamma()] {
        let t = r.powf(s);
        f += t;
        df += t * r.ln();
    }
    (f, df)
}

/// `a^s + b^s + c^s - (a b)^s - 1` and its derivative.
pub fn overlap_equation(params: &IfsParams, s: f64) -> (f64, f64) {
    let (f, df) = similarity_equation(params, s);
    let ab = params.alpha() * params.beta();
    let t = ab.powf(s);
    (f - t, df - t * ab.ln())
}

/// `c^s * sum_{k=0}^{n} sum_{l=0}^{k} a^{l s} b^{(k-l) s} - 1` and its derivative.
pub fn subsystem_equation(params: &IfsParams, n: usize, s: f64) -> (f64, f64) {
    let (la, lb, lc) = (params.alpha().ln(), params.beta().ln(), params.gamma().ln());
    let mut f = 0.0;
    let mut df = 0.0;
    for k in 0..=n {
        for l in 0..=k {
            let log_r = lc + l as f64 * la + (k - l) as f64 * lb;
            let t = (s * log_r).exp();
            f += t;
            df += t * log_r;
        }
    }
    (f - 1.0, df)
}

/// `s0` with `a^s0 + b^s0 + c^s0 = 1`.
pub fn similarity_dimension(params: &IfsParams) -> Result<MoranSolution> {
    solve_decreasing(|s| similarity_equation(params, s), BRACKET.0, BRACKET.1)
}

/// `s1` with `a^s1 + b^s1 + c^s1 - (a b)^s1 = 1`.
pub fn overlap_dimension(params: &IfsParams) -> Result<MoranSolution> {
    let sol = solve_decreasing(|s| overlap_equation(params, s), BRACKET.0, BRACKET.1)?;
    let (_, slope) = overlap_equation(params, sol.exponent);
    if slope >= 0.0 {
        return Err(Error::SolverFailure(format!(
            "overlap equation is not decreasing at its root (f' = {slope:e})"
        )));
    }
    Ok(sol)
}

/// `s_hat_n` for the subsystem of words `1^k 2^l 3` with `k + l <= n`.
///
/// At `n = 0` the subsystem is the single map `S3`, whose equation `c^s = 1`
/// has the root `0`.
pub fn subsystem_dimension(params: &IfsParams, n: usize) -> Result<MoranSolution> {
    if n == 0 {
        return Ok(MoranSolution {
            exponent: 0.0,
            residual: 0.0,
            bracket: Interval::point(0.0),
            iterations: 0,
        });
    }
    solve_decreasing(|s| subsystem_equation(params, n, s), BRACKET.0, BRACKET.1)
}
