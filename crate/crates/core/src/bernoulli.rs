//! Binary sources under Hamming distortion.
//!
//! Without a classification bound the rate-distortion function of Bern(p) is
//! `H_b(p) - H_b(D)` below `D = p` and zero above it. With a bound the curve
//! splits into three regimes: it follows that closed form up to `d1`, sits
//! on a flat plateau up to `d2`, and is zero beyond. The regime boundaries and
//! the plateau rate have no closed form in general, so [`locate_regimes`]
//! finds them from a dense sweep refined by bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RdcError, Result};
use crate::info_theory::binary_entropy;
use crate::solver::{Problem, SolverConfig};
use crate::source_model::DistortionMeasure;

/// Agreement with the closed form required below `d1` (bits).
pub const AGREEMENT_TOL: f64 = 1e-3;
/// Rate treated as zero when locating `d2` (bits).
pub const ZERO_RATE_TOL: f64 = 1e-4;
/// Largest rate spread allowed on the plateau (bits).
pub const PLATEAU_SPREAD_TOL: f64 = 1e-3;
/// Accuracy of the refined boundaries in `D`.
pub const BOUNDARY_TOL: f64 = 1e-4;
pub const SWEEP_POINTS: usize = 200;

pub fn rd_closed_form(p: f64, d: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(RdcError::InvalidArgument(format!(
            "Bernoulli parameter {p} outside (0, 0.5]"
        )));
    }
    if d.is_nan() || d < 0.0 {
        return Err(RdcError::InvalidArgument(format!(
            "distortion bound must be nonnegative, got {d}"
        )));
    }
    if d >= p {
        return Ok(0.0);
    }
    Ok(binary_entropy(p)? - binary_entropy(d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub d: f64,
    /// `None` where the bounds cannot be met.
    pub rate_bits: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliRegimes {
    pub p: f64,
    pub e_bound: f64,
    pub d1: f64,
    pub d2: f64,
    /// Absent when the classification bound never binds.
    pub plateau_rate_bits: Option<f64>,
    pub sweep: Vec<SweepSample>,
}

fn is_hamming(delta: &DistortionMeasure) -> bool {
    delta.inputs() == 2 && delta.outputs() == 2 && delta.matrix() == DistortionMeasure::hamming(2).matrix()
}

/// Locates `d1`, `d2` and the plateau rate of `R(·, e_bound)` for a binary
/// source with Hamming distortion.
pub fn locate_regimes(problem: &Problem, e_bound: f64, cfg: &SolverConfig) -> Result<BernoulliRegimes> {
    if problem.source.symbols() != 2 || !is_hamming(&problem.delta) {
        return Err(RdcError::InvalidArgument(
            "regime analysis needs a binary source with Hamming distortion".into(),
        ));
    }
    if e_bound.is_nan() || e_bound < 0.0 {
        return Err(RdcError::InvalidArgument(format!(
            "classification bound must be nonnegative, got {e_bound}"
        )));
    }
    let px = problem.source.marginal_probs();
    let p = px[0].min(px[1]);
    if p <= 0.0 {
        return Err(RdcError::InvalidArgument("degenerate source: one symbol has zero mass".into()));
    }

    let rate_at = |d: f64| -> Option<f64> {
        match problem.solve(d, e_bound, cfg) {
            Ok(pt) => Some(pt.rate_bits),
            Err(_) => None,
        }
    };
    let agrees = |d: f64, r: f64| -> bool {
        rd_closed_form(p, d).is_ok_and(|cf| (r - cf).abs() < AGREEMENT_TOL)
    };

    let span = if e_bound.is_finite() { p.max(e_bound) } else { p } * 1.5;
    let sweep: Vec<SweepSample> = (0..SWEEP_POINTS)
        .into_par_iter()
        .map(|i| {
            let d = span * i as f64 / (SWEEP_POINTS - 1) as f64;
            SweepSample { d, rate_bits: rate_at(d) }
        })
        .collect();

    let solved: Vec<(f64, f64)> = sweep
        .iter()
        .filter_map(|s| s.rate_bits.map(|r| (s.d, r)))
        .collect();
    if solved.is_empty() {
        return Err(RdcError::Infeasible(format!(
            "classification bound {e_bound} cannot be met at any swept distortion"
        )));
    }

    // d1: end of the leading run that follows the closed form.
    let run = solved.iter().take_while(|&&(d, r)| agrees(d, r)).count();
    let d1 = if run == solved.len() || (run > 0 && solved[run - 1].0 >= p) {
        p
    } else if run == 0 {
        solved[0].0
    } else {
        let (mut lo, mut hi) = (solved[run - 1].0, solved[run].0);
        while hi - lo > BOUNDARY_TOL {
            let mid = 0.5 * (lo + hi);
            match rate_at(mid) {
                Some(r) if agrees(mid, r) => lo = mid,
                _ => hi = mid,
            }
        }
        lo.min(p)
    };

    if d1 >= p {
        return Ok(BernoulliRegimes {
            p,
            e_bound,
            d1: p,
            d2: p,
            plateau_rate_bits: None,
            sweep,
        });
    }

    // d2: first distortion where the rate vanishes.
    let d2 = match solved.iter().position(|&(d, r)| d > d1 && r < ZERO_RATE_TOL) {
        None => f64::INFINITY,
        Some(k) => {
            let (mut lo, mut hi) = (solved[k - 1].0.max(d1), solved[k].0);
            while hi - lo > BOUNDARY_TOL {
                let mid = 0.5 * (lo + hi);
                match rate_at(mid) {
                    Some(r) if r < ZERO_RATE_TOL => hi = mid,
                    _ => lo = mid,
                }
            }
            hi
        }
    };

    let plateau: Vec<f64> = solved
        .iter()
        .filter(|&&(d, _)| d > d1 && d < d2)
        .map(|&(_, r)| r)
        .collect();
    if plateau.is_empty() {
        return Err(RdcError::NoPlateau(format!(
            "no swept distortion lies between d1 = {d1} and d2 = {d2}"
        )));
    }
    let hi = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = plateau.iter().copied().fold(f64::INFINITY, f64::min);
    if hi - lo >= PLATEAU_SPREAD_TOL {
        return Err(RdcError::NoPlateau(format!(
            "rate varies by {} bits between d1 = {d1} and d2 = {d2}",
            hi - lo
        )));
    }
    let level = plateau.iter().sum::<f64>() / plateau.len() as f64;
    Ok(BernoulliRegimes {
        p,
        e_bound,
        d1,
        d2,
        plateau_rate_bits: Some(level),
        sweep,
    })
}
