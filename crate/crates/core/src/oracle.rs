//! Exhaustive grid search over channels for tiny alphabets.
//!
//! Used only to cross-check the Lagrangian solver. It shares nothing with the
//! solver beyond the problem definition: mutual information, distortion and
//! error rate are evaluated directly for every grid channel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RdcError, Result};
use crate::solver::Problem;
use crate::source_model::Channel;

/// Largest number of free channel parameters the search accepts.
pub const MAX_FREE_PARAMS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Each channel entry is a multiple of `1 / resolution`. Doubling the
    /// resolution refines the grid, so the returned rate never increases.
    pub resolution: usize,
    /// Same meaning as the solver's `constraint_tol`.
    pub slack: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            resolution: 200,
            slack: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `None` when no grid channel meets both bounds.
    pub rate_bits: Option<f64>,
    pub channel: Option<Channel>,
    pub channels_searched: u64,
}

/// All points `c / resolution` of the probability simplex over `m` symbols,
/// in lexicographic order of the count vector `c`.
fn simplex_grid(m: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(m, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut counts = Vec::new();
    rec(m, resolution, &mut Vec::with_capacity(m), &mut counts);
    counts
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / resolution as f64).collect())
        .collect()
}

/// Minimum rate over grid channels satisfying both bounds (with slack).
pub fn grid_search_rdc(
    problem: &Problem,
    d_bound: f64,
    e_bound: f64,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if cfg.resolution < 2 {
        return Err(RdcError::InvalidArgument("oracle resolution must be at least 2".into()));
    }
    for (name, v) in [("distortion", d_bound), ("classification error", e_bound)] {
        if v.is_nan() || v < 0.0 {
            return Err(RdcError::InvalidArgument(format!(
                "{name} bound must be nonnegative, got {v}"
            )));
        }
    }
    let p = problem.source.marginal_probs();
    let rows: Vec<usize> = problem.source.retained().collect();
    let n = problem.source.symbols();
    let m = problem.outputs();
    let free = rows.len() * (m - 1);
    if free > MAX_FREE_PARAMS {
        return Err(RdcError::InstanceTooLarge {
            free,
            max: MAX_FREE_PARAMS,
        });
    }

    let grid = simplex_grid(m, cfg.resolution);
    let delta = problem.delta.matrix();
    let w = problem.weights().matrix();
    // Per-row linear contributions for every grid point.
    let row_terms: Vec<Vec<(f64, f64)>> = rows
        .iter()
        .map(|&x| {
            grid.iter()
                .map(|k| {
                    let d: f64 = k.iter().zip(delta.row(x)).map(|(a, b)| a * b).sum();
                    let e: f64 = k.iter().zip(w.row(x)).map(|(a, b)| a * b).sum();
                    (p[x] * d, p[x] * e)
                })
                .collect()
        })
        .collect();

    let g = grid.len() as u64;
    let total = g.pow(rows.len() as u32);
    let d_limit = d_bound + cfg.slack;
    let e_limit = e_bound + cfg.slack;

    let best = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut idx = [0usize; MAX_FREE_PARAMS];
            let mut c = code;
            // Most significant digit is the first retained row.
            for r in (0..rows.len()).rev() {
                idx[r] = (c % g) as usize;
                c /= g;
            }
            let (mut d, mut e) = (0.0, 0.0);
            for (r, terms) in row_terms.iter().enumerate() {
                d += terms[idx[r]].0;
                e += terms[idx[r]].1;
            }
            if d > d_limit || e > e_limit {
                return None;
            }
            let mut q = vec![0.0; m];
            for (r, &x) in rows.iter().enumerate() {
                for (qy, k) in q.iter_mut().zip(&grid[idx[r]]) {
                    *qy += p[x] * k;
                }
            }
            let mut info = 0.0;
            for (r, &x) in rows.iter().enumerate() {
                for (k, qy) in grid[idx[r]].iter().zip(&q) {
                    if *k > 0.0 {
                        info += p[x] * k * (k / qy).log2();
                    }
                }
            }
            Some((info.max(0.0), code))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let Some((rate, code)) = best else {
        return Ok(OracleResult {
            rate_bits: None,
            channel: None,
            channels_searched: total,
        });
    };
    let mut chosen = vec![vec![1.0 / m as f64; m]; n];
    let mut c = code;
    for r in (0..rows.len()).rev() {
        chosen[rows[r]] = grid[(c % g) as usize].clone();
        c /= g;
    }
    Ok(OracleResult {
        rate_bits: Some(rate),
        channel: Some(Channel::new(chosen)?),
        channels_searched: total,
    })
}
