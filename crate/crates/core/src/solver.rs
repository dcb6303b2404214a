//! Minimum rate under a distortion bound and a classification-error bound.
//!
//! The program is convex with two linear constraints, so it is solved through
//! its Lagrangian `I + λ_D·E[Δ] + λ_E·ε`. For fixed multipliers the inner
//! problem is a classical rate-distortion problem with the combined cost
//! `λ_D·Δ + λ_E·w` (`w` being the error weight matrix) and is handled by
//! Blahut–Arimoto alternating minimization. The multipliers are then found by
//! nested bisection: the outer search tunes `λ_D` to meet the distortion
//! bound, and for every trial `λ_D` an inner search tunes `λ_E` to meet the
//! error bound.
//!
//! Multipliers are in nats; rates leave this module in bits.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{weight_matrix, BinaryClassifier, ErrorWeightMatrix};
use crate::error::{RdcError, Result};
use crate::info_theory::mutual_information_nats;
use crate::source_model::{bilinear, Channel, DistortionMeasure, Matrix, MixtureSource};
use crate::surface::{CellStatus, RdcSurface, SurfaceCell};

/// Floor applied to unnormalized channel entries before normalization.
const UNDERFLOW_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop the inner iteration once the Lagrangian drops by less than this
    /// (nats) in one step.
    pub inner_tol: f64,
    pub max_inner_iters: usize,
    /// Feasibility slack accepted on both constraints.
    pub constraint_tol: f64,
    /// Largest multiplier tried by the outer searches.
    pub multiplier_max: f64,
    /// Bisection steps per multiplier.
    pub outer_max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            inner_tol: 1e-9,
            max_inner_iters: 20_000,
            constraint_tol: 1e-4,
            multiplier_max: 1e4,
            outer_max_iters: 60,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.inner_tol > 0.0
            && self.constraint_tol > 0.0
            && self.multiplier_max > 0.0
            && self.max_inner_iters > 0
            && self.outer_max_iters > 0;
        if !positive {
            return Err(RdcError::InvalidArgument(
                "solver configuration values must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Slack below a bound at which bisection stops early.
    fn target_slack(&self) -> f64 {
        self.constraint_tol * 1e-3
    }
}

/// One evaluated point of the rate-distortion-classification function.
#[derive(Debug, Clone, PartialEq)]
pub struct RdcPoint {
    pub rate_bits: f64,
    pub distortion: f64,
    pub class_error: f64,
    pub lambda_d: f64,
    pub lambda_e: f64,
    /// Inner iterations spent, summed over every trial solve behind this
    /// point.
    pub iterations: usize,
    /// Whether the inner iteration producing this point met `inner_tol`.
    pub converged: bool,
    pub channel: Option<Channel>,
}

/// Source, distortion and classifier bundled with the derived error weights.
#[derive(Debug, Clone)]
pub struct Problem {
    pub source: MixtureSource,
    pub delta: DistortionMeasure,
    pub classifier: BinaryClassifier,
    weights: ErrorWeightMatrix,
}

impl Problem {
    pub fn new(
        source: MixtureSource,
        delta: DistortionMeasure,
        classifier: BinaryClassifier,
    ) -> Result<Self> {
        if delta.inputs() != source.symbols() {
            return Err(RdcError::Dimension(format!(
                "distortion has {} rows, source has {} symbols",
                delta.inputs(),
                source.symbols()
            )));
        }
        if classifier.outputs() != delta.outputs() {
            return Err(RdcError::Dimension(format!(
                "classifier covers {} symbols, reconstruction alphabet has {}",
                classifier.outputs(),
                delta.outputs()
            )));
        }
        let weights = weight_matrix(&source, &classifier);
        Ok(Problem {
            source,
            delta,
            classifier,
            weights,
        })
    }

    pub fn weights(&self) -> &ErrorWeightMatrix {
        &self.weights
    }

    pub fn outputs(&self) -> usize {
        self.delta.outputs()
    }

    pub fn lagrangian(&self, lambda_d: f64, lambda_e: f64, cfg: &SolverConfig) -> RdcPoint {
        solve_lagrangian(
            &self.source,
            &self.delta,
            &self.weights,
            lambda_d,
            lambda_e,
            cfg,
        )
    }

    pub fn solve(&self, d_bound: f64, e_bound: f64, cfg: &SolverConfig) -> Result<RdcPoint> {
        constrained(self, d_bound, e_bound, cfg)
    }

    /// Smallest distortion any channel can reach.
    pub fn min_distortion(&self) -> f64 {
        let p = self.source.marginal_probs();
        self.source
            .retained()
            .map(|x| p[x] * row_min(self.delta.matrix().row(x)))
            .sum()
    }

    /// Smallest error rate reachable by a channel with distortion at most
    /// `d_bound`, or `None` when no channel meets `d_bound`.
    ///
    /// Both quantities are linear and row-separable in the channel, so this
    /// is a small linear program. It is solved through its dual
    /// `max_{μ≥0} Σ_x p(x) min_x̂ (w + μΔ) − μD`, which is piecewise linear
    /// and concave in `μ` and therefore peaks at zero or at a breakpoint.
    pub fn min_error_at_distortion(&self, d_bound: f64) -> Option<f64> {
        if d_bound < self.min_distortion() {
            return None;
        }
        let p = self.source.marginal_probs();
        let delta = self.delta.matrix();
        let w = self.weights.matrix();
        let dual = |mu: f64| -> f64 {
            let inner: f64 = self
                .source
                .retained()
                .map(|x| {
                    let row = w
                        .row(x)
                        .iter()
                        .zip(delta.row(x))
                        .map(|(w, d)| w + mu * d)
                        .fold(f64::INFINITY, f64::min);
                    p[x] * row
                })
                .sum();
            if d_bound.is_infinite() {
                inner
            } else {
                inner - mu * d_bound
            }
        };
        if d_bound.is_infinite() {
            return Some(dual(0.0));
        }
        let mut best = dual(0.0);
        for x in self.source.retained() {
            let (wr, dr) = (w.row(x), delta.row(x));
            for a in 0..wr.len() {
                for b in 0..wr.len() {
                    if dr[b] > dr[a] {
                        let mu = (wr[a] - wr[b]) / (dr[b] - dr[a]);
                        if mu > 0.0 {
                            best = best.max(dual(mu));
                        }
                    }
                }
            }
        }
        Some(best.max(0.0))
    }
}

fn row_min(row: &[f64]) -> f64 {
    row.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Result of a single Blahut–Arimoto run.
struct InnerRun {
    channel: Channel,
    iterations: usize,
    converged: bool,
}

/// Blahut–Arimoto iteration for a fixed per-pair cost, started from the
/// uniform channel. When `trace` is given it receives the Lagrangian
/// `I(K) + Σ p·K·cost` (nats) of every iterate.
fn blahut_arimoto(
    p: &[f64],
    cost: &Matrix,
    cfg: &SolverConfig,
    mut trace: Option<&mut Vec<f64>>,
) -> InnerRun {
    let n = cost.rows();
    let m = cost.cols();
    let live: Vec<usize> = (0..n).filter(|&x| p[x] > 0.0).collect();

    // exp(-(cost - row minimum)); the shift cancels in the normalization.
    let row_shift: Vec<f64> = (0..n).map(|x| row_min(cost.row(x))).collect();
    let kernel = Matrix::from_fn(n, m, |x, y| (-(cost.get(x, y) - row_shift[x])).exp());

    let mut q = vec![1.0 / m as f64; m];
    let mut k = vec![1.0 / m as f64; n * m];
    let mut next_q = vec![0.0; m];
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_inner_iters {
        iterations += 1;
        next_q.iter_mut().for_each(|v| *v = 0.0);
        let mut objective = 0.0;
        for &x in &live {
            let row = &mut k[x * m..(x + 1) * m];
            let mut z = 0.0;
            for ((slot, &qy), &e) in row.iter_mut().zip(&q).zip(kernel.row(x)) {
                *slot = (qy * e).max(UNDERFLOW_FLOOR);
                z += *slot;
            }
            for (slot, acc) in row.iter_mut().zip(next_q.iter_mut()) {
                *slot /= z;
                *acc += p[x] * *slot;
            }
            objective -= p[x] * (z.ln() - row_shift[x]);
        }
        if let Some(t) = trace.as_deref_mut() {
            let channel = Channel::from_matrix_unchecked(Matrix::from_fn(n, m, |x, y| k[x * m + y]));
            t.push(mutual_information_nats(p, &channel) + bilinear(p, &channel, cost));
        }
        std::mem::swap(&mut q, &mut next_q);
        if previous - objective < cfg.inner_tol {
            converged = true;
            break;
        }
        previous = objective;
    }

    InnerRun {
        channel: Channel::from_matrix_unchecked(Matrix::from_fn(n, m, |x, y| k[x * m + y])),
        iterations,
        converged,
    }
}

fn combined_cost(
    delta: &DistortionMeasure,
    w: &ErrorWeightMatrix,
    lambda_d: f64,
    lambda_e: f64,
) -> Matrix {
    let (d, wm) = (delta.matrix(), w.matrix());
    Matrix::from_fn(d.rows(), d.cols(), |x, y| {
        let mut c = 0.0;
        if lambda_d > 0.0 {
            c += lambda_d * d.get(x, y);
        }
        if lambda_e > 0.0 {
            c += lambda_e * wm.get(x, y);
        }
        c
    })
}

fn evaluate(
    source: &MixtureSource,
    delta: &DistortionMeasure,
    w: &ErrorWeightMatrix,
    lambda_d: f64,
    lambda_e: f64,
    run: InnerRun,
) -> RdcPoint {
    let p = source.marginal_probs();
    RdcPoint {
        rate_bits: mutual_information_nats(p, &run.channel) / LN_2,
        distortion: bilinear(p, &run.channel, delta.matrix()),
        class_error: w.expected(source, &run.channel).clamp(0.0, 1.0),
        lambda_d,
        lambda_e,
        iterations: run.iterations,
        converged: run.converged,
        channel: Some(run.channel),
    }
}

/// Minimizes `I + λ_D·E[Δ] + λ_E·ε` for fixed multipliers.
///
/// Non-convergence within `max_inner_iters` is reported through
/// `converged = false` on the returned point.
pub fn solve_lagrangian(
    source: &MixtureSource,
    delta: &DistortionMeasure,
    w: &ErrorWeightMatrix,
    lambda_d: f64,
    lambda_e: f64,
    cfg: &SolverConfig,
) -> RdcPoint {
    let cost = combined_cost(delta, w, lambda_d, lambda_e);
    let run = blahut_arimoto(source.marginal_probs(), &cost, cfg, None);
    evaluate(source, delta, w, lambda_d, lambda_e, run)
}

/// Like [`solve_lagrangian`] but also returns the Lagrangian (nats) after
/// every inner iteration.
pub fn solve_lagrangian_traced(
    source: &MixtureSource,
    delta: &DistortionMeasure,
    w: &ErrorWeightMatrix,
    lambda_d: f64,
    lambda_e: f64,
    cfg: &SolverConfig,
) -> (RdcPoint, Vec<f64>) {
    let cost = combined_cost(delta, w, lambda_d, lambda_e);
    let mut trace = Vec::new();
    let run = blahut_arimoto(source.marginal_probs(), &cost, cfg, Some(&mut trace));
    (evaluate(source, delta, w, lambda_d, lambda_e, run), trace)
}

/// Minimum rate subject to `E[Δ] ≤ d_bound` and `ε ≤ e_bound`.
///
/// Either bound may be `f64::INFINITY`, which drops that constraint.
pub fn solve_constrained(
    source: &MixtureSource,
    delta: &DistortionMeasure,
    clf: &BinaryClassifier,
    d_bound: f64,
    e_bound: f64,
    cfg: &SolverConfig,
) -> Result<RdcPoint> {
    let problem = Problem::new(source.clone(), delta.clone(), clf.clone())?;
    constrained(&problem, d_bound, e_bound, cfg)
}

fn check_bound(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(RdcError::InvalidArgument(format!(
            "{name} bound must be nonnegative, got {v}"
        )));
    }
    Ok(())
}

/// Outcome of a multiplier search along one axis.
enum Search {
    Satisfied(RdcPoint),
    Unreachable(RdcPoint),
}

/// Finds the smallest multiplier in `[0, multiplier_max]` whose solution
/// keeps `measure` at or below `bound`. `eval` solves at a multiplier and
/// reports whether the solution is usable at all; an unusable solution means
/// the multiplier is already too large.
fn bisect_multiplier(
    bound: f64,
    cfg: &SolverConfig,
    measure: impl Fn(&RdcPoint) -> f64,
    mut eval: impl FnMut(f64) -> (RdcPoint, bool),
) -> Search {
    let mut spent = 0;
    let mut probe = |lambda: f64, spent: &mut usize| -> (RdcPoint, Trial) {
        let (mut pt, usable) = eval(lambda);
        *spent += pt.iterations;
        pt.iterations = *spent;
        let trial = match (usable, measure(&pt) <= bound) {
            (false, _) => Trial::Overshoot,
            (true, true) => Trial::Met,
            (true, false) => Trial::Short,
        };
        (pt, trial)
    };

    let (p0, t0) = probe(0.0, &mut spent);
    if t0 == Trial::Met {
        return Search::Satisfied(p0);
    }

    // Grow the upper end of the bracket.
    let mut lo = 0.0;
    let mut hi = cfg.multiplier_max.min(1.0);
    let mut last = p0;
    let mut met = None;
    loop {
        let (pt, trial) = probe(hi, &mut spent);
        match trial {
            Trial::Met => {
                met = Some(pt);
                break;
            }
            Trial::Overshoot => {
                last = pt;
                break;
            }
            Trial::Short => {
                last = pt;
                lo = hi;
                if hi >= cfg.multiplier_max {
                    last.iterations = spent;
                    return Search::Unreachable(last);
                }
                hi = (hi * 2.0).min(cfg.multiplier_max);
            }
        }
    }

    // With an overshooting upper end, first look for any point inside the
    // bracket that meets the bound.
    let mut best = match met {
        Some(pt) => pt,
        None => {
            let mut found = None;
            for _ in 0..cfg.outer_max_iters {
                let mid = 0.5 * (lo + hi);
                let (pt, trial) = probe(mid, &mut spent);
                match trial {
                    Trial::Met => {
                        hi = mid;
                        found = Some(pt);
                        break;
                    }
                    Trial::Short => lo = mid,
                    Trial::Overshoot => hi = mid,
                }
                last = pt;
            }
            match found {
                Some(pt) => pt,
                None => {
                    last.iterations = spent;
                    return Search::Unreachable(last);
                }
            }
        }
    };

    // Shrink toward the smallest multiplier that still meets the bound.
    for _ in 0..cfg.outer_max_iters {
        if bound - measure(&best) <= cfg.target_slack() || hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (pt, trial) = probe(mid, &mut spent);
        match trial {
            Trial::Met => {
                hi = mid;
                best = pt;
            }
            Trial::Short => lo = mid,
            Trial::Overshoot => hi = mid,
        }
    }
    best.iterations = spent;
    Search::Satisfied(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trial {
    Met,
    Short,
    Overshoot,
}

fn constrained(problem: &Problem, d_bound: f64, e_bound: f64, cfg: &SolverConfig) -> Result<RdcPoint> {
    check_bound("distortion", d_bound)?;
    check_bound("classification error", e_bound)?;
    cfg.validate()?;

    let tol = cfg.constraint_tol;
    let min_d = problem.min_distortion();
    if d_bound + tol < min_d {
        return Err(RdcError::Infeasible(format!(
            "distortion bound {d_bound} is below the minimum achievable {min_d}"
        )));
    }
    if e_bound.is_finite() {
        let reachable = problem
            .min_error_at_distortion(d_bound.max(min_d))
            .unwrap_or(f64::INFINITY);
        if e_bound + tol < reachable {
            return Err(RdcError::Infeasible(format!(
                "classification bound {e_bound} is below the minimum achievable {reachable} at distortion {d_bound}"
            )));
        }
    }

    let inner = |lambda_d: f64| -> (RdcPoint, bool) {
        if e_bound.is_infinite() {
            return (problem.lagrangian(lambda_d, 0.0, cfg), true);
        }
        match bisect_multiplier(
            e_bound,
            cfg,
            |pt| pt.class_error,
            |lambda_e| (problem.lagrangian(lambda_d, lambda_e, cfg), true),
        ) {
            Search::Satisfied(pt) => (pt, true),
            Search::Unreachable(pt) => {
                let ok = pt.class_error <= e_bound + tol;
                (pt, ok)
            }
        }
    };

    let point = if d_bound.is_infinite() {
        let (pt, ok) = inner(0.0);
        if !ok {
            return Err(infeasible(&pt, d_bound, e_bound));
        }
        pt
    } else {
        match bisect_multiplier(d_bound, cfg, |pt| pt.distortion, inner) {
            Search::Satisfied(pt) => pt,
            Search::Unreachable(pt) => {
                if pt.distortion <= d_bound + tol && pt.class_error <= e_bound + tol {
                    pt
                } else {
                    return Err(infeasible(&pt, d_bound, e_bound));
                }
            }
        }
    };
    Ok(point)
}

fn infeasible(pt: &RdcPoint, d_bound: f64, e_bound: f64) -> RdcError {
    RdcError::Infeasible(format!(
        "bounds (D = {d_bound}, E = {e_bound}) not met; closest point has distortion {} and error {}",
        pt.distortion, pt.class_error
    ))
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.iter().any(|v| v.is_nan() || *v < 0.0) {
        return Err(RdcError::InvalidArgument(format!(
            "{name} grid must be nonnegative"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RdcError::InvalidArgument(format!(
            "{name} grid must be strictly increasing"
        )));
    }
    Ok(())
}

/// Solves every `(D, E)` cell of the grid. Per-cell failures are recorded on
/// the cell; cells are returned in row-major order with `D` outer.
pub fn sweep_surface(
    problem: &Problem,
    d_grid: &[f64],
    e_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<RdcSurface> {
    check_grid("distortion", d_grid)?;
    check_grid("classification", e_grid)?;
    cfg.validate()?;
    let cells: Vec<(f64, f64)> = d_grid
        .iter()
        .flat_map(|&d| e_grid.iter().map(move |&e| (d, e)))
        .collect();
    let points = cells
        .par_iter()
        .map(|&(d, e)| match constrained(problem, d, e, cfg) {
            Ok(pt) => SurfaceCell::solved(d, e, &pt),
            Err(RdcError::Infeasible(_)) => SurfaceCell::unsolved(d, e, CellStatus::Infeasible),
            Err(_) => SurfaceCell::unsolved(d, e, CellStatus::NotConverged),
        })
        .collect();
    RdcSurface::new(d_grid.to_vec(), e_grid.to_vec(), points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info_theory::binary_entropy;

    fn bern_problem(p: f64) -> Problem {
        Problem::new(
            MixtureSource::bernoulli_class_symbol(p).unwrap(),
            DistortionMeasure::hamming(2),
            BinaryClassifier::new(2, [0]).unwrap(),
        )
        .unwrap()
    }

    fn rd(p: f64, d: f64) -> f64 {
        if d >= p {
            0.0
        } else {
            binary_entropy(p).unwrap() - binary_entropy(d).unwrap()
        }
    }

    #[test]
    fn zero_multipliers_give_zero_rate() {
        let pb = bern_problem(0.3);
        let pt = pb.lagrangian(0.0, 0.0, &SolverConfig::default());
        assert!(pt.converged);
        assert!(pt.rate_bits.abs() < 1e-12);
        let k = pt.channel.unwrap();
        assert_eq!(k.row(0), k.row(1));
    }

    #[test]
    fn large_distortion_multiplier_is_near_lossless() {
        let pb = bern_problem(0.5);
        let pt = pb.lagrangian(1e3, 0.0, &SolverConfig::default());
        assert!((pt.rate_bits - 1.0).abs() < 1e-9);
        assert!(pt.distortion < 1e-9);
    }

    #[test]
    fn lagrangian_sweep_traces_closed_form() {
        let pb = bern_problem(0.5);
        let cfg = SolverConfig::default();
        for lambda in [0.5, 1.0, 2.0, 3.0, 5.0, 8.0] {
            let pt = pb.lagrangian(lambda, 0.0, &cfg);
            assert!(pt.converged);
            let expected = rd(0.5, pt.distortion);
            assert!(
                (pt.rate_bits - expected).abs() < 1e-3,
                "lambda {lambda}: {} vs {expected}",
                pt.rate_bits
            );
        }
    }

    #[test]
    fn lagrangian_is_monotone_over_iterations() {
        let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7]).unwrap();
        let clf = BinaryClassifier::new(2, [0]).unwrap();
        let pb = Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap();
        let cfg = SolverConfig::default();
        let (_, trace) =
            solve_lagrangian_traced(&pb.source, &pb.delta, pb.weights(), 1.3, 4.0, &cfg);
        assert!(trace.len() > 2);
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn constrained_matches_closed_form() {
        let pb = bern_problem(0.5);
        let pt = pb.solve(0.11, f64::INFINITY, &SolverConfig::default()).unwrap();
        assert!((pt.rate_bits - rd(0.5, 0.11)).abs() < 1e-3);
        assert!(pt.distortion <= 0.11 + 1e-4);
    }

    #[test]
    fn distortion_above_p_gives_zero_rate() {
        for p in [0.1, 0.3] {
            let pb = bern_problem(p);
            for d in [p, p + 0.05, 0.9] {
                let pt = pb.solve(d, f64::INFINITY, &SolverConfig::default()).unwrap();
                assert!(pt.rate_bits < 1e-4, "p {p} d {d}: {}", pt.rate_bits);
            }
        }
    }

    #[test]
    fn coincident_constraints_reduce_to_tighter_bound() {
        let pb = bern_problem(0.5);
        let cfg = SolverConfig::default();
        for (d, e) in [(0.05, 0.2), (0.3, 0.1), (0.2, 0.2), (0.4, 0.45)] {
            let both = pb.solve(d, e, &cfg).unwrap();
            let single = pb.solve(f64::min(d, e), f64::INFINITY, &cfg).unwrap();
            assert!((both.rate_bits - single.rate_bits).abs() < 1e-3);
            assert!((both.rate_bits - rd(0.5, f64::min(d, e))).abs() < 1e-3);
        }
    }

    #[test]
    fn infeasible_error_bound() {
        let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7]).unwrap();
        let clf = BinaryClassifier::new(2, [0]).unwrap();
        let pb = Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap();
        // The clean-source Bayes error 0.25 is the floor.
        let err = pb.solve(0.3, 0.2, &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, RdcError::Infeasible(_)));
        assert!((pb.min_error_at_distortion(f64::INFINITY).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infeasible_distortion_bound() {
        let source = MixtureSource::from_vecs(0.5, vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        let delta = DistortionMeasure::new(vec![vec![0.2, 1.0], vec![1.0, 0.3]]).unwrap();
        let pb = Problem::new(source, delta, BinaryClassifier::new(2, [0]).unwrap()).unwrap();
        assert!((pb.min_distortion() - 0.25).abs() < 1e-15);
        assert!(matches!(
            pb.solve(0.1, f64::INFINITY, &SolverConfig::default()),
            Err(RdcError::Infeasible(_))
        ));
    }

    #[test]
    fn bad_bounds_rejected() {
        let pb = bern_problem(0.5);
        let cfg = SolverConfig::default();
        assert!(matches!(
            pb.solve(-1.0, f64::INFINITY, &cfg),
            Err(RdcError::InvalidArgument(_))
        ));
        assert!(matches!(pb.solve(0.1, f64::NAN, &cfg), Err(RdcError::InvalidArgument(_))));
    }

    #[test]
    fn min_error_lp_against_enumeration() {
        // Vertices of the channel polytope are deterministic maps; mixing two
        // of them is enough for a single linear constraint.
        let source = MixtureSource::from_vecs(0.4, vec![0.5, 0.3, 0.2], vec![0.1, 0.2, 0.7]).unwrap();
        let delta = DistortionMeasure::hamming(3);
        let clf = BinaryClassifier::new(3, [0, 1]).unwrap();
        let pb = Problem::new(source.clone(), delta.clone(), clf).unwrap();
        let maps: Vec<Channel> = (0..27)
            .map(|code: usize| {
                let targets = [code % 3, (code / 3) % 3, code / 9];
                Channel::new(
                    targets
                        .iter()
                        .map(|&t| (0..3).map(|j| if j == t { 1.0 } else { 0.0 }).collect())
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let pairs: Vec<(f64, f64)> = maps
            .iter()
            .map(|k| {
                (
                    source.expected_distortion(k, &delta).unwrap(),
                    pb.weights().expected(&source, k),
                )
            })
            .collect();
        for d in [0.0, 0.1, 0.25, 0.4, 0.7] {
            let mut best = f64::INFINITY;
            for &(da, ea) in &pairs {
                for &(db, eb) in &pairs {
                    for i in 0..=200 {
                        let t = i as f64 / 200.0;
                        if t * da + (1.0 - t) * db <= d + 1e-12 {
                            best = best.min(t * ea + (1.0 - t) * eb);
                        }
                    }
                }
            }
            let lp = pb.min_error_at_distortion(d).unwrap();
            assert!(lp <= best + 1e-12, "d {d}: lp {lp} enum {best}");
            assert!(best - lp < 5e-3, "d {d}: lp {lp} enum {best}");
        }
    }

    #[test]
    fn sweep_marks_infeasible_cells() {
        let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7]).unwrap();
        let clf = BinaryClassifier::new(2, [0]).unwrap();
        let pb = Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap();
        let s = sweep_surface(&pb, &[0.1, 0.3], &[0.1, 0.4], &SolverConfig::default()).unwrap();
        assert_eq!(s.cells().len(), 4);
        assert_eq!(s.cell(0, 0).status, CellStatus::Infeasible);
        assert_eq!(s.cell(0, 1).status, CellStatus::Converged);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let pb = bern_problem(0.5);
        let cfg = SolverConfig::default();
        assert!(sweep_surface(&pb, &[0.2, 0.1], &[f64::INFINITY], &cfg).is_err());
        assert!(sweep_surface(&pb, &[-0.1], &[f64::INFINITY], &cfg).is_err());
    }
}
