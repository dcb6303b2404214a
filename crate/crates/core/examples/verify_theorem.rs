//! R(D, E) is nonincreasing and convex in both bounds. Check a solved
//! surface for both, solving off-grid midpoints on demand.

use rdc::classifier::bayes_region;
use rdc::solver::sweep_surface;
use rdc::source_model::{Channel, DistortionMeasure, MixtureSource};
use rdc::surface::{check_convexity, check_monotone, ConvexityOptions};
use rdc::{Problem, SolverConfig};

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn main() -> rdc::Result<()> {
    let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7])?;
    let clf = bayes_region(&source, &Channel::identity(2))?;
    let problem = Problem::new(source, DistortionMeasure::hamming(2), clf)?;
    let cfg = SolverConfig::default();

    let surface = sweep_surface(&problem, &linspace(0.0, 0.5, 20), &linspace(0.255, 0.5, 20), &cfg)?;

    let mono = check_monotone(&surface);
    println!(
        "monotone: {} pairs, {} violations (tol {} bits)",
        mono.pairs_checked,
        mono.violations.len(),
        mono.tolerance_bits
    );

    let solve = |d: f64, e: f64| problem.solve(d, e, &cfg).ok().map(|p| p.rate_bits);
    let conv = check_convexity(&surface, &ConvexityOptions::default(), Some(&solve));
    println!(
        "convex: {} pairs, {} midpoints solved, {} violations (tol {} bits)",
        conv.pairs_checked,
        conv.midpoint_solves,
        conv.violations.len(),
        conv.tolerance_bits
    );
    for v in conv.violations.iter().take(5) {
        println!("  {v:?}");
    }
    Ok(())
}
