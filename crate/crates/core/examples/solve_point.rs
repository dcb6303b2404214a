//! Solve one (D, E) point and show the optimal channel.
//!
//! cargo run --example solve_point

use rdc::classifier::{bayes_region, error_rate};
use rdc::source_model::{Channel, DistortionMeasure, MixtureSource};
use rdc::{Problem, SolverConfig};

fn main() -> rdc::Result<()> {
    // Two overlapping classes; the clean Bayes error is 0.25.
    let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7])?;
    let clf = bayes_region(&source, &Channel::identity(2))?;
    let problem = Problem::new(source, DistortionMeasure::hamming(2), clf)?;
    let cfg = SolverConfig::default();

    for (d, e) in [(0.1, f64::INFINITY), (0.1, 0.28), (0.3, 0.26)] {
        let pt = problem.solve(d, e, &cfg)?;
        let k = pt.channel.as_ref().expect("solver returns its channel");
        println!("D <= {d}, E <= {e}");
        println!("  rate       {:.6} bits", pt.rate_bits);
        println!("  distortion {:.6}", pt.distortion);
        println!("  error      {:.6}", error_rate(&problem.source, k, &problem.classifier)?);
        println!("  multipliers lambda_d = {:.4}, lambda_e = {:.4}", pt.lambda_d, pt.lambda_e);
        for row in k.to_rows() {
            println!("  {:?}", row.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
        }
    }

    match problem.solve(0.1, 0.2, &cfg) {
        Err(e) => println!("E = 0.2: {e}"),
        Ok(_) => unreachable!("0.2 is below the Bayes error"),
    }
    Ok(())
}
