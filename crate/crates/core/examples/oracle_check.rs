//! Compare the solver with brute-force search over a channel grid.

use rdc::classifier::bayes_region;
use rdc::oracle::{grid_search_rdc, OracleConfig};
use rdc::source_model::{Channel, DistortionMeasure, MixtureSource};
use rdc::{Problem, SolverConfig};

fn main() -> rdc::Result<()> {
    let source = MixtureSource::from_vecs(0.35, vec![0.9, 0.1], vec![0.4, 0.6])?;
    let clf = bayes_region(&source, &Channel::identity(2))?;
    let problem = Problem::new(source, DistortionMeasure::hamming(2), clf)?;
    let cfg = SolverConfig::default();

    println!("{:>6} {:>6} {:>10} {:>10} {:>10}", "D", "E", "solver", "grid 200", "grid 400");
    for d in [0.05, 0.15, 0.3] {
        let floor = problem.min_error_at_distortion(d).expect("finite D is feasible");
        for e in [floor + 0.01, floor + 0.05, f64::INFINITY] {
            let s = problem.solve(d, e, &cfg)?.rate_bits;
            let coarse = grid_search_rdc(&problem, d, e, &OracleConfig { resolution: 200, ..Default::default() })?;
            let fine = grid_search_rdc(&problem, d, e, &OracleConfig { resolution: 400, ..Default::default() })?;
            println!(
                "{d:>6.2} {e:>6.3} {s:>10.5} {:>10.5} {:>10.5}",
                coarse.rate_bits.unwrap_or(f64::NAN),
                fine.rate_bits.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
