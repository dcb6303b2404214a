//! Ternary source with an explicit distortion matrix and an extra
//! "erasure" reconstruction symbol.

use rdc::classifier::BinaryClassifier;
use rdc::source_model::{DistortionMeasure, MixtureSource};
use rdc::{Problem, SolverConfig};

fn main() -> rdc::Result<()> {
    let source = MixtureSource::from_vecs(0.4, vec![0.6, 0.3, 0.1], vec![0.1, 0.3, 0.6])?;
    // Columns 0..2 reproduce a symbol; column 3 is an erasure costing 0.5.
    let delta = DistortionMeasure::new(vec![
        vec![0.0, 1.0, 1.0, 0.5],
        vec![1.0, 0.0, 1.0, 0.5],
        vec![1.0, 1.0, 0.0, 0.5],
    ])?;
    // Symbol 0 and the erasure are read as class 1.
    let problem = Problem::new(source, delta, BinaryClassifier::new(4, [0, 3])?)?;
    let cfg = SolverConfig::default();

    println!("min distortion {:.4}", problem.min_distortion());
    for d in [0.2, 0.4, 0.6] {
        let floor = problem.min_error_at_distortion(d).expect("feasible");
        println!("D = {d}: smallest reachable error {floor:.4}");
        for e in [floor + 0.02, floor + 0.1] {
            let pt = problem.solve(d, e, &cfg)?;
            println!("  E = {e:.4}: R = {:.5} bits (D' = {:.4}, E' = {:.4})", pt.rate_bits, pt.distortion, pt.class_error);
        }
    }
    Ok(())
}
