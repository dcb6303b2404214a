//! Classical rate-distortion curve of Bern(p) under Hamming distortion,
//! solved numerically and printed next to `H_b(p) - H_b(D)`.
//!
//! cargo run --example closed_form_curve -- 0.3

use rdc::bernoulli::rd_closed_form;
use rdc::classifier::BinaryClassifier;
use rdc::source_model::{DistortionMeasure, MixtureSource};
use rdc::{Problem, SolverConfig};

fn main() -> rdc::Result<()> {
    let p: f64 = std::env::args().nth(1).map_or(0.3, |s| s.parse().expect("p must be a number"));
    let problem = Problem::new(
        MixtureSource::bernoulli_class_symbol(p)?,
        DistortionMeasure::hamming(2),
        BinaryClassifier::new(2, [0])?,
    )?;
    let cfg = SolverConfig::default();

    println!("{:>8} {:>12} {:>12} {:>10}", "D", "solver", "closed", "|diff|");
    for k in 0..=12 {
        let d = 0.6 * k as f64 / 12.0;
        let pt = problem.solve(d, f64::INFINITY, &cfg)?;
        let cf = rd_closed_form(p.min(1.0 - p), d)?;
        println!("{d:>8.3} {:>12.6} {cf:>12.6} {:>10.2e}", pt.rate_bits, (pt.rate_bits - cf).abs());
    }
    Ok(())
}
