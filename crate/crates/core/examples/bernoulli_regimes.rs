//! The three regimes of R(·, E) when each class emits a single symbol.
//!
//! cargo run --release --example bernoulli_regimes -- 0.5 0.2

use rdc::bernoulli::locate_regimes;
use rdc::classifier::BinaryClassifier;
use rdc::info_theory::binary_entropy;
use rdc::source_model::{DistortionMeasure, MixtureSource};
use rdc::{Problem, SolverConfig};

fn main() -> rdc::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("numeric argument"));
    let p = args.next().unwrap_or(0.5);
    let e = args.next().unwrap_or(0.2);

    let problem = Problem::new(
        MixtureSource::bernoulli_class_symbol(p)?,
        DistortionMeasure::hamming(2),
        BinaryClassifier::new(2, [0])?,
    )?;
    let r = locate_regimes(&problem, e, &SolverConfig::default())?;

    println!("p = {}, E = {e}", r.p);
    println!("classical curve up to d1 = {:.5}", r.d1);
    match r.plateau_rate_bits {
        Some(level) => {
            println!("plateau at {level:.6} bits until d2 = {}", r.d2);
            if e < r.p {
                println!("H_b(p) - H_b(E) = {:.6}", binary_entropy(r.p)? - binary_entropy(e)?);
            }
        }
        None => println!("the error bound never binds"),
    }
    for s in r.sweep.iter().step_by(20) {
        let rate = s.rate_bits.map_or("infeasible".into(), |v| format!("{v:.5}"));
        println!("  D = {:.4}  R = {rate}", s.d);
    }
    Ok(())
}
