//! Regime structure of R(D, E) on binary sources, cross-checked against the
//! brute-force oracle where no closed form exists.

use rdc::bernoulli::{locate_regimes, rd_closed_form};
use rdc::classifier::{bayes_region, BinaryClassifier};
use rdc::oracle::{grid_search_rdc, OracleConfig};
use rdc::solver::{Problem, SolverConfig};
use rdc::source_model::{Channel, DistortionMeasure, MixtureSource};

fn overlapping() -> Problem {
    let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7]).unwrap();
    let clf = bayes_region(&source, &Channel::identity(2)).unwrap();
    Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap()
}

#[test]
fn overlapping_source_has_a_plateau_matching_the_oracle() {
    let pb = overlapping();
    let cfg = SolverConfig::default();
    let r = locate_regimes(&pb, 0.26, &cfg).unwrap();
    assert!((r.p - 0.45).abs() < 1e-12);
    assert!(r.d1 > 0.0 && r.d1 < r.p);
    let plateau = r.plateau_rate_bits.unwrap();

    let oracle = OracleConfig { resolution: 400, slack: 1e-4 };
    for d in [0.3, 0.4] {
        let o = grid_search_rdc(&pb, d, 0.26, &oracle).unwrap().rate_bits.unwrap();
        assert!((o - plateau).abs() < 1e-2, "D={d}: oracle {o} plateau {plateau}");
    }
    // Below d1 the classification bound is slack.
    let below = pb.solve(r.d1 * 0.5, 0.26, &cfg).unwrap();
    assert!((below.rate_bits - rd_closed_form(0.45, r.d1 * 0.5).unwrap()).abs() < 1e-3);
    assert!(below.class_error <= 0.26 + 1e-4);
}

#[test]
fn loose_classification_bound_leaves_the_classical_curve() {
    let pb = overlapping();
    let cfg = SolverConfig::default();
    for d in [0.0, 0.05, 0.1, 0.2, 0.3, 0.44] {
        let a = pb.solve(d, 1.0, &cfg).unwrap().rate_bits;
        let b = pb.solve(d, f64::INFINITY, &cfg).unwrap().rate_bits;
        assert!((a - b).abs() < 1e-6, "D={d}");
        assert!((a - rd_closed_form(0.45, d).unwrap()).abs() < 1e-3, "D={d}");
    }
}

#[test]
fn error_bound_above_p_never_binds() {
    // Class error equals Hamming distortion here, so E >= p is implied by D <= p.
    let pb = Problem::new(
        MixtureSource::bernoulli_class_symbol(0.3).unwrap(),
        DistortionMeasure::hamming(2),
        BinaryClassifier::new(2, [0]).unwrap(),
    )
    .unwrap();
    let r = locate_regimes(&pb, 0.35, &SolverConfig::default()).unwrap();
    assert!((r.d1 - 0.3).abs() < 1e-12);
    assert!(r.plateau_rate_bits.is_none());
}

#[test]
fn infeasible_bound_is_reported() {
    let pb = overlapping();
    assert!(locate_regimes(&pb, 0.2, &SolverConfig::default()).is_err());
    let o = grid_search_rdc(&pb, 0.3, 0.2, &OracleConfig::default()).unwrap();
    assert!(o.rate_bits.is_none());
}
