//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! cargo test -p rdc-core --test acceptance

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdc::bernoulli::{locate_regimes, rd_closed_form};
use rdc::classifier::{bayes_region, error_rate, weight_matrix, BinaryClassifier};
use rdc::info_theory::binary_entropy;
use rdc::oracle::{grid_search_rdc, OracleConfig};
use rdc::solver::{solve_constrained, sweep_surface, Problem, SolverConfig};
use rdc::source_model::{Channel, DistortionMeasure, MixtureSource};
use rdc::surface::{check_convexity, check_monotone, ConvexityOptions, RdcSurface};

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn class_symbol(p: f64) -> Problem {
    Problem::new(
        MixtureSource::bernoulli_class_symbol(p).unwrap(),
        DistortionMeasure::hamming(2),
        BinaryClassifier::new(2, [0]).unwrap(),
    )
    .unwrap()
}

fn overlapping() -> Problem {
    let source = MixtureSource::from_vecs(0.5, vec![0.8, 0.2], vec![0.3, 0.7]).unwrap();
    let clf = bayes_region(&source, &Channel::identity(2)).unwrap();
    Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap()
}

fn overlapping_surface(cfg: &SolverConfig) -> RdcSurface {
    // E below the clean Bayes error (0.25) is infeasible everywhere.
    sweep_surface(&overlapping(), &linspace(0.0, 0.5, 20), &linspace(0.255, 0.5, 20), cfg).unwrap()
}

fn closed_form_agreement(cfg: &SolverConfig) -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_tail = 0.0f64;
    let mut failures = 0;
    for p in [0.1, 0.2, 0.3, 0.5] {
        let pb = class_symbol(p);
        for k in 0..20 {
            let d = p * k as f64 / 20.0;
            let pt = match solve_constrained(&pb.source, &pb.delta, &pb.classifier, d, f64::INFINITY, cfg) {
                Ok(pt) => pt,
                Err(_) => {
                    failures += 1;
                    continue;
                }
            };
            worst = worst.max((pt.rate_bits - rd_closed_form(p, d).unwrap()).abs());
        }
        for d in [p, p + 0.05, 0.5, 1.0] {
            match pb.solve(d, f64::INFINITY, cfg) {
                Ok(pt) => worst_tail = worst_tail.max(pt.rate_bits),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        failures == 0 && worst <= 1e-3 && worst_tail < 1e-4,
        format!("max |R - closed form| = {worst:.2e} bits, max rate for D >= p = {worst_tail:.2e} bits, solver errors = {failures}"),
    )
}

fn oracle_equivalence(cfg: &SolverConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (fine, coarse) = (
        OracleConfig { resolution: 400, slack: 1e-4 },
        OracleConfig { resolution: 200, slack: 1e-4 },
    );
    let mut worst_excess = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    let mut cases = 0;
    for s in 0..20 {
        let a: f64 = rng.gen_range(0.05..0.95);
        let b: f64 = rng.gen_range(0.05..0.95);
        let source = MixtureSource::from_vecs(rng.gen_range(0.1..0.9), vec![a, 1.0 - a], vec![b, 1.0 - b]).unwrap();
        let clf = bayes_region(&source, &Channel::identity(2)).unwrap();
        let pb = Problem::new(source, DistortionMeasure::hamming(2), clf).unwrap();
        for _ in 0..5 {
            let d: f64 = rng.gen_range(0.02..0.6);
            let e = pb.min_error_at_distortion(d).unwrap() + rng.gen_range(0.005..0.3);
            cases += 1;
            let solver = pb.solve(d, e, cfg).ok().map(|pt| pt.rate_bits);
            let o400 = grid_search_rdc(&pb, d, e, &fine).unwrap().rate_bits;
            let o200 = grid_search_rdc(&pb, d, e, &coarse).unwrap().rate_bits;
            match (solver, o400) {
                (Some(r), Some(o)) => {
                    let grid_err = o200.map_or(f64::INFINITY, |c| (o - c).abs());
                    let allowed = grid_err.max(1e-2);
                    let gap = (r - o).abs();
                    worst_excess = worst_excess.max(gap - allowed);
                    if gap > allowed {
                        failures.push(format!("source {s} D={d:.4} E={e:.4}: solver {r:.6} oracle {o:.6}"));
                    }
                }
                (None, None) => {}
                (r, o) => failures.push(format!("source {s} D={d:.4} E={e:.4}: solver {r:?} oracle {o:?}")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{cases} cases, worst (gap - allowance) = {worst_excess:.2e} bits{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn monotonicity(cfg: &SolverConfig) -> Outcome {
    let surface = overlapping_surface(cfg);
    let solved = surface.cells().iter().filter(|c| c.is_solved()).count();
    let report = check_monotone(&surface);
    outcome(
        report.passed() && solved == 400,
        format!(
            "{solved}/400 cells solved, {} pairs checked, {} violations",
            report.pairs_checked,
            report.violations.len()
        ),
    )
}

fn convexity(cfg: &SolverConfig) -> Outcome {
    let pb = overlapping();
    let surface = overlapping_surface(cfg);
    let solve = |d: f64, e: f64| pb.solve(d, e, cfg).ok().map(|pt| pt.rate_bits);
    let report = check_convexity(&surface, &ConvexityOptions { pairs: 200, seed: 0 }, Some(&solve));
    outcome(
        report.passed() && report.pairs_checked == 200,
        format!(
            "{} pairs checked ({} midpoint solves), {} violations",
            report.pairs_checked,
            report.midpoint_solves,
            report.violations.len()
        ),
    )
}

fn random_channel(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Channel {
    let rows = (0..n)
        .map(|_| {
            let row: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

fn error_rate_linearity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..6);
        let m = rng.gen_range(2..6);
        let mut pmf = || {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect::<Vec<_>>()
        };
        let (a, b) = (pmf(), pmf());
        let source = MixtureSource::from_vecs(rng.gen_range(0.0..1.0), a, b).unwrap();
        let mask: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        let clf = BinaryClassifier::from_mask(&mask);
        let (k1, k2) = (random_channel(&mut rng, n, m), random_channel(&mut rng, n, m));
        let lambda: f64 = rng.gen_range(0.0..=1.0);
        let blend = Channel::blend(&k1, &k2, lambda).unwrap();
        let lhs = error_rate(&source, &blend, &clf).unwrap();
        let rhs = lambda * error_rate(&source, &k1, &clf).unwrap()
            + (1.0 - lambda) * error_rate(&source, &k2, &clf).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    outcome(worst <= 1e-12, format!("100 draws, max deviation = {worst:.2e}"))
}

fn constraint_coincidence(cfg: &SolverConfig) -> Outcome {
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for p in [0.5, 0.3] {
        let pb = class_symbol(p);
        let w = weight_matrix(&pb.source, &pb.classifier);
        if w.matrix() != pb.delta.matrix() {
            notes.push(format!("p={p}: weight matrix is not Hamming"));
            continue;
        }
        let grid = linspace(0.0, 0.45, 10);
        for &d in &grid {
            for &e in &grid {
                let joint = pb.solve(d, e, cfg).map(|pt| pt.rate_bits);
                let single = pb.solve(d.min(e), f64::INFINITY, cfg).map(|pt| pt.rate_bits);
                match (joint, single) {
                    (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
                    _ => notes.push(format!("p={p} D={d} E={e}: solver error")),
                }
            }
        }
    }
    outcome(
        notes.is_empty() && worst <= 1e-3,
        format!("2 sources x 10x10 grid, max |R(D,E) - R(min,inf)| = {worst:.2e} bits{}", if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }),
    )
}

fn bernoulli_regimes(cfg: &SolverConfig) -> Outcome {
    let expected = 1.0 - binary_entropy(0.2).unwrap();
    match locate_regimes(&class_symbol(0.5), 0.2, cfg) {
        Ok(r) => {
            let plateau: Vec<f64> = r
                .sweep
                .iter()
                .filter(|s| s.d > r.d1 && s.d < r.d2)
                .filter_map(|s| s.rate_bits)
                .collect();
            let spread = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - plateau.iter().copied().fold(f64::INFINITY, f64::min);
            let level = r.plateau_rate_bits.unwrap_or(f64::NAN);
            outcome(
                (r.d1 - 0.2).abs() <= 5e-3 && (level - expected).abs() <= 2e-3 && spread <= 1e-3,
                format!(
                    "d1 = {:.5}, d2 = {}, plateau = {level:.6} (target {expected:.6}), spread = {spread:.2e} over {} samples",
                    r.d1,
                    r.d2,
                    plateau.len()
                ),
            )
        }
        Err(e) => outcome(false, format!("locate_regimes failed: {e}")),
    }
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_rdc")).args(args).output().expect("spawn rdc");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let src = data.join("overlapping.json");
    let src = src.to_str().unwrap();
    let mut mismatches = Vec::new();
    for ext in ["csv", "json"] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("run{run}.{ext}"));
            let (code, _) = run_cli(&[
                "sweep", "--source", src, "--grid-d", "0:0.5:8", "--grid-e", "0.255:0.5:8",
                "--out", path.to_str().unwrap(), "--no-meta",
            ]);
            outputs.push((code, std::fs::read(&path).unwrap_or_default()));
        }
        if outputs[0].0 != 0 || outputs[0] != outputs[1] || outputs[0].1.is_empty() {
            mismatches.push(format!("sweep {ext}"));
        }
    }
    let commands: [&[&str]; 3] = [
        &["solve", "--source", src, "--d", "0.1", "--e", "0.3", "--with-channel"],
        &["bernoulli", "--p", "0.5", "--e", "0.2"],
        &["oracle", "--source", src, "--d", "0.1", "--e", "0.3", "--resolution", "100"],
    ];
    for args in commands {
        let (a, b) = (run_cli(args), run_cli(args));
        if a.0 != 0 || a != b {
            mismatches.push(args[0].to_string());
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "sweep csv/json, solve, bernoulli and oracle outputs byte-identical across runs".into()
        } else {
            format!("differing outputs: {}", mismatches.join(", "))
        },
    )
}

fn main() {
    let cfg = SolverConfig::default();
    let criteria: Vec<Criterion> = vec![
        ("closed-form agreement", Duration::from_secs(10), Box::new(move || closed_form_agreement(&cfg))),
        ("oracle equivalence", Duration::from_secs(120), Box::new(move || oracle_equivalence(&cfg))),
        ("surface monotonicity", Duration::from_secs(60), Box::new(move || monotonicity(&cfg))),
        ("surface convexity", Duration::from_secs(120), Box::new(move || convexity(&cfg))),
        ("error-rate linearity", Duration::from_secs(60), Box::new(error_rate_linearity)),
        ("constraint coincidence", Duration::from_secs(60), Box::new(move || constraint_coincidence(&cfg))),
        ("bernoulli regimes", Duration::from_secs(60), Box::new(move || bernoulli_regimes(&cfg))),
        ("cli determinism", Duration::from_secs(60), Box::new(determinism)),
    ];

    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let ok = o.passed && elapsed <= budget;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{:.2}s / {}s budget]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
