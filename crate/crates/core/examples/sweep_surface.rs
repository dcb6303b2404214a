//! Sweep R(D, E) over a grid and write it as CSV.
//!
//! cargo run --release --example sweep_surface -- surface.csv

use std::path::PathBuf;

use rdc::source_file::SourceSpec;
use rdc::solver::sweep_surface;
use rdc::surface::{export, CellStatus, Format};
use rdc::SolverConfig;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn main() -> rdc::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "surface.csv".into()));
    let spec = SourceSpec::load(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/overlapping.json"))?;
    let problem = spec.to_problem()?;

    let mut e_grid = linspace(0.2, 0.5, 7);
    e_grid.push(f64::INFINITY);
    let surface = sweep_surface(&problem, &linspace(0.0, 0.5, 11), &e_grid, &SolverConfig::default())?;

    for (i, d) in surface.d_grid().iter().enumerate() {
        let row: Vec<String> = (0..surface.e_grid().len())
            .map(|j| {
                let c = surface.cell(i, j);
                match c.status {
                    CellStatus::Infeasible => "     -".into(),
                    _ => format!("{:6.3}", c.rate_bits),
                }
            })
            .collect();
        println!("D={d:.2} {}", row.join(" "));
    }
    export(&surface, &out, Format::Csv, false)?;
    println!("wrote {}", out.display());
    Ok(())
}
