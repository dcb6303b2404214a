//! Tabulated `R(D, E)` surfaces, their property checks, and file formats.
//!
//! Floats in exported files use the shortest representation that parses back
//! to the same `f64`, so an export → import → export cycle is byte-stable.
//! Non-finite values are spelled `inf`, `-inf` and `nan`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{RdcError, Result};
use crate::solver::{RdcPoint, SolverConfig};

pub const CSV_HEADER: &str =
    "d_bound,e_bound,rate_bits,distortion,class_error,lambda_d,lambda_e,iterations,converged";

/// Rate increase between neighbouring cells tolerated by [`check_monotone`].
pub const MONOTONE_TOL: f64 = 1e-4;
/// Midpoint slack tolerated by [`check_convexity`].
pub const CONVEXITY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Converged,
    NotConverged,
    Infeasible,
}

impl CellStatus {
    fn as_str(self) -> &'static str {
        match self {
            CellStatus::Converged => "true",
            CellStatus::NotConverged => "false",
            CellStatus::Infeasible => "infeasible",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "true" => Some(CellStatus::Converged),
            "false" => Some(CellStatus::NotConverged),
            "infeasible" => Some(CellStatus::Infeasible),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCell {
    pub d_bound: f64,
    pub e_bound: f64,
    pub rate_bits: f64,
    pub distortion: f64,
    pub class_error: f64,
    pub lambda_d: f64,
    pub lambda_e: f64,
    pub iterations: usize,
    pub status: CellStatus,
}

impl SurfaceCell {
    pub fn solved(d_bound: f64, e_bound: f64, pt: &RdcPoint) -> Self {
        SurfaceCell {
            d_bound,
            e_bound,
            rate_bits: pt.rate_bits,
            distortion: pt.distortion,
            class_error: pt.class_error,
            lambda_d: pt.lambda_d,
            lambda_e: pt.lambda_e,
            iterations: pt.iterations,
            status: if pt.converged {
                CellStatus::Converged
            } else {
                CellStatus::NotConverged
            },
        }
    }

    pub fn unsolved(d_bound: f64, e_bound: f64, status: CellStatus) -> Self {
        SurfaceCell {
            d_bound,
            e_bound,
            rate_bits: f64::NAN,
            distortion: f64::NAN,
            class_error: f64::NAN,
            lambda_d: f64::NAN,
            lambda_e: f64::NAN,
            iterations: 0,
            status,
        }
    }

    /// A cell with a usable rate value.
    pub fn is_solved(&self) -> bool {
        self.status != CellStatus::Infeasible && self.rate_bits.is_finite()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SolverConfig>,
    /// Seconds since the Unix epoch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RdcSurface {
    d_grid: Vec<f64>,
    e_grid: Vec<f64>,
    cells: Vec<SurfaceCell>,
    pub meta: SurfaceMeta,
}

impl RdcSurface {
    pub fn new(d_grid: Vec<f64>, e_grid: Vec<f64>, cells: Vec<SurfaceCell>) -> Result<Self> {
        if cells.len() != d_grid.len() * e_grid.len() {
            return Err(RdcError::Dimension(format!(
                "{} cells for a {}x{} grid",
                cells.len(),
                d_grid.len(),
                e_grid.len()
            )));
        }
        Ok(RdcSurface {
            d_grid,
            e_grid,
            cells,
            meta: SurfaceMeta::default(),
        })
    }

    /// Builds a surface from a rate table (`rates[i][j]` at `d_grid[i]`,
    /// `e_grid[j]`); `NaN` marks an infeasible cell.
    pub fn from_rates(d_grid: Vec<f64>, e_grid: Vec<f64>, rates: &[Vec<f64>]) -> Result<Self> {
        let mut cells = Vec::with_capacity(d_grid.len() * e_grid.len());
        for (i, &d) in d_grid.iter().enumerate() {
            for (j, &e) in e_grid.iter().enumerate() {
                let r = rates
                    .get(i)
                    .and_then(|row| row.get(j))
                    .copied()
                    .ok_or_else(|| RdcError::Dimension("rate table too small".into()))?;
                let mut cell = SurfaceCell::unsolved(d, e, CellStatus::Infeasible);
                if !r.is_nan() {
                    cell.rate_bits = r;
                    cell.status = CellStatus::Converged;
                }
                cells.push(cell);
            }
        }
        RdcSurface::new(d_grid, e_grid, cells)
    }

    pub fn d_grid(&self) -> &[f64] {
        &self.d_grid
    }

    pub fn e_grid(&self) -> &[f64] {
        &self.e_grid
    }

    pub fn cells(&self) -> &[SurfaceCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize, j: usize) -> &SurfaceCell {
        &self.cells[i * self.e_grid.len() + j]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut SurfaceCell {
        let ne = self.e_grid.len();
        &mut self.cells[i * ne + j]
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    D,
    E,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneViolation {
    pub axis: Axis,
    pub from: [usize; 2],
    pub to: [usize; 2],
    pub rate_from: f64,
    pub rate_to: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub tolerance_bits: f64,
    pub pairs_checked: usize,
    pub violations: Vec<MonotoneViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags every neighbouring pair (growing `D` or growing `E`) where the rate
/// rises by more than [`MONOTONE_TOL`]. Unsolved cells are skipped.
pub fn check_monotone(surface: &RdcSurface) -> MonotonicityReport {
    let (nd, ne) = (surface.d_grid.len(), surface.e_grid.len());
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    let mut visit = |axis: Axis, a: [usize; 2], b: [usize; 2]| {
        let (ca, cb) = (surface.cell(a[0], a[1]), surface.cell(b[0], b[1]));
        if !(ca.is_solved() && cb.is_solved()) {
            return;
        }
        pairs_checked += 1;
        if cb.rate_bits > ca.rate_bits + MONOTONE_TOL {
            violations.push(MonotoneViolation {
                axis,
                from: a,
                to: b,
                rate_from: ca.rate_bits,
                rate_to: cb.rate_bits,
            });
        }
    };
    for i in 0..nd {
        for j in 0..ne {
            if i + 1 < nd {
                visit(Axis::D, [i, j], [i + 1, j]);
            }
            if j + 1 < ne {
                visit(Axis::E, [i, j], [i, j + 1]);
            }
        }
    }
    MonotonicityReport {
        tolerance_bits: MONOTONE_TOL,
        pairs_checked,
        violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityOptions {
    pub pairs: usize,
    pub seed: u64,
}

impl Default for ConvexityOptions {
    fn default() -> Self {
        ConvexityOptions { pairs: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityViolation {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub mid_d: f64,
    pub mid_e: f64,
    pub rate_mid: f64,
    pub chord: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub tolerance_bits: f64,
    pub pairs_checked: usize,
    /// Pairs whose midpoint is off-grid and no midpoint solver was supplied.
    pub pairs_skipped: usize,
    pub midpoint_solves: usize,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Midpoint of two bounds; an infinite bound stays infinite.
fn midpoint(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        f64::INFINITY
    } else {
        0.5 * (a + b)
    }
}

fn grid_index(grid: &[f64], v: f64) -> Option<usize> {
    grid.iter().position(|&g| {
        if g.is_infinite() || v.is_infinite() {
            g == v
        } else {
            (g - v).abs() <= 1e-12 * g.abs().max(1.0)
        }
    })
}

/// Midpoint-convexity check over randomly sampled pairs of solved cells.
///
/// Midpoints that fall on the grid are read from the surface; the rest are
/// computed with `midpoint_rate` when given, otherwise skipped. A midpoint the
/// solver cannot satisfy counts as a violation: the feasible set is convex.
pub fn check_convexity(
    surface: &RdcSurface,
    opts: &ConvexityOptions,
    midpoint_rate: Option<&(dyn Fn(f64, f64) -> Option<f64> + Sync)>,
) -> ConvexityReport {
    let ne = surface.e_grid.len();
    let solved: Vec<usize> = (0..surface.cells.len())
        .filter(|&k| surface.cells[k].is_solved())
        .collect();

    let mut all_pairs = Vec::new();
    for (x, &a) in solved.iter().enumerate() {
        for &b in &solved[x + 1..] {
            all_pairs.push((a, b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let chosen: Vec<(usize, usize)> = if all_pairs.len() <= opts.pairs {
        all_pairs
    } else {
        let mut picked = Vec::with_capacity(opts.pairs);
        let mut seen = std::collections::HashSet::new();
        while picked.len() < opts.pairs {
            let pair = all_pairs[rng.gen_range(0..all_pairs.len())];
            if seen.insert(pair) {
                picked.push(pair);
            }
        }
        picked.shuffle(&mut rng);
        picked
    };

    let mut report = ConvexityReport {
        tolerance_bits: CONVEXITY_TOL,
        pairs_checked: 0,
        pairs_skipped: 0,
        midpoint_solves: 0,
        violations: Vec::new(),
    };
    for (a, b) in chosen {
        let (ca, cb) = (&surface.cells[a], &surface.cells[b]);
        let mid_d = midpoint(ca.d_bound, cb.d_bound);
        let mid_e = midpoint(ca.e_bound, cb.e_bound);
        let on_grid = grid_index(&surface.d_grid, mid_d)
            .zip(grid_index(&surface.e_grid, mid_e))
            .map(|(i, j)| surface.cell(i, j));
        let rate_mid = match (on_grid, midpoint_rate) {
            (Some(cell), _) => {
                if cell.is_solved() {
                    cell.rate_bits
                } else {
                    f64::NAN
                }
            }
            (None, Some(solve)) => {
                report.midpoint_solves += 1;
                solve(mid_d, mid_e).unwrap_or(f64::NAN)
            }
            (None, None) => {
                report.pairs_skipped += 1;
                continue;
            }
        };
        report.pairs_checked += 1;
        let chord = 0.5 * (ca.rate_bits + cb.rate_bits);
        if rate_mid.is_nan() || rate_mid > chord + CONVEXITY_TOL {
            report.violations.push(ConvexityViolation {
                a: [a / ne, a % ne],
                b: [b / ne, b % ne],
                mid_d,
                mid_e,
                rate_mid,
                chord,
            });
        }
    }
    report
}

/// Shortest round-trip representation; `inf`, `-inf`, `nan` otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

pub fn parse_float(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok().filter(|v: &f64| v.is_finite()),
    }
}

fn float_value(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(format_float(v))
    }
}

fn value_float(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_float(s),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` selects JSON; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn to_csv(surface: &RdcSurface) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in &surface.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_float(c.d_bound),
            format_float(c.e_bound),
            format_float(c.rate_bits),
            format_float(c.distortion),
            format_float(c.class_error),
            format_float(c.lambda_d),
            format_float(c.lambda_e),
            c.iterations,
            c.status.as_str()
        );
    }
    out
}

/// JSON document; metadata is omitted entirely when `with_meta` is false.
pub fn to_json(surface: &RdcSurface, with_meta: bool) -> String {
    let mut doc = Map::new();
    if with_meta {
        doc.insert(
            "metadata".into(),
            serde_json::to_value(&surface.meta).unwrap_or(Value::Null),
        );
    }
    doc.insert(
        "d_grid".into(),
        Value::Array(surface.d_grid.iter().map(|&v| float_value(v)).collect()),
    );
    doc.insert(
        "e_grid".into(),
        Value::Array(surface.e_grid.iter().map(|&v| float_value(v)).collect()),
    );
    let cells = surface
        .cells
        .iter()
        .map(|c| {
            json!({
                "d_bound": float_value(c.d_bound),
                "e_bound": float_value(c.e_bound),
                "rate_bits": float_value(c.rate_bits),
                "distortion": float_value(c.distortion),
                "class_error": float_value(c.class_error),
                "lambda_d": float_value(c.lambda_d),
                "lambda_e": float_value(c.lambda_e),
                "iterations": c.iterations,
                "converged": c.status.as_str(),
            })
        })
        .collect();
    doc.insert("cells".into(), Value::Array(cells));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).unwrap_or_default();
    s.push('\n');
    s
}

pub fn export(surface: &RdcSurface, path: &Path, format: Format, with_meta: bool) -> Result<()> {
    let body = match format {
        Format::Csv => to_csv(surface),
        Format::Json => to_json(surface, with_meta),
    };
    fs::write(path, body).map_err(|e| RdcError::io(path, e))
}

pub fn import(path: &Path) -> Result<RdcSurface> {
    let text = fs::read_to_string(path).map_err(|e| RdcError::io(path, e))?;
    match Format::from_path(path) {
        Format::Csv => from_csv(&text).map_err(|m| RdcError::parse(path, m)),
        Format::Json => from_json(&text).map_err(|m| RdcError::parse(path, m)),
    }
}

fn assemble(cells: Vec<SurfaceCell>) -> std::result::Result<RdcSurface, String> {
    let mut d_grid: Vec<f64> = Vec::new();
    for c in &cells {
        if d_grid.last().is_none_or(|&d| d.to_bits() != c.d_bound.to_bits()) {
            d_grid.push(c.d_bound);
        }
    }
    let ne = if d_grid.is_empty() {
        0
    } else {
        cells.len() / d_grid.len()
    };
    let e_grid: Vec<f64> = cells.iter().take(ne).map(|c| c.e_bound).collect();
    for (k, c) in cells.iter().enumerate() {
        let (i, j) = (k / ne.max(1), k % ne.max(1));
        if c.d_bound.to_bits() != d_grid[i].to_bits() || c.e_bound.to_bits() != e_grid[j].to_bits()
        {
            return Err(format!("row {} breaks the row-major grid layout", k + 1));
        }
    }
    RdcSurface::new(d_grid, e_grid, cells).map_err(|e| e.to_string())
}

pub fn from_csv(text: &str) -> std::result::Result<RdcSurface, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(format!("unexpected header: {}", header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut cells = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let field = |k: usize| -> std::result::Result<f64, String> {
            parse_float(&rec[k]).ok_or_else(|| format!("row {}: bad number {:?}", row + 1, &rec[k]))
        };
        cells.push(SurfaceCell {
            d_bound: field(0)?,
            e_bound: field(1)?,
            rate_bits: field(2)?,
            distortion: field(3)?,
            class_error: field(4)?,
            lambda_d: field(5)?,
            lambda_e: field(6)?,
            iterations: rec[7]
                .parse()
                .map_err(|_| format!("row {}: bad iteration count", row + 1))?,
            status: CellStatus::parse(&rec[8])
                .ok_or_else(|| format!("row {}: bad status {:?}", row + 1, &rec[8]))?,
        });
    }
    assemble(cells)
}

pub fn from_json(text: &str) -> std::result::Result<RdcSurface, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let cells = doc
        .get("cells")
        .and_then(Value::as_array)
        .ok_or("missing cells array")?;
    let mut out = Vec::with_capacity(cells.len());
    for (k, c) in cells.iter().enumerate() {
        let num = |name: &str| -> std::result::Result<f64, String> {
            c.get(name)
                .and_then(value_float)
                .ok_or_else(|| format!("cell {k}: bad {name}"))
        };
        out.push(SurfaceCell {
            d_bound: num("d_bound")?,
            e_bound: num("e_bound")?,
            rate_bits: num("rate_bits")?,
            distortion: num("distortion")?,
            class_error: num("class_error")?,
            lambda_d: num("lambda_d")?,
            lambda_e: num("lambda_e")?,
            iterations: c
                .get("iterations")
                .and_then(Value::as_u64)
                .ok_or_else(|| format!("cell {k}: bad iterations"))? as usize,
            status: c
                .get("converged")
                .and_then(Value::as_str)
                .and_then(CellStatus::parse)
                .ok_or_else(|| format!("cell {k}: bad converged"))?,
        });
    }
    let mut surface = assemble(out)?;
    if let Some(meta) = doc.get("metadata") {
        surface.meta = serde_json::from_value(meta.clone()).map_err(|e| e.to_string())?;
    }
    Ok(surface)
}
