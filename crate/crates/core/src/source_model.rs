//! Two-class mixture sources, distortion measures and channels.

use crate::error::{RdcError, Result};
use crate::info_theory::{Pmf, INPUT_TOL};

/// A discrete source drawn from one of two classes with fixed priors.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSource {
    prior1: f64,
    prior2: f64,
    p_x1: Pmf,
    p_x2: Pmf,
    marginal: Vec<f64>,
}

impl MixtureSource {
    pub fn new(prior1: f64, p_x1: Pmf, p_x2: Pmf) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior1) {
            return Err(RdcError::InvalidDistribution(format!(
                "prior {prior1} outside [0, 1]"
            )));
        }
        if p_x1.len() != p_x2.len() {
            return Err(RdcError::Dimension(format!(
                "class-conditional pmfs have {} and {} symbols",
                p_x1.len(),
                p_x2.len()
            )));
        }
        let prior2 = 1.0 - prior1;
        let marginal = p_x1
            .probs()
            .iter()
            .zip(p_x2.probs())
            .map(|(a, b)| prior1 * a + prior2 * b)
            .collect();
        Ok(MixtureSource {
            prior1,
            prior2,
            p_x1,
            p_x2,
            marginal,
        })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_vecs(prior1: f64, p_x1: Vec<f64>, p_x2: Vec<f64>) -> Result<Self> {
        Self::new(prior1, Pmf::new(p_x1)?, Pmf::new(p_x2)?)
    }

    /// Bern(p) over `{0, 1}` where each symbol is its own class:
    /// class 1 emits 0, class 2 emits 1, and `P(X = 1) = p`.
    pub fn bernoulli_class_symbol(p: f64) -> Result<Self> {
        Self::from_vecs(1.0 - p, vec![1.0, 0.0], vec![0.0, 1.0])
    }

    pub fn symbols(&self) -> usize {
        self.p_x1.len()
    }

    pub fn prior1(&self) -> f64 {
        self.prior1
    }

    pub fn prior2(&self) -> f64 {
        self.prior2
    }

    pub fn class1(&self) -> &Pmf {
        &self.p_x1
    }

    pub fn class2(&self) -> &Pmf {
        &self.p_x2
    }

    pub fn marginal_probs(&self) -> &[f64] {
        &self.marginal
    }

    pub fn marginal(&self) -> Pmf {
        Pmf::from_derived(self.marginal.clone())
    }

    /// Symbols with positive marginal probability; the rest never enter the
    /// solver.
    pub fn retained(&self) -> impl Iterator<Item = usize> + '_ {
        self.marginal
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(x, _)| x)
    }

    pub fn propagate(&self, channel: &Channel) -> Result<Propagated> {
        self.check_channel(channel)?;
        let class1 = channel.push_forward(self.p_x1.probs());
        let class2 = channel.push_forward(self.p_x2.probs());
        let mixture = class1
            .iter()
            .zip(&class2)
            .map(|(a, b)| self.prior1 * a + self.prior2 * b)
            .collect();
        Ok(Propagated {
            class1,
            class2,
            mixture,
        })
    }

    pub fn expected_distortion(&self, channel: &Channel, delta: &DistortionMeasure) -> Result<f64> {
        self.check_channel(channel)?;
        if delta.inputs() != self.symbols() || delta.outputs() != channel.outputs() {
            return Err(RdcError::Dimension(format!(
                "distortion is {}x{}, channel is {}x{}",
                delta.inputs(),
                delta.outputs(),
                channel.inputs(),
                channel.outputs()
            )));
        }
        Ok(bilinear(&self.marginal, channel, delta.matrix()))
    }

    pub(crate) fn check_channel(&self, channel: &Channel) -> Result<()> {
        if channel.inputs() != self.symbols() {
            return Err(RdcError::Dimension(format!(
                "channel has {} rows, source has {} symbols",
                channel.inputs(),
                self.symbols()
            )));
        }
        Ok(())
    }
}

/// `Σ_x p(x) Σ_x̂ k[x][x̂] a[x][x̂]`, the form shared by distortion and
/// classification error.
pub(crate) fn bilinear(p: &[f64], channel: &Channel, a: &Matrix) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(_, &px)| px > 0.0)
        .map(|(x, &px)| {
            let row: f64 = channel.row(x).iter().zip(a.row(x)).map(|(k, a)| k * a).sum();
            px * row
        })
        .sum()
}

/// Class-conditional and mixed output distributions after a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagated {
    pub class1: Vec<f64>,
    pub class2: Vec<f64>,
    pub mixture: Vec<f64>,
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(RdcError::Dimension("matrix must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(RdcError::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
}

/// Pairwise distortion `Δ(x, x̂)`; `n` source rows by `m` reconstruction
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMeasure(Matrix);

impl DistortionMeasure {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if m.data.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(RdcError::InvalidArgument(
                "distortion entries must be finite and nonnegative".into(),
            ));
        }
        Ok(DistortionMeasure(m))
    }

    pub fn hamming(n: usize) -> Self {
        DistortionMeasure(Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 }))
    }

    pub fn inputs(&self) -> usize {
        self.0.rows
    }

    pub fn outputs(&self) -> usize {
        self.0.cols
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Row-stochastic matrix `k[x][x̂] = p(x̂ | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel(Matrix);

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        for (x, row) in m.data.chunks(m.cols).enumerate() {
            if row.iter().any(|k| !k.is_finite() || *k < 0.0) {
                return Err(RdcError::InvalidDistribution(format!(
                    "channel row {x} has a negative or non-finite entry"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > INPUT_TOL {
                return Err(RdcError::InvalidDistribution(format!(
                    "channel row {x} sums to {s}"
                )));
            }
        }
        Ok(Channel(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        Channel(m)
    }

    pub fn identity(n: usize) -> Self {
        Channel(Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 }))
    }

    /// Every row equal to `q`.
    pub fn constant(n: usize, q: &Pmf) -> Self {
        Channel(Matrix::from_fn(n, q.len(), |_, j| q[j]))
    }

    pub fn uniform(n: usize, m: usize) -> Self {
        Channel(Matrix::from_fn(n, m, |_, _| 1.0 / m as f64))
    }

    pub fn inputs(&self) -> usize {
        self.0.rows
    }

    pub fn outputs(&self) -> usize {
        self.0.cols
    }

    pub fn row(&self, x: usize) -> &[f64] {
        self.0.row(x)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.to_rows()
    }

    /// `λ·a + (1-λ)·b`.
    pub fn blend(a: &Channel, b: &Channel, lambda: f64) -> Result<Channel> {
        if a.0.rows != b.0.rows || a.0.cols != b.0.cols {
            return Err(RdcError::Dimension("blended channels differ in shape".into()));
        }
        let data = a
            .0
            .data
            .iter()
            .zip(&b.0.data)
            .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
            .collect();
        Ok(Channel(Matrix {
            rows: a.0.rows,
            cols: a.0.cols,
            data,
        }))
    }

    /// Output distribution `Σ_x p(x) k[x][·]`.
    pub fn push_forward(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.outputs()];
        for (x, &px) in p.iter().enumerate() {
            for (o, &k) in out.iter_mut().zip(self.row(x)) {
                *o += px * k;
            }
        }
        out
    }

    pub fn max_row_error(&self) -> f64 {
        self.0
            .data
            .chunks(self.0.cols)
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
