//! Entropy and mutual-information kernels.
//!
//! Every quantity leaving this module is in bits. The `0·log 0` and `0/0`
//! terms inside the sums are taken as zero.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{RdcError, Result};
use crate::source_model::Channel;

/// Tolerance applied to user-supplied distributions.
pub const INPUT_TOL: f64 = 1e-10;

/// A probability mass function over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf(Vec<f64>);

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(RdcError::InvalidDistribution("empty pmf".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(RdcError::InvalidDistribution(format!(
                "entry {bad} is negative or non-finite"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > INPUT_TOL {
            return Err(RdcError::InvalidDistribution(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        Ok(Pmf(probs))
    }

    /// Wraps internally derived probabilities without re-validating them.
    pub(crate) fn from_derived(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Pmf(probs)
    }

    pub fn uniform(n: usize) -> Self {
        Pmf(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for Pmf {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = RdcError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Vec<f64> {
        p.0
    }
}

/// `-p log2 p` with the continuity convention at zero.
#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(RdcError::InvalidArgument(format!(
            "binary entropy argument {alpha} outside [0, 1]"
        )));
    }
    Ok(plogp(alpha) + plogp(1.0 - alpha))
}

pub fn entropy(p: &Pmf) -> f64 {
    p.probs().iter().map(|&x| plogp(x)).sum()
}

/// Mutual information in nats between `p_x` and the output of `channel`.
///
/// Rows of zero-probability inputs never contribute.
pub(crate) fn mutual_information_nats(p_x: &[f64], channel: &Channel) -> f64 {
    let m = channel.outputs();
    let mut q = vec![0.0; m];
    for (x, &px) in p_x.iter().enumerate() {
        if px > 0.0 {
            for (qy, &k) in q.iter_mut().zip(channel.row(x)) {
                *qy += px * k;
            }
        }
    }
    let mut info = 0.0;
    for (x, &px) in p_x.iter().enumerate() {
        if px <= 0.0 {
            continue;
        }
        let row_sum: f64 = channel
            .row(x)
            .iter()
            .zip(&q)
            .filter(|(&k, &qy)| k > 0.0 && qy > 0.0)
            .map(|(&k, &qy)| k * (k / qy).ln())
            .sum();
        info += px * row_sum;
    }
    info.max(0.0)
}

pub fn mutual_information(p_x: &Pmf, channel: &Channel) -> Result<f64> {
    if p_x.len() != channel.inputs() {
        return Err(RdcError::Dimension(format!(
            "pmf has {} symbols but channel has {} rows",
            p_x.len(),
            channel.inputs()
        )));
    }
    Ok(mutual_information_nats(p_x.probs(), channel) / LN_2)
}
