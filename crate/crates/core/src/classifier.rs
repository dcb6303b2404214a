//! The fixed binary classifier applied to reconstructions and its error rate.
//!
//! A classifier is an acceptance region over the reconstruction alphabet:
//! symbols inside the region are labelled class 1, everything else class 2.
//! Because the error rate is linear in the channel it can be rewritten as an
//! expected "distortion" under a per-pair weight matrix, which is how the
//! solver consumes it.

use serde::{Deserialize, Serialize};

use crate::error::{RdcError, Result};
use crate::source_model::{bilinear, Channel, Matrix, MixtureSource};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryClassifier {
    outputs: usize,
    region: Vec<usize>,
}

impl BinaryClassifier {
    pub fn new(outputs: usize, region: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut region: Vec<usize> = region.into_iter().collect();
        region.sort_unstable();
        region.dedup();
        if let Some(&bad) = region.iter().find(|&&i| i >= outputs) {
            return Err(RdcError::InvalidArgument(format!(
                "region index {bad} outside reconstruction alphabet of size {outputs}"
            )));
        }
        Ok(BinaryClassifier { outputs, region })
    }

    /// Region given as a membership mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        BinaryClassifier {
            outputs: mask.len(),
            region: mask
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn region(&self) -> &[usize] {
        &self.region
    }

    pub fn accepts(&self, symbol: usize) -> bool {
        self.region.binary_search(&symbol).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        (0..self.outputs).map(|i| self.accepts(i)).collect()
    }

    fn check(&self, channel: &Channel) -> Result<()> {
        if channel.outputs() != self.outputs {
            return Err(RdcError::Dimension(format!(
                "classifier covers {} symbols, channel outputs {}",
                self.outputs,
                channel.outputs()
            )));
        }
        Ok(())
    }
}

/// Probability that the classifier mislabels the reconstruction.
pub fn error_rate(
    source: &MixtureSource,
    channel: &Channel,
    clf: &BinaryClassifier,
) -> Result<f64> {
    clf.check(channel)?;
    let out = source.propagate(channel)?;
    let mut err = 0.0;
    for y in 0..clf.outputs {
        if clf.accepts(y) {
            err += source.prior2() * out.class2[y];
        } else {
            err += source.prior1() * out.class1[y];
        }
    }
    Ok(err.clamp(0.0, 1.0))
}

/// Error rate of an output distribution pair, given directly.
pub fn error_rate_of_outputs(
    prior1: f64,
    class1: &[f64],
    class2: &[f64],
    clf: &BinaryClassifier,
) -> f64 {
    (0..clf.outputs)
        .map(|y| {
            if clf.accepts(y) {
                (1.0 - prior1) * class2[y]
            } else {
                prior1 * class1[y]
            }
        })
        .sum()
}

/// Posterior-maximizing region; ties go to class 1.
pub fn bayes_region(source: &MixtureSource, channel: &Channel) -> Result<BinaryClassifier> {
    let out = source.propagate(channel)?;
    let mask: Vec<bool> = out
        .class1
        .iter()
        .zip(&out.class2)
        .map(|(a, b)| source.prior1() * a >= source.prior2() * b)
        .collect();
    Ok(BinaryClassifier::from_mask(&mask))
}

/// Per-pair weights whose expectation under any channel is the error rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorWeightMatrix(Matrix);

impl ErrorWeightMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    /// Error rate of `channel` evaluated through the weights.
    pub fn expected(&self, source: &MixtureSource, channel: &Channel) -> f64 {
        bilinear(source.marginal_probs(), channel, &self.0)
    }
}

/// Rows for zero-probability source symbols are zero; they never carry mass.
pub fn weight_matrix(source: &MixtureSource, clf: &BinaryClassifier) -> ErrorWeightMatrix {
    let p1 = source.class1().probs();
    let p2 = source.class2().probs();
    let px = source.marginal_probs();
    let w = Matrix::from_fn(source.symbols(), clf.outputs, |x, y| {
        if px[x] <= 0.0 {
            return 0.0;
        }
        let mass = if clf.accepts(y) {
            source.prior2() * p2[x]
        } else {
            source.prior1() * p1[x]
        };
        mass / px[x]
    });
    ErrorWeightMatrix(w)
}
