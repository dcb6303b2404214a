//! JSON problem description.
//!
//! ```json
//! {"prior1": 0.5, "p_x1": [0.8, 0.2], "p_x2": [0.3, 0.7],
//!  "distortion": "hamming", "classifier_region": "bayes"}
//! ```
//!
//! `distortion` is either `"hamming"` or an explicit `n × m` matrix;
//! `classifier_region` is either a list of reconstruction indices or
//! `"bayes"`, which derives the posterior-maximizing region once from the
//! clean source (identity channel).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{bayes_region, BinaryClassifier};
use crate::error::{RdcError, Result};
use crate::solver::Problem;
use crate::source_model::{Channel, DistortionMeasure, MixtureSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistortionSpec {
    Named(String),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    Named(String),
    Indices(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub prior1: f64,
    pub p_x1: Vec<f64>,
    pub p_x2: Vec<f64>,
    pub distortion: DistortionSpec,
    pub classifier_region: RegionSpec,
}

impl SourceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RdcError::InvalidArgument(format!("source spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| RdcError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| RdcError::parse(path, e))
    }

    pub fn to_problem(&self) -> Result<Problem> {
        let source = MixtureSource::from_vecs(self.prior1, self.p_x1.clone(), self.p_x2.clone())?;
        let delta = match &self.distortion {
            DistortionSpec::Named(name) if name == "hamming" => {
                DistortionMeasure::hamming(source.symbols())
            }
            DistortionSpec::Named(other) => {
                return Err(RdcError::InvalidArgument(format!(
                    "unknown distortion measure {other:?}"
                )))
            }
            DistortionSpec::Matrix(rows) => DistortionMeasure::new(rows.clone())?,
        };
        let clf = match &self.classifier_region {
            RegionSpec::Named(name) if name == "bayes" => {
                if delta.outputs() != source.symbols() {
                    return Err(RdcError::InvalidArgument(
                        "a \"bayes\" region needs equal source and reconstruction alphabets".into(),
                    ));
                }
                bayes_region(&source, &Channel::identity(source.symbols()))?
            }
            RegionSpec::Named(other) => {
                return Err(RdcError::InvalidArgument(format!(
                    "unknown classifier region {other:?}"
                )))
            }
            RegionSpec::Indices(idx) => BinaryClassifier::new(delta.outputs(), idx.iter().copied())?,
        };
        Problem::new(source, delta, clf)
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).unwrap_or_default();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
