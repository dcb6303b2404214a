//! Rate-distortion-classification (RDC) solver for discrete two-class
//! mixture sources.
//!
//! `R(D, E)` is the smallest mutual information `I(X; X̂)` over channels
//! `p(x̂ | x)` whose expected distortion stays below `D` and whose
//! reconstructions are misclassified by a fixed binary classifier with
//! probability at most `E`.
//!
//! ```
//! use rdc::classifier::BinaryClassifier;
//! use rdc::solver::{Problem, SolverConfig};
//! use rdc::source_model::{DistortionMeasure, MixtureSource};
//!
//! let problem = Problem::new(
//!     MixtureSource::bernoulli_class_symbol(0.5).unwrap(),
//!     DistortionMeasure::hamming(2),
//!     BinaryClassifier::new(2, [0]).unwrap(),
//! )
//! .unwrap();
//! let point = problem.solve(0.11, f64::INFINITY, &SolverConfig::default()).unwrap();
//! assert!((point.rate_bits - 0.5001).abs() < 1e-3);
//! ```

pub mod bernoulli;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod info_theory;
pub mod oracle;
pub mod solver;
pub mod source_file;
pub mod source_model;
pub mod surface;

pub use error::{RdcError, Result};
pub use solver::{Problem, RdcPoint, SolverConfig};
