//! Branch score heads, the fusion gate, and the end-to-end video scorer.

mod model;
mod nets;
mod pipeline;

pub use model::{ModelBundle, GATE_HIDDEN, GATE_INPUTS};
pub use nets::{softmax3, GateNet, Linear, MlpHead};
pub use pipeline::{fuse, gate_stats, predict_from_maps, predict_video, GateStats, Prediction};

use thiserror::Error;

use crate::tensor::TensorError;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model bundle lacks entry {0:?}")]
    MissingEntry(String),
    #[error("entry {entry:?} has shape {actual:?}, expected {expected:?}")]
    Shape {
        entry: String,
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
    #[error("entry {0:?} holds non-finite values")]
    NonFinite(String),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
