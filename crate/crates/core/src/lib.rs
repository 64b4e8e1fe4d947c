//! Frequency-guided no-reference quality prediction for short-form video.
//!
//! The engine works in four stages:
//!
//! 1. [`media`] decodes frames, converts them to 224×224 grayscale and picks
//!    the sampled frames together with their temporal analysis windows.
//! 2. [`prior`] turns each sampled frame into a 14×14 artifact-aware map and
//!    its complementary structure-aware map using block DCT statistics,
//!    Sobel edges, block-boundary discontinuities and temporal spectra.
//! 3. [`pooling`] aggregates externally supplied dense feature maps
//!    (`C×14×14` per frame) with those maps and with plain averaging.
//! 4. [`predictor`] scores each branch with a small MLP and fuses the three
//!    scores with a softmax gate.
//!
//! [`tensor`] defines the binary interchange for feature maps and model
//! parameters, and [`metrics`] provides SRCC/PLCC for evaluation.

pub mod media;
pub mod metrics;
pub mod par;
pub mod pooling;
pub mod predictor;
pub mod prior;
pub mod synth;
pub mod tensor;

use thiserror::Error;

/// Side length of the analysed grayscale frames.
pub const FRAME_SIZE: usize = 224;
/// Side length of a DCT analysis block.
pub const BLOCK_SIZE: usize = 16;
/// Side length of the block grid (and of the dense feature maps).
pub const GRID_SIZE: usize = FRAME_SIZE / BLOCK_SIZE;
/// Number of cells in the block grid.
pub const GRID_CELLS: usize = GRID_SIZE * GRID_SIZE;

/// Default number of sampled frames per video.
pub const DEFAULT_SAMPLED_FRAMES: usize = 16;
/// Default temporal window length around each sampled frame.
pub const DEFAULT_WINDOW_LEN: usize = 6;

/// Top-level error for the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Media(#[from] media::MediaError),
    #[error(transparent)]
    Prior(#[from] prior::PriorError),
    #[error(transparent)]
    Tensor(#[from] tensor::TensorError),
    #[error(transparent)]
    Pool(#[from] pooling::PoolError),
    #[error(transparent)]
    Model(#[from] predictor::ModelError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
