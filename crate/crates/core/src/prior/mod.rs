//! Frequency-domain distortion cues and the artifact/structure weight maps.
//!
//! Every 224×224 analysis frame is tiled into a 14×14 grid of 16×16 blocks.
//! Four per-block cues are computed (ringing, blur, blockiness, temporal),
//! each is min-max normalized, and their mean is renormalized into the
//! artifact-aware map `w_art`. The structure-aware map is `1 - w_art`.

mod bands;
mod cues;
mod dct;
mod export;
mod grid;
mod maps;
mod sobel;
mod temporal;

pub use bands::{band_of, band_ratios, frame_band_ratios, Band, BandRatios};
pub use cues::{blockiness_cue, blockiness_raw, blur_cue, gaussian_smooth, ringing_cue};
pub use dct::{dct2_16, frame_block, Block16, DctBlock};
pub use export::{grid_to_csv, grid_to_pgm};
pub use grid::BlockGrid;
pub use maps::{
    build_weight_maps, frame_cues, weight_maps_for_frame, weight_maps_for_plan, CueSet,
    FrameCache, WeightMapPair,
};
pub use sobel::{sobel_gradient, SobelField};
pub use temporal::{block_means, temporal_cue, temporal_cue_from_means, temporal_energy_cue};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PriorError {
    #[error("temporal window needs at least 2 frames, got {0}")]
    InvalidWindow(usize),
    #[error("frame {0} is not available to the weight-map stage")]
    MissingFrame(usize),
}

/// Tunable constants of the cue computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    /// Edge pixels have a Sobel magnitude above this fraction of the frame
    /// maximum.
    pub edge_threshold: f64,
    /// Blocks whose edge-pixel fraction is below this value get no ringing.
    pub min_edge_ratio: f64,
    /// Standard deviation of the 5×5 Gaussian applied to the blockiness grid.
    pub blockiness_sigma: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        PriorConfig {
            edge_threshold: 0.2,
            min_edge_ratio: 0.05,
            blockiness_sigma: 1.0,
        }
    }
}
