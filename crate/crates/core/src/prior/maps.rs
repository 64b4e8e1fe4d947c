use super::bands::frame_band_ratios;
use super::cues::{blockiness_cue, blur_cue, ringing_cue};
use super::grid::BlockGrid;
use super::sobel::sobel_gradient;
use super::temporal::{block_means, temporal_cue_from_means};
use super::{PriorConfig, PriorError};
use crate::media::{GrayFrame, SamplingPlan};
use crate::{par, GRID_CELLS};

/// The four per-block distortion cues of one sampled frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CueSet {
    pub ringing: BlockGrid,
    pub blur: BlockGrid,
    pub blockiness: BlockGrid,
    pub temporal: BlockGrid,
}

/// Artifact-aware map and its complement, the structure-aware map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightMapPair {
    pub artifact: BlockGrid,
    pub structure: BlockGrid,
}

impl WeightMapPair {
    pub fn uniform() -> Self {
        WeightMapPair {
            artifact: BlockGrid::filled(0.5),
            structure: BlockGrid::filled(0.5),
        }
    }
}

/// Computes the spatial cues on `frame` and the temporal cue on the block
/// means of its window.
pub fn frame_cues(
    frame: &GrayFrame,
    window_means: &[BlockGrid],
    config: &PriorConfig,
) -> Result<CueSet, PriorError> {
    let temporal = temporal_cue_from_means(window_means)?;
    let ratios = frame_band_ratios(frame);
    let sobel = sobel_gradient(frame, config.edge_threshold);
    Ok(CueSet {
        ringing: ringing_cue(&ratios, &sobel.edges, config.min_edge_ratio),
        blur: blur_cue(&ratios, &sobel.magnitude),
        blockiness: blockiness_cue(frame, config.blockiness_sigma),
        temporal,
    })
}

/// Normalizes each cue, averages them with equal weight and renormalizes
/// into `w_art`; `w_str = 1 - w_art`. A flat average yields 0.5 everywhere.
pub fn build_weight_maps(cues: &CueSet) -> WeightMapPair {
    let normalized = [
        cues.ringing.min_max_normalized(0.0),
        cues.blur.min_max_normalized(0.0),
        cues.blockiness.min_max_normalized(0.0),
        cues.temporal.min_max_normalized(0.0),
    ];
    let mut mean = [0.0; GRID_CELLS];
    for (i, m) in mean.iter_mut().enumerate() {
        *m = normalized.iter().map(|g| g.0[i]).sum::<f64>() / 4.0;
    }
    let artifact = BlockGrid(mean).min_max_normalized(0.5);
    let mut structure = [0.0; GRID_CELLS];
    for (s, a) in structure.iter_mut().zip(&artifact.0) {
        *s = 1.0 - a;
    }
    WeightMapPair {
        artifact,
        structure: BlockGrid(structure),
    }
}

/// Weight maps of one sampled frame given its temporal window (which should
/// include the frame itself).
pub fn weight_maps_for_frame(
    frame: &GrayFrame,
    window: &[&GrayFrame],
    config: &PriorConfig,
) -> Result<WeightMapPair, PriorError> {
    let means: Vec<BlockGrid> = window.iter().map(|f| block_means(f)).collect();
    Ok(build_weight_maps(&frame_cues(frame, &means, config)?))
}

/// Analysis frames and their block means for every frame a plan touches.
#[derive(Debug, Clone)]
pub struct FrameCache {
    indices: Vec<usize>,
    frames: Vec<GrayFrame>,
    means: Vec<BlockGrid>,
}

impl FrameCache {
    /// Loads each referenced frame once through `load`.
    pub fn build<F>(plan: &SamplingPlan, load: F) -> Self
    where
        F: Fn(usize) -> GrayFrame + Sync + Send,
    {
        let indices = plan.referenced_frames();
        let loaded = par::map_collect(&indices, |&i| {
            let frame = load(i);
            let means = block_means(&frame);
            (frame, means)
        });
        let (frames, means) = loaded.into_iter().unzip();
        FrameCache {
            indices,
            frames,
            means,
        }
    }

    fn position(&self, index: usize) -> Result<usize, PriorError> {
        self.indices
            .binary_search(&index)
            .map_err(|_| PriorError::MissingFrame(index))
    }

    pub fn frame(&self, index: usize) -> Result<&GrayFrame, PriorError> {
        Ok(&self.frames[self.position(index)?])
    }

    pub fn means(&self, index: usize) -> Result<&BlockGrid, PriorError> {
        Ok(&self.means[self.position(index)?])
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Weight maps for every sampled frame of `plan`, in sampling order.
pub fn weight_maps_for_plan(
    cache: &FrameCache,
    plan: &SamplingPlan,
    config: &PriorConfig,
) -> Result<Vec<WeightMapPair>, PriorError> {
    let jobs: Vec<(usize, &Vec<usize>)> = plan.sampled.iter().copied().zip(&plan.windows).collect();
    par::try_map_collect(&jobs, |&(index, window)| {
        let means = window
            .iter()
            .map(|&w| cache.means(w).copied())
            .collect::<Result<Vec<_>, _>>()?;
        let cues = frame_cues(cache.frame(index)?, &means, config)?;
        Ok(build_weight_maps(&cues))
    })
}
