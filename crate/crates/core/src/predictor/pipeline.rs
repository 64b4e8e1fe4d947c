use super::model::ModelBundle;
use super::ModelError;
use crate::media::{FrameSequence, SamplingPlan};
use crate::pooling::{global_pool, temporal_pool, weighted_pool, Branch, DenseFeatureMap};
use crate::prior::{weight_maps_for_plan, FrameCache, PriorConfig, WeightMapPair};
use crate::{par, Error, GRID_SIZE};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

/// Inputs of the fusion gate, averaged over the sampled frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateStats {
    pub mean_artifact: f64,
    pub mean_structure: f64,
    pub mean_abs_raw: f64,
}

impl GateStats {
    pub fn as_array(&self) -> [f64; 3] {
        [self.mean_artifact, self.mean_structure, self.mean_abs_raw]
    }
}

/// Mean of each weight map over space and time, and the mean absolute
/// activation of the feature maps.
pub fn gate_stats(maps: &[WeightMapPair], features: &[DenseFeatureMap]) -> Result<GateStats, ModelError> {
    if maps.is_empty() || maps.len() != features.len() {
        return Err(ModelError::InvalidInput(format!(
            "gate statistics need equal, nonzero frame counts (maps {}, features {})",
            maps.len(),
            features.len()
        )));
    }
    let t = maps.len() as f64;
    let mean_artifact = maps.iter().map(|m| m.artifact.mean()).sum::<f64>() / t;
    let mean_structure = maps.iter().map(|m| m.structure.mean()).sum::<f64>() / t;
    let mean_abs_raw = features
        .iter()
        .map(|f| f.data().iter().map(|v| f64::from(v.abs())).sum::<f64>() / f.data().len() as f64)
        .sum::<f64>()
        / t;
    Ok(GateStats {
        mean_artifact,
        mean_structure,
        mean_abs_raw,
    })
}

/// Convex combination of the branch scores.
pub fn fuse(scores: [f64; 3], weights: [f64; 3]) -> Result<f64, ModelError> {
    let sum: f64 = weights.iter().sum();
    if !((sum - 1.0).abs() <= WEIGHT_SUM_TOLERANCE) || weights.iter().any(|w| *w < 0.0) {
        return Err(ModelError::InvalidInput(format!(
            "fusion weights {weights:?} do not form a convex combination"
        )));
    }
    Ok(weights.iter().zip(&scores).map(|(w, q)| w * q).sum())
}

/// Result of scoring one video.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub q_art: f64,
    pub q_str: f64,
    pub q_raw: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub stats: GateStats,
    pub weight_maps: Vec<WeightMapPair>,
}

/// Scores a video from its frames and per-sampled-frame feature maps.
pub fn predict_video(
    seq: &FrameSequence,
    features: &[DenseFeatureMap],
    model: &ModelBundle,
    plan: &SamplingPlan,
    config: &PriorConfig,
) -> Result<Prediction, Error> {
    if plan.frame_count != seq.frame_count() {
        return Err(ModelError::InvalidInput(format!(
            "sampling plan covers {} frames, video has {}",
            plan.frame_count,
            seq.frame_count()
        ))
        .into());
    }
    check_features(features, model, plan.samples())?;
    let cache = FrameCache::build(plan, |i| seq.analysis_frame(i));
    let maps = weight_maps_for_plan(&cache, plan, config)?;
    predict_from_maps(maps, features, model)
}

/// Pools, scores and fuses given precomputed weight maps.
pub fn predict_from_maps(
    maps: Vec<WeightMapPair>,
    features: &[DenseFeatureMap],
    model: &ModelBundle,
) -> Result<Prediction, Error> {
    check_features(features, model, maps.len())?;
    let frames: Vec<(&WeightMapPair, &DenseFeatureMap)> = maps.iter().zip(features).collect();
    let pooled = par::try_map_collect(&frames, |&(m, v)| {
        Ok::<_, Error>((
            weighted_pool(v, m.artifact.as_slice(), Branch::Artifact)?,
            weighted_pool(v, m.structure.as_slice(), Branch::Structure)?,
            global_pool(v),
        ))
    })?;
    let mut art = Vec::with_capacity(pooled.len());
    let mut stru = Vec::with_capacity(pooled.len());
    let mut raw = Vec::with_capacity(pooled.len());
    for (a, s, r) in pooled {
        art.push(a);
        stru.push(s);
        raw.push(r);
    }
    let f_art = temporal_pool(&art)?;
    let f_str = temporal_pool(&stru)?;
    let f_raw = temporal_pool(&raw)?;

    let q_art = model.head_art.forward(&f_art.values)?;
    let q_str = model.head_str.forward(&f_str.values)?;
    let q_raw = model.head_raw.forward(&f_raw.values)?;
    let stats = gate_stats(&maps, features)?;
    let [alpha, beta, gamma] = model.gate.forward(stats.as_array());
    let score = fuse([q_art, q_str, q_raw], [alpha, beta, gamma])?;
    Ok(Prediction {
        score,
        q_art,
        q_str,
        q_raw,
        alpha,
        beta,
        gamma,
        stats,
        weight_maps: maps,
    })
}

fn check_features(features: &[DenseFeatureMap], model: &ModelBundle, samples: usize) -> Result<(), ModelError> {
    if features.len() != samples {
        return Err(ModelError::InvalidInput(format!(
            "feature maps for {} frames, expected {samples}",
            features.len()
        )));
    }
    for f in features {
        let expected = (model.channels, GRID_SIZE, GRID_SIZE);
        if f.dims() != expected {
            return Err(ModelError::InvalidInput(format!(
                "feature map shape {:?}, expected {:?}",
                f.dims(),
                expected
            )));
        }
    }
    Ok(())
}
