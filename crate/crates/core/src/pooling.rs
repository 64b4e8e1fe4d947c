//! Spatial and temporal pooling of dense feature maps.
//!
//! Every reduction runs in a fixed row-major order inside one task, so the
//! results are bitwise identical however the channels are scheduled.

use thiserror::Error;

use crate::tensor::Tensor;
use crate::{par, GRID_SIZE};

const WEIGHT_SUM_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PoolError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Which weighting produced a pooled feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Artifact,
    Structure,
    Raw,
}

/// Per-frame `C × H × W` feature map, channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseFeatureMap {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f32>,
}

impl DenseFeatureMap {
    /// A `channels × 14 × 14` map.
    pub fn new(channels: usize, data: Vec<f32>) -> Result<Self, PoolError> {
        Self::with_dims(channels, GRID_SIZE, GRID_SIZE, data)
    }

    /// A map with arbitrary spatial size (used by small-scale tests).
    pub fn with_dims(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Result<Self, PoolError> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(PoolError::InvalidInput(format!(
                "empty feature map {channels}x{height}x{width}"
            )));
        }
        if data.len() != channels * height * width {
            return Err(PoolError::InvalidInput(format!(
                "feature map {channels}x{height}x{width} needs {} values, got {}",
                channels * height * width,
                data.len()
            )));
        }
        Ok(DenseFeatureMap {
            channels,
            height,
            width,
            data,
        })
    }

    /// Splits a `[T, C, 14, 14]` tensor into per-frame maps.
    pub fn split_frames(tensor: &Tensor) -> Result<Vec<DenseFeatureMap>, PoolError> {
        match *tensor.shape() {
            [t, c, h, w] if h == GRID_SIZE && w == GRID_SIZE && t >= 1 && c >= 1 => tensor
                .data()
                .chunks_exact(c * h * w)
                .map(|chunk| DenseFeatureMap::new(c, chunk.to_vec()))
                .collect(),
            _ => Err(PoolError::InvalidInput(format!(
                "feature tensor shape {:?}, expected [T, C, 14, 14]",
                tensor.shape()
            ))),
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn spatial_len(&self) -> usize {
        self.height * self.width
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    /// Row-major spatial values of channel `c`.
    pub fn channel(&self, c: usize) -> &[f32] {
        let n = self.spatial_len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }
}

/// Pooled feature of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFeature {
    pub branch: Branch,
    pub values: Vec<f64>,
}

/// Temporal mean of the frame features of one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoFeature {
    pub branch: Branch,
    pub values: Vec<f64>,
}

/// Weighted spatial pooling with weights normalized to sum to one. A weight
/// map summing to (nearly) zero falls back to plain averaging.
pub fn weighted_pool(
    map: &DenseFeatureMap,
    weights: &[f64],
    branch: Branch,
) -> Result<FrameFeature, PoolError> {
    if weights.len() != map.spatial_len() {
        return Err(PoolError::InvalidWeights(format!(
            "{} weights for a {}-cell map",
            weights.len(),
            map.spatial_len()
        )));
    }
    if let Some(bad) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(PoolError::InvalidWeights(format!("weight {bad} is negative or not finite")));
    }
    let total: f64 = weights.iter().sum();
    if total < WEIGHT_SUM_FLOOR {
        return Ok(FrameFeature {
            branch,
            values: global_pool(map).values,
        });
    }
    let normalized: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let values = par::map_range(map.channels, |c| {
        map.channel(c)
            .iter()
            .zip(&normalized)
            .fold(0.0, |acc, (&v, &w)| acc + w * f64::from(v))
    });
    Ok(FrameFeature { branch, values })
}

/// Global average pooling.
pub fn global_pool(map: &DenseFeatureMap) -> FrameFeature {
    let n = map.spatial_len() as f64;
    let values = par::map_range(map.channels, |c| {
        map.channel(c).iter().fold(0.0, |acc, &v| acc + f64::from(v)) / n
    });
    FrameFeature {
        branch: Branch::Raw,
        values,
    }
}

/// Arithmetic mean over frames of one branch.
pub fn temporal_pool(features: &[FrameFeature]) -> Result<VideoFeature, PoolError> {
    let first = features
        .first()
        .ok_or_else(|| PoolError::InvalidInput("no frame features to pool".into()))?;
    let len = first.values.len();
    for f in features {
        if f.branch != first.branch {
            return Err(PoolError::InvalidInput(format!(
                "mixed branches {:?} and {:?}",
                first.branch, f.branch
            )));
        }
        if f.values.len() != len {
            return Err(PoolError::InvalidInput(format!(
                "feature lengths {} and {} differ",
                len,
                f.values.len()
            )));
        }
    }
    let t = features.len() as f64;
    let mut values = vec![0.0; len];
    for f in features {
        for (acc, v) in values.iter_mut().zip(&f.values) {
            *acc += v;
        }
    }
    values.iter_mut().for_each(|v| *v /= t);
    Ok(VideoFeature {
        branch: first.branch,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> DenseFeatureMap {
        DenseFeatureMap::with_dims(2, 2, 2, vec![1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0, 4.0]).unwrap()
    }

    #[test]
    fn small_case_weighted_and_global() {
        let z = weighted_pool(&small(), &[1.0; 4], Branch::Artifact).unwrap();
        assert_eq!(z.values, vec![2.5, 1.0]);
        assert_eq!(global_pool(&small()).values, vec![2.5, 1.0]);
    }

    #[test]
    fn one_hot_selects_cell() {
        let data: Vec<f32> = (0..3 * 196).map(|i| (i as f32).sin()).collect();
        let map = DenseFeatureMap::new(3, data).unwrap();
        let mut w = vec![0.0; 196];
        w[37] = 2.0;
        let z = weighted_pool(&map, &w, Branch::Structure).unwrap();
        for c in 0..3 {
            assert_eq!(z.values[c], f64::from(map.channel(c)[37]));
        }
    }

    #[test]
    fn zero_weights_fall_back_to_average() {
        let z = weighted_pool(&small(), &[0.0; 4], Branch::Artifact).unwrap();
        assert_eq!(z.values, global_pool(&small()).values);
        assert_eq!(z.branch, Branch::Artifact);
    }

    #[test]
    fn negative_or_misaligned_weights_rejected() {
        assert!(matches!(
            weighted_pool(&small(), &[1.0, -0.1, 1.0, 1.0], Branch::Artifact),
            Err(PoolError::InvalidWeights(_))
        ));
        assert!(matches!(
            weighted_pool(&small(), &[1.0, f64::NAN, 1.0, 1.0], Branch::Artifact),
            Err(PoolError::InvalidWeights(_))
        ));
        assert!(matches!(
            weighted_pool(&small(), &[1.0; 3], Branch::Artifact),
            Err(PoolError::InvalidWeights(_))
        ));
    }

    #[test]
    fn constant_and_zero_maps() {
        let map = DenseFeatureMap::new(4, vec![0.75; 4 * 196]).unwrap();
        assert!(global_pool(&map).values.iter().all(|&v| (v - 0.75).abs() < 1e-15));
        let zero = DenseFeatureMap::new(4, vec![0.0; 4 * 196]).unwrap();
        assert_eq!(global_pool(&zero).values, vec![0.0; 4]);
    }

    #[test]
    fn temporal_mean_and_errors() {
        let f = |v: Vec<f64>| FrameFeature {
            branch: Branch::Raw,
            values: v,
        };
        let one = temporal_pool(&[f(vec![1.0, 3.0])]).unwrap();
        assert_eq!(one.values, vec![1.0, 3.0]);
        let two = temporal_pool(&[f(vec![1.0, 3.0]), f(vec![3.0, 5.0])]).unwrap();
        assert_eq!(two.values, vec![2.0, 4.0]);
        assert!(temporal_pool(&[]).is_err());
        let other = FrameFeature {
            branch: Branch::Artifact,
            values: vec![0.0, 0.0],
        };
        assert!(temporal_pool(&[f(vec![1.0, 3.0]), other]).is_err());
    }

    #[test]
    fn split_frames_checks_shape() {
        let t = Tensor::zeros(vec![2, 3, 14, 14]).unwrap();
        let maps = DenseFeatureMap::split_frames(&t).unwrap();
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[1].dims(), (3, 14, 14));
        assert!(DenseFeatureMap::split_frames(&Tensor::zeros(vec![2, 3, 7, 7]).unwrap()).is_err());
        assert!(DenseFeatureMap::split_frames(&Tensor::zeros(vec![3, 14, 14]).unwrap()).is_err());
    }

    fn map_and_weights() -> impl Strategy<Value = (DenseFeatureMap, Vec<f64>)> {
        (
            prop::collection::vec(-10.0f32..10.0, 5 * 196),
            prop::collection::vec(0.0f64..1.0, 196),
        )
            .prop_map(|(d, w)| (DenseFeatureMap::new(5, d).unwrap(), w))
    }

    proptest! {
        #[test]
        fn weighted_pool_is_convex((map, w) in map_and_weights()) {
            let z = weighted_pool(&map, &w, Branch::Artifact).unwrap();
            for c in 0..5 {
                let ch = map.channel(c);
                let lo = ch.iter().copied().fold(f32::INFINITY, f32::min) as f64;
                let hi = ch.iter().copied().fold(f32::NEG_INFINITY, f32::max) as f64;
                prop_assert!(z.values[c] >= lo - 1e-9 && z.values[c] <= hi + 1e-9);
            }
        }

        #[test]
        fn weighted_pool_is_scale_invariant((map, w) in map_and_weights(), scale in 1e-3f64..1e3) {
            let a = weighted_pool(&map, &w, Branch::Artifact).unwrap();
            let scaled: Vec<f64> = w.iter().map(|v| v * scale).collect();
            let b = weighted_pool(&map, &scaled, Branch::Artifact).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() < 1e-6);
            }
        }

        #[test]
        fn temporal_pool_is_permutation_invariant(
            rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 8), 1..20),
            seed in any::<u64>(),
        ) {
            let feats: Vec<FrameFeature> = rows.iter().map(|r| FrameFeature { branch: Branch::Raw, values: r.clone() }).collect();
            let mut shuffled = feats.clone();
            let n = shuffled.len();
            for i in (1..n).rev() {
                shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
            }
            let a = temporal_pool(&feats).unwrap();
            let b = temporal_pool(&shuffled).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() < 1e-6);
            }
        }
    }
}
