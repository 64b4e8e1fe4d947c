//! Deterministic synthetic clips and feature tensors for tests, benches and
//! fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::media::{Colorspace, FrameSequence, RawFrame};
use crate::tensor::Tensor;
use crate::GRID_SIZE;

/// 4:2:0 clip with a drifting sinusoid, per-8×8-block offsets that mimic
/// coarse quantization, a bright bar that flickers on odd frames, and a
/// little pixel noise.
pub fn synthetic_clip(width: usize, height: usize, frames: usize, seed: u64) -> FrameSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bw = width.div_ceil(8);
    let bh = height.div_ceil(8);
    let chroma = width.div_ceil(2) * height.div_ceil(2);
    let raw = (0..frames)
        .map(|t| {
            let offsets: Vec<f64> = (0..bw * bh).map(|_| rng.random_range(-12.0..12.0)).collect();
            let mut luma = Vec::with_capacity(width * height);
            for y in 0..height {
                for x in 0..width {
                    let (u, v) = (x as f64 / width as f64, y as f64 / height as f64);
                    let wave = 60.0 * (14.0 * u + 0.35 * t as f64).sin() * (9.0 * v).cos();
                    let bar = if (0.6..0.7).contains(&u) && t % 2 == 1 { 40.0 } else { 0.0 };
                    let noise = rng.random_range(-3.0..3.0);
                    let value = 120.0 + wave + offsets[(y / 8) * bw + x / 8] + bar + noise;
                    luma.push(value.round().clamp(0.0, 255.0) as u8);
                }
            }
            RawFrame {
                planes: vec![luma, vec![128; chroma], vec![128; chroma]],
            }
        })
        .collect();
    FrameSequence::new(width, height, Colorspace::Yuv420, raw).expect("synthetic geometry is valid")
}

/// 4:2:0 clip whose luma is `value` everywhere.
pub fn constant_clip(width: usize, height: usize, frames: usize, value: u8) -> FrameSequence {
    let chroma = width.div_ceil(2) * height.div_ceil(2);
    let raw = (0..frames)
        .map(|_| RawFrame {
            planes: vec![vec![value; width * height], vec![128; chroma], vec![128; chroma]],
        })
        .collect();
    FrameSequence::new(width, height, Colorspace::Yuv420, raw).expect("constant geometry is valid")
}

/// `[samples, channels, 14, 14]` tensor of values uniform in `[-1, 1)`.
pub fn synthetic_features(samples: usize, channels: usize, seed: u64) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples * channels * GRID_SIZE * GRID_SIZE;
    let data = (0..n).map(|_| rng.random_range(-1.0f32..1.0)).collect();
    Tensor::new(vec![samples, channels, GRID_SIZE, GRID_SIZE], data).expect("shape matches payload")
}
