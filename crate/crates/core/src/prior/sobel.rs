use crate::media::GrayFrame;
use crate::FRAME_SIZE;

/// Per-pixel Sobel gradient magnitude and the derived edge mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SobelField {
    pub magnitude: Vec<f64>,
    pub edges: Vec<bool>,
}

impl SobelField {
    pub fn max_magnitude(&self) -> f64 {
        self.magnitude.iter().copied().fold(0.0, f64::max)
    }
}

/// 3×3 Sobel with replicated borders. A pixel is an edge when its magnitude
/// exceeds `threshold` times the frame maximum.
pub fn sobel_gradient(frame: &GrayFrame, threshold: f64) -> SobelField {
    const N: usize = FRAME_SIZE;
    let px = frame.as_slice();
    let mut magnitude = vec![0.0; N * N];
    for y in 0..N {
        let up = &px[y.saturating_sub(1) * N..][..N];
        let mid = &px[y * N..][..N];
        let down = &px[(y + 1).min(N - 1) * N..][..N];
        for x in 0..N {
            let l = x.saturating_sub(1);
            let r = (x + 1).min(N - 1);
            let gx = (up[r] + 2.0 * mid[r] + down[r]) - (up[l] + 2.0 * mid[l] + down[l]);
            let gy = (down[l] + 2.0 * down[x] + down[r]) - (up[l] + 2.0 * up[x] + up[r]);
            magnitude[y * N + x] = (gx * gx + gy * gy).sqrt();
        }
    }
    let max = magnitude.iter().copied().fold(0.0, f64::max);
    let edges = if max > 0.0 {
        let cut = threshold * max;
        magnitude.iter().map(|&m| m > cut).collect()
    } else {
        vec![false; N * N]
    };
    SobelField { magnitude, edges }
}
