use super::MediaError;

/// Center-of-bin uniform sampling: `floor((k + 0.5)·n / t)` for `k < t`,
/// clamped to `n - 1`. Repeats indices when `n < t`.
pub fn sample_frames(n: usize, t: usize) -> Vec<usize> {
    assert!(n >= 1 && t >= 1, "sample_frames needs n >= 1 and t >= 1");
    (0..t)
        .map(|k| (((2 * k + 1) * n) / (2 * t)).min(n - 1))
        .collect()
}

/// Window of `len` frame indices centered on `index`, shifted to stay inside
/// `[0, n)`. Short videos are padded by repeating the last frame.
pub fn window_for(index: usize, n: usize, len: usize) -> Vec<usize> {
    assert!(index < n && len >= 1, "window_for needs index < n and len >= 1");
    if n < len {
        let mut w: Vec<usize> = (0..n).collect();
        w.resize(len, n - 1);
        return w;
    }
    let start = index.saturating_sub((len - 1) / 2).min(n - len);
    (start..start + len).collect()
}

/// The sampled frames of one video and the analysis window of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingPlan {
    pub frame_count: usize,
    pub window_len: usize,
    pub sampled: Vec<usize>,
    pub windows: Vec<Vec<usize>>,
}

impl SamplingPlan {
    pub fn new(frame_count: usize, samples: usize, window_len: usize) -> Result<Self, MediaError> {
        if frame_count == 0 {
            return Err(MediaError::Invalid("cannot sample an empty video".into()));
        }
        if samples == 0 {
            return Err(MediaError::Invalid("sample count must be at least 1".into()));
        }
        if window_len < 2 {
            return Err(MediaError::Invalid(format!(
                "temporal window must hold at least 2 frames, got {window_len}"
            )));
        }
        let sampled = sample_frames(frame_count, samples);
        let windows = sampled
            .iter()
            .map(|&i| window_for(i, frame_count, window_len))
            .collect();
        Ok(SamplingPlan {
            frame_count,
            window_len,
            sampled,
            windows,
        })
    }

    pub fn samples(&self) -> usize {
        self.sampled.len()
    }

    /// Sorted, deduplicated indices of every frame the plan touches.
    pub fn referenced_frames(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.windows.iter().flatten().copied().collect();
        all.extend_from_slice(&self.sampled);
        all.sort_unstable();
        all.dedup();
        all
    }
}
