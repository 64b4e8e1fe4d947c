//! Temporal cue from the spectrum of block means across a short window.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::grid::{block_average, BlockGrid};
use super::PriorError;
use crate::media::GrayFrame;
use crate::GRID_CELLS;

const EPS: f64 = 1e-8;

/// 14×14 grid of block means of `frame`.
pub fn block_means(frame: &GrayFrame) -> BlockGrid {
    block_average(frame.as_slice())
}

/// Temporal cue of a window of analysis frames.
pub fn temporal_cue(window: &[&GrayFrame]) -> Result<BlockGrid, PriorError> {
    let means: Vec<BlockGrid> = window.iter().map(|f| block_means(f)).collect();
    temporal_cue_from_means(&means)
}

/// Temporal cue from precomputed per-frame block means.
pub fn temporal_cue_from_means(means: &[BlockGrid]) -> Result<BlockGrid, PriorError> {
    let len = means.len();
    if len < 2 {
        return Err(PriorError::InvalidWindow(len));
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let mut buffer = vec![Complex::new(0.0, 0.0); len];
    let mut out = [0.0; GRID_CELLS];
    for (cell, o) in out.iter_mut().enumerate() {
        for (b, m) in buffer.iter_mut().zip(means) {
            *b = Complex::new(m.0[cell], 0.0);
        }
        *o = cue_from_spectrum(fft.as_ref(), &mut buffer);
    }
    Ok(BlockGrid(out))
}

/// Temporal cue of one block-mean time series: the average of clamped
/// motion (non-DC over DC energy) and flicker (share of one-sided non-DC
/// energy above bin `len / 4`).
pub fn temporal_energy_cue(series: &[f64]) -> Result<f64, PriorError> {
    if series.len() < 2 {
        return Err(PriorError::InvalidWindow(series.len()));
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(series.len());
    let mut buffer: Vec<Complex<f64>> = series.iter().map(|&v| Complex::new(v, 0.0)).collect();
    Ok(cue_from_spectrum(fft.as_ref(), &mut buffer))
}

fn cue_from_spectrum(fft: &dyn Fft<f64>, buffer: &mut [Complex<f64>]) -> f64 {
    let len = buffer.len();
    fft.process(buffer);
    let energy: Vec<f64> = buffer.iter().map(|c| c.norm_sqr()).collect();
    let dc = energy[0];
    let non_dc: f64 = energy[1..].iter().sum();
    let motion = (non_dc / (dc + EPS)).min(1.0);

    let half = len / 2;
    let high_from = len / 4 + 1;
    let one_sided: f64 = energy[1..=half].iter().sum();
    let high: f64 = energy[high_from.max(1)..=half].iter().sum();
    let flicker = high / (one_sided + EPS);
    0.5 * motion + 0.5 * flicker
}
