//! Spatial distortion cues: ringing, blur and blockiness.

use super::bands::BandRatios;
use super::grid::{block_average, BlockGrid};
use crate::media::GrayFrame;
use crate::{BLOCK_SIZE, GRID_CELLS, GRID_SIZE};

/// Ringing: edge-pixel fraction times mid+high energy share, zeroed where
/// the edge fraction is below `min_edge_ratio`.
pub fn ringing_cue(ratios: &[BandRatios], edges: &[bool], min_edge_ratio: f64) -> BlockGrid {
    assert_eq!(ratios.len(), GRID_CELLS);
    let edge_ratio = block_average(&edges.iter().map(|&e| f64::from(u8::from(e))).collect::<Vec<_>>());
    BlockGrid::from_fn(|r, c| {
        let rho = edge_ratio.get(r, c);
        if rho < min_edge_ratio {
            return 0.0;
        }
        let b = &ratios[r * GRID_SIZE + c];
        (rho * (b.mid + b.high)).clamp(0.0, 1.0)
    })
}

/// Blur: complement of the weighted mid/high share, scaled by the block's
/// mean gradient relative to the strongest block of the frame.
pub fn blur_cue(ratios: &[BandRatios], magnitude: &[f64]) -> BlockGrid {
    assert_eq!(ratios.len(), GRID_CELLS);
    let grad = block_average(magnitude);
    let max = grad.max();
    if !(max > 0.0) {
        return BlockGrid::zeros();
    }
    BlockGrid::from_fn(|r, c| {
        let b = &ratios[r * GRID_SIZE + c];
        let raw = (1.0 - (0.5 * b.mid + b.high)).clamp(0.0, 1.0);
        raw * grad.get(r, c) / max
    })
}

/// Block-boundary discontinuity per block before smoothing.
///
/// Each internal boundary segment (one block long) gets the mean absolute
/// step across it; a block takes the mean over its 2 to 4 internal
/// boundary segments.
pub fn blockiness_raw(frame: &GrayFrame) -> BlockGrid {
    const B: usize = BLOCK_SIZE;
    const G: usize = GRID_SIZE;
    // vertical[r][b]: boundary at x = 16·b (b = 1..13) over block row r.
    let mut vertical = [[0.0; G]; G];
    // horizontal[b][c]: boundary at y = 16·b over block column c.
    let mut horizontal = [[0.0; G]; G];
    for r in 0..G {
        for b in 1..G {
            let x = b * B;
            let mut acc = 0.0;
            for y in r * B..(r + 1) * B {
                acc += (frame.get(x, y) - frame.get(x - 1, y)).abs();
            }
            vertical[r][b] = acc / B as f64;
        }
    }
    for b in 1..G {
        let y = b * B;
        for c in 0..G {
            let mut acc = 0.0;
            for x in c * B..(c + 1) * B {
                acc += (frame.get(x, y) - frame.get(x, y - 1)).abs();
            }
            horizontal[b][c] = acc / B as f64;
        }
    }
    BlockGrid::from_fn(|r, c| {
        let mut sum = 0.0;
        let mut n = 0u32;
        if c >= 1 {
            sum += vertical[r][c];
            n += 1;
        }
        if c + 1 < G {
            sum += vertical[r][c + 1];
            n += 1;
        }
        if r >= 1 {
            sum += horizontal[r][c];
            n += 1;
        }
        if r + 1 < G {
            sum += horizontal[r + 1][c];
            n += 1;
        }
        sum / f64::from(n)
    })
}

/// Blockiness: [`blockiness_raw`] smoothed with a 5×5 Gaussian.
pub fn blockiness_cue(frame: &GrayFrame, sigma: f64) -> BlockGrid {
    gaussian_smooth(&blockiness_raw(frame), sigma)
}

/// 5×5 Gaussian smoothing of a block grid; taps falling outside the grid are
/// dropped and the remaining weights renormalized.
pub fn gaussian_smooth(grid: &BlockGrid, sigma: f64) -> BlockGrid {
    const RADIUS: isize = 2;
    let taps: Vec<f64> = (-RADIUS..=RADIUS)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    // The kernel is separable and the in-grid support is a rectangle, so
    // per-axis renormalization equals renormalizing the 2D kernel.
    let pass = |src: &BlockGrid, horizontal: bool| {
        BlockGrid::from_fn(|r, c| {
            let (mut acc, mut wsum) = (0.0, 0.0);
            for (k, &w) in taps.iter().enumerate() {
                let d = k as isize - RADIUS;
                let (rr, cc) = if horizontal {
                    (r as isize, c as isize + d)
                } else {
                    (r as isize + d, c as isize)
                };
                if (0..GRID_SIZE as isize).contains(&rr) && (0..GRID_SIZE as isize).contains(&cc) {
                    acc += w * src.get(rr as usize, cc as usize);
                    wsum += w;
                }
            }
            acc / wsum
        })
    };
    pass(&pass(grid, true), false)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::prior::sobel::sobel_gradient;
    use crate::FRAME_SIZE;

    fn ratios(mid_high: f64) -> Vec<BandRatios> {
        vec![
            BandRatios {
                low: 1.0 - mid_high,
                mid: mid_high / 2.0,
                high: mid_high / 2.0,
            };
            GRID_CELLS
        ]
    }

    /// Edge mask with the first `n` pixels of every block set.
    fn edges_per_block(n: usize) -> Vec<bool> {
        (0..FRAME_SIZE * FRAME_SIZE)
            .map(|i| {
                let (x, y) = (i % FRAME_SIZE, i / FRAME_SIZE);
                (y % BLOCK_SIZE) * BLOCK_SIZE + (x % BLOCK_SIZE) < n
            })
            .collect()
    }

    #[test]
    fn ringing_needs_edges() {
        let g = ringing_cue(&ratios(0.6), &edges_per_block(0), 0.05);
        assert_eq!(g, BlockGrid::zeros());
        // 10 / 256 ≈ 0.039 is below the suppression threshold.
        let g = ringing_cue(&ratios(0.6), &edges_per_block(10), 0.05);
        assert_eq!(g, BlockGrid::zeros());
    }

    #[test]
    fn ringing_is_edge_ratio_times_mid_high() {
        let g = ringing_cue(&ratios(0.6), &edges_per_block(128), 0.05);
        assert!(g.as_slice().iter().all(|&v| (v - 0.30).abs() < 1e-12));
    }

    #[test]
    fn blur_needs_gradient() {
        let g = blur_cue(&ratios(0.0), &vec![0.0; FRAME_SIZE * FRAME_SIZE]);
        assert_eq!(g, BlockGrid::zeros());
    }

    #[test]
    fn blur_of_silent_block_at_full_gradient() {
        let g = blur_cue(&vec![BandRatios::default(); GRID_CELLS], &vec![0.7; FRAME_SIZE * FRAME_SIZE]);
        assert!(g.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn blur_mid_band_scaled_by_relative_gradient() {
        let mut r = vec![BandRatios::default(); GRID_CELLS];
        r[0] = BandRatios {
            low: 0.0,
            mid: 1.0,
            high: 0.0,
        };
        // Block 0 has mean gradient 0.8, block 1 has 1.0, the rest 0.
        let mag: Vec<f64> = (0..FRAME_SIZE * FRAME_SIZE)
            .map(|i| {
                let (x, y) = (i % FRAME_SIZE, i / FRAME_SIZE);
                match (y / BLOCK_SIZE, x / BLOCK_SIZE) {
                    (0, 0) => 0.8,
                    (0, 1) => 1.0,
                    _ => 0.0,
                }
            })
            .collect();
        let g = blur_cue(&r, &mag);
        assert!((g.get(0, 0) - 0.40).abs() < 1e-12);
        assert!((g.get(0, 1) - 1.0).abs() < 1e-12);
        assert_eq!(g.get(5, 5), 0.0);
    }

    #[test]
    fn flat_frame_has_no_blockiness() {
        assert_eq!(blockiness_cue(&GrayFrame::filled(0.3), 1.0), BlockGrid::zeros());
    }

    /// Direct evaluation: boundary strengths, per-block means, then a full
    /// 2D renormalized Gaussian.
    fn blockiness_oracle(frame: &GrayFrame) -> (BlockGrid, BlockGrid) {
        let strength_v = |r: usize, b: usize| {
            (0..16).map(|dy| (frame.get(16 * b, 16 * r + dy) - frame.get(16 * b - 1, 16 * r + dy)).abs()).sum::<f64>() / 16.0
        };
        let strength_h = |b: usize, c: usize| {
            (0..16).map(|dx| (frame.get(16 * c + dx, 16 * b) - frame.get(16 * c + dx, 16 * b - 1)).abs()).sum::<f64>() / 16.0
        };
        let raw = BlockGrid::from_fn(|r, c| {
            let mut v = Vec::new();
            if c > 0 {
                v.push(strength_v(r, c));
            }
            if c < 13 {
                v.push(strength_v(r, c + 1));
            }
            if r > 0 {
                v.push(strength_h(r, c));
            }
            if r < 13 {
                v.push(strength_h(r + 1, c));
            }
            v.iter().sum::<f64>() / v.len() as f64
        });
        let smooth = BlockGrid::from_fn(|r, c| {
            let (mut acc, mut w) = (0.0, 0.0);
            for rr in 0..14isize {
                for cc in 0..14isize {
                    let (dr, dc) = (rr - r as isize, cc - c as isize);
                    if dr.abs() <= 2 && dc.abs() <= 2 {
                        let k = (-((dr * dr + dc * dc) as f64) / 2.0).exp();
                        acc += k * raw.get(rr as usize, cc as usize);
                        w += k;
                    }
                }
            }
            acc / w
        });
        (raw, smooth)
    }

    #[test]
    fn aligned_step_matches_direct_evaluation() {
        let f = GrayFrame::from_fn(|x, _| if x < 112 { 0.2 } else { 0.8 });
        let raw = blockiness_raw(&f);
        let (oracle_raw, oracle_smooth) = blockiness_oracle(&f);
        for r in 0..14 {
            for c in 0..14 {
                let expected = match c {
                    6 | 7 => 0.6 / if r == 0 || r == 13 { 3.0 } else { 4.0 },
                    _ => 0.0,
                };
                assert!((raw.get(r, c) - expected).abs() < 1e-12, "({r},{c})");
                assert!((raw.get(r, c) - oracle_raw.get(r, c)).abs() < 1e-12);
            }
        }
        let smooth = blockiness_cue(&f, 1.0);
        for (a, b) in smooth.as_slice().iter().zip(oracle_smooth.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn unaligned_step_is_invisible() {
        let f = GrayFrame::from_fn(|x, _| if x < 100 { 0.2 } else { 0.8 });
        assert_eq!(blockiness_cue(&f, 1.0), BlockGrid::zeros());
    }

    #[test]
    fn random_frame_blockiness_matches_oracle() {
        let f = GrayFrame::from_fn(|x, y| (((x * 7919 + y * 104729) % 1013) as f64) / 1012.0);
        let (_, smooth) = blockiness_oracle(&f);
        let got = blockiness_cue(&f, 1.0);
        for (a, b) in got.as_slice().iter().zip(smooth.as_slice()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn shifting_by_one_block_shifts_cues_by_one_cell() {
        // A textured square that stays clear of the frame border.
        let pattern = |x: usize, y: usize, x0: usize| {
            let inside = (x0..x0 + 48).contains(&x) && (64..112).contains(&y);
            if inside {
                0.5 + 0.4 * (((x - x0) * 3 + y) % 5) as f64 / 4.0 - 0.2
            } else {
                0.1
            }
        };
        let a = GrayFrame::from_fn(|x, y| pattern(x, y, 48));
        let b = GrayFrame::from_fn(|x, y| pattern(x, y, 64));
        let cues = |f: &GrayFrame| {
            let s = sobel_gradient(f, 0.2);
            let r = crate::prior::frame_band_ratios(f);
            (ringing_cue(&r, &s.edges, 0.05), blur_cue(&r, &s.magnitude), blockiness_raw(f))
        };
        let (ra, ba, ka) = cues(&a);
        let (rb, bb, kb) = cues(&b);
        for r in 0..14 {
            for c in 0..13 {
                assert_eq!(ra.get(r, c), rb.get(r, c + 1));
                assert_eq!(ba.get(r, c), bb.get(r, c + 1));
                if c >= 1 && c + 2 < 14 {
                    assert_eq!(ka.get(r, c), kb.get(r, c + 1));
                }
            }
        }
    }
}
