use super::dct::{dct2_16, frame_block, DctBlock};
use crate::media::GrayFrame;
use crate::{BLOCK_SIZE, GRID_CELLS, GRID_SIZE};

const AC_ENERGY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Low,
    Mid,
    High,
}

/// Band of an AC coefficient by anti-diagonal index `s = u + v`:
/// low `1..=5`, mid `6..=15`, high `16..=30`. DC has no band.
pub fn band_of(u: usize, v: usize) -> Option<Band> {
    match u + v {
        0 => None,
        1..=5 => Some(Band::Low),
        6..=15 => Some(Band::Mid),
        _ => Some(Band::High),
    }
}

/// Fractions of a block's AC energy in each band.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BandRatios {
    pub low: f64,
    pub mid: f64,
    pub high: f64,
}

/// Band energy ratios; all zero when the block has no AC energy.
pub fn band_ratios(coeffs: &DctBlock) -> BandRatios {
    let (mut low, mut mid, mut high) = (0.0, 0.0, 0.0);
    for u in 0..BLOCK_SIZE {
        for v in 0..BLOCK_SIZE {
            let e = coeffs.get(u, v) * coeffs.get(u, v);
            match band_of(u, v) {
                Some(Band::Low) => low += e,
                Some(Band::Mid) => mid += e,
                Some(Band::High) => high += e,
                None => {}
            }
        }
    }
    let total = low + mid + high;
    if total < AC_ENERGY_FLOOR {
        return BandRatios::default();
    }
    BandRatios {
        low: low / total,
        mid: mid / total,
        high: high / total,
    }
}

/// Band ratios of all 196 blocks of `frame`, row-major.
pub fn frame_band_ratios(frame: &GrayFrame) -> Vec<BandRatios> {
    (0..GRID_CELLS)
        .map(|i| band_ratios(&dct2_16(&frame_block(frame, i / GRID_SIZE, i % GRID_SIZE))))
        .collect()
}
