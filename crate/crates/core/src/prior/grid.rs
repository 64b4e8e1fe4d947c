use crate::{BLOCK_SIZE, FRAME_SIZE, GRID_CELLS, GRID_SIZE};

/// Ranges narrower than this are treated as constant by [`BlockGrid::min_max_normalized`].
pub(crate) const FLAT_RANGE: f64 = 1e-9;

/// One scalar per 16×16 block of an analysis frame, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockGrid(pub [f64; GRID_CELLS]);

impl BlockGrid {
    pub fn zeros() -> Self {
        BlockGrid([0.0; GRID_CELLS])
    }

    pub fn filled(value: f64) -> Self {
        BlockGrid([value; GRID_CELLS])
    }

    /// Builds a grid from `f(row, col)`.
    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut g = [0.0; GRID_CELLS];
        for (i, v) in g.iter_mut().enumerate() {
            *v = f(i / GRID_SIZE, i % GRID_SIZE);
        }
        BlockGrid(g)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[row * GRID_SIZE + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.0[row * GRID_SIZE + col] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / GRID_CELLS as f64
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rescales to `[0, 1]`; a (numerically) constant grid maps to `flat`.
    pub fn min_max_normalized(&self, flat: f64) -> BlockGrid {
        let (lo, hi) = (self.min(), self.max());
        let range = hi - lo;
        if !(range > FLAT_RANGE) {
            return BlockGrid::filled(flat);
        }
        let mut out = [0.0; GRID_CELLS];
        for (o, &v) in out.iter_mut().zip(&self.0) {
            *o = ((v - lo) / range).clamp(0.0, 1.0);
        }
        BlockGrid(out)
    }
}

/// Mean of a 224×224 per-pixel field over each 16×16 block. Sums run in
/// raster order within the block.
pub(crate) fn block_average(values: &[f64]) -> BlockGrid {
    debug_assert_eq!(values.len(), FRAME_SIZE * FRAME_SIZE);
    let mut out = [0.0; GRID_CELLS];
    for (cell, o) in out.iter_mut().enumerate() {
        let (row, col) = (cell / GRID_SIZE, cell % GRID_SIZE);
        let mut acc = 0.0;
        for dy in 0..BLOCK_SIZE {
            let start = (row * BLOCK_SIZE + dy) * FRAME_SIZE + col * BLOCK_SIZE;
            acc += values[start..start + BLOCK_SIZE].iter().sum::<f64>();
        }
        *o = acc / (BLOCK_SIZE * BLOCK_SIZE) as f64;
    }
    BlockGrid(out)
}

impl Default for BlockGrid {
    fn default() -> Self {
        BlockGrid::zeros()
    }
}
