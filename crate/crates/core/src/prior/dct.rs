use std::sync::OnceLock;

use crate::media::GrayFrame;
use crate::{BLOCK_SIZE, FRAME_SIZE};

pub type Block16 = [[f64; BLOCK_SIZE]; BLOCK_SIZE];

/// Orthonormal 2D DCT-II coefficients of one block, indexed `[u][v]` with
/// `u` the vertical and `v` the horizontal frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DctBlock(pub Block16);

impl DctBlock {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.0[u][v]
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().flatten().map(|c| c * c).sum()
    }
}

/// `basis[k][n] = a_k cos(π(2n+1)k / 32)`.
fn basis() -> &'static Block16 {
    static BASIS: OnceLock<Block16> = OnceLock::new();
    BASIS.get_or_init(|| {
        let n = BLOCK_SIZE as f64;
        let mut c = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for (k, row) in c.iter_mut().enumerate() {
            let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            for (i, v) in row.iter_mut().enumerate() {
                *v = scale * (std::f64::consts::PI * (2 * i + 1) as f64 * k as f64 / (2.0 * n)).cos();
            }
        }
        c
    })
}

/// Separable orthonormal DCT-II of a 16×16 block.
pub fn dct2_16(block: &Block16) -> DctBlock {
    let c = basis();
    // Columns first: tmp = C · B.
    let mut tmp = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for u in 0..BLOCK_SIZE {
        for y in 0..BLOCK_SIZE {
            let cu = c[u][y];
            for x in 0..BLOCK_SIZE {
                tmp[u][x] += cu * block[y][x];
            }
        }
    }
    // Then rows: X = tmp · Cᵀ.
    let mut out = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for u in 0..BLOCK_SIZE {
        for v in 0..BLOCK_SIZE {
            let mut acc = 0.0;
            for x in 0..BLOCK_SIZE {
                acc += tmp[u][x] * c[v][x];
            }
            out[u][v] = acc;
        }
    }
    DctBlock(out)
}

/// Copies block (`row`, `col`) of the 14×14 tiling out of `frame`.
pub fn frame_block(frame: &GrayFrame, row: usize, col: usize) -> Block16 {
    let data = frame.as_slice();
    let mut b = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
    for (dy, line) in b.iter_mut().enumerate() {
        let start = (row * BLOCK_SIZE + dy) * FRAME_SIZE + col * BLOCK_SIZE;
        line.copy_from_slice(&data[start..start + BLOCK_SIZE]);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct double sum of the DCT-II definition.
    fn oracle(block: &Block16) -> Block16 {
        let n = BLOCK_SIZE as f64;
        let a = |k: usize| if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
        let mut out = [[0.0; BLOCK_SIZE]; BLOCK_SIZE];
        for u in 0..BLOCK_SIZE {
            for v in 0..BLOCK_SIZE {
                let mut acc = 0.0;
                for y in 0..BLOCK_SIZE {
                    for x in 0..BLOCK_SIZE {
                        acc += block[y][x]
                            * (std::f64::consts::PI * (2 * y + 1) as f64 * u as f64 / 32.0).cos()
                            * (std::f64::consts::PI * (2 * x + 1) as f64 * v as f64 / 32.0).cos();
                    }
                }
                out[u][v] = a(u) * a(v) * acc;
            }
        }
        out
    }

    #[test]
    fn constant_block_has_only_dc() {
        let x = dct2_16(&[[1.0; 16]; 16]);
        assert!((x.get(0, 0) - 16.0).abs() < 1e-12);
        for u in 0..16 {
            for v in 0..16 {
                if (u, v) != (0, 0) {
                    assert!(x.get(u, v).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn impulse_matches_oracle() {
        let mut b = [[0.0; 16]; 16];
        b[0][0] = 1.0;
        let x = dct2_16(&b);
        assert!((x.get(0, 0) - 0.0625).abs() < 1e-12);
        let o = oracle(&b);
        for u in 0..16 {
            for v in 0..16 {
                assert!((x.get(u, v) - o[u][v]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn random_blocks_match_oracle_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let mut b = [[0.0; 16]; 16];
            b.iter_mut().flatten().for_each(|v| *v = rng.random::<f64>());
            let x = dct2_16(&b);
            let o = oracle(&b);
            for u in 0..16 {
                for v in 0..16 {
                    assert!((x.get(u, v) - o[u][v]).abs() < 1e-10);
                }
            }
            let e: f64 = b.iter().flatten().map(|v| v * v).sum();
            assert!(((x.energy() - e) / e).abs() < 1e-12);
        }
    }

    #[test]
    fn block_extraction_uses_tiling() {
        let f = GrayFrame::from_fn(|x, y| (x + 1000 * y) as f64);
        let b = frame_block(&f, 2, 3);
        assert_eq!(b[0][0], (48 + 1000 * 32) as f64);
        assert_eq!(b[15][15], (63 + 1000 * 47) as f64);
    }
}
