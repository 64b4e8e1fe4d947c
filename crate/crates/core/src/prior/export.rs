use std::fmt::Write as _;

use super::grid::BlockGrid;
use crate::GRID_SIZE;

/// Binary PGM (P5, maxval 255) with each value mapped to `round(v·255)`.
pub fn grid_to_pgm(grid: &BlockGrid) -> Vec<u8> {
    let mut out = format!("P5\n{GRID_SIZE} {GRID_SIZE}\n255\n").into_bytes();
    out.extend(
        grid.as_slice()
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

/// 14 lines of 14 comma-separated values with 6 decimals.
pub fn grid_to_csv(grid: &BlockGrid) -> String {
    let mut out = String::with_capacity(GRID_SIZE * GRID_SIZE * 9);
    for row in grid.as_slice().chunks(GRID_SIZE) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_layout() {
        let mut g = BlockGrid::filled(0.5);
        g.set(0, 0, 1.0);
        g.set(13, 13, 0.0);
        let pgm = grid_to_pgm(&g);
        let header = b"P5\n14 14\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        let body = &pgm[header.len()..];
        assert_eq!(body.len(), 196);
        assert_eq!((body[0], body[1], body[195]), (255, 128, 0));
    }

    #[test]
    fn csv_layout() {
        let csv = grid_to_csv(&BlockGrid::from_fn(|r, c| if (r, c) == (1, 2) { 0.25 } else { 0.0 }));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 14);
        assert!(lines.iter().all(|l| l.split(',').count() == 14));
        assert_eq!(lines[1].split(',').nth(2), Some("0.250000"));
        assert_eq!(lines[0].split(',').next(), Some("0.000000"));
    }
}
