use super::GrayImage;

/// Bilinear resampling with half-pixel centers and edge clamping.
pub fn resize_bilinear(src: &GrayImage, out_w: usize, out_h: usize) -> GrayImage {
    assert!(src.width >= 1 && src.height >= 1 && out_w >= 1 && out_h >= 1);
    if src.width == out_w && src.height == out_h {
        return src.clone();
    }
    let data = resample(src.width, src.height, out_w, out_h, |i| src.data[i]);
    GrayImage::new(out_w, out_h, data)
}

/// Bilinear resampling over a row-major pixel accessor, so sources need
/// not be materialized at full resolution.
pub(crate) fn resample(
    in_w: usize,
    in_h: usize,
    out_w: usize,
    out_h: usize,
    pixel: impl Fn(usize) -> f64,
) -> Vec<f64> {
    if in_w == out_w && in_h == out_h {
        return (0..in_w * in_h).map(pixel).collect();
    }
    let xs = taps(in_w, out_w);
    let ys = taps(in_h, out_h);
    let mut data = Vec::with_capacity(out_w * out_h);
    for &(y0, y1, fy) in &ys {
        let (row0, row1) = (y0 * in_w, y1 * in_w);
        for &(x0, x1, fx) in &xs {
            let (a, b) = (pixel(row0 + x0), pixel(row0 + x1));
            let (c, d) = (pixel(row1 + x0), pixel(row1 + x1));
            let top = a + (b - a) * fx;
            let bottom = c + (d - c) * fx;
            data.push(top + (bottom - top) * fy);
        }
    }
    data
}

/// Source sample pairs and interpolation fraction for each output coordinate.
fn taps(in_len: usize, out_len: usize) -> Vec<(usize, usize, f64)> {
    let scale = in_len as f64 / out_len as f64;
    let max = (in_len - 1) as f64;
    (0..out_len)
        .map(|o| {
            let s = ((o as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let i0 = s.floor() as usize;
            let i1 = (i0 + 1).min(in_len - 1);
            (i0, i1, s - i0 as f64)
        })
        .collect()
}
