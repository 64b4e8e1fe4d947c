use super::{Colorspace, FrameSequence, GrayImage};

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Converts frame `index` of `seq` to grayscale at native resolution.
///
/// RGB uses Rec. 601 luma weights; YUV and mono pass the first plane through.
pub fn to_grayscale(seq: &FrameSequence, index: usize) -> GrayImage {
    let n = seq.width() * seq.height();
    let pixel = gray_pixel(seq, index);
    GrayImage::new(seq.width(), seq.height(), (0..n).map(pixel).collect())
}

/// Grayscale value of the pixel at a row-major offset.
pub(crate) fn gray_pixel(seq: &FrameSequence, index: usize) -> impl Fn(usize) -> f64 + '_ {
    let plane = &seq.frames()[index].planes[0];
    let rgb = seq.colorspace() == Colorspace::Rgb8;
    move |i| {
        if rgb {
            rgb_to_gray(plane[3 * i], plane[3 * i + 1], plane[3 * i + 2])
        } else {
            f64::from(plane[i]) / 255.0
        }
    }
}

#[inline]
pub(crate) fn rgb_to_gray(r: u8, g: u8, b: u8) -> f64 {
    let y = LUMA_R * f64::from(r) + LUMA_G * f64::from(g) + LUMA_B * f64::from(b);
    (y / 255.0).clamp(0.0, 1.0)
}
