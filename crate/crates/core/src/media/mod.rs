//! Frame decoding, grayscale conversion, resizing and temporal sampling.

mod gray;
mod images;
mod resize;
mod sampling;
mod y4m;

pub use gray::to_grayscale;
pub use images::load_image_sequence;
pub use resize::resize_bilinear;
pub use sampling::{sample_frames, window_for, SamplingPlan};
pub use y4m::{parse_y4m, read_y4m, write_y4m};

use std::path::PathBuf;

use thiserror::Error;

use crate::FRAME_SIZE;

#[derive(Debug, Error)]
pub enum MediaError {
    #[error("format error: {0}")]
    Format(String),
    #[error("truncated frame {frame}: expected {expected} payload bytes, found {found}")]
    Truncated {
        frame: usize,
        expected: usize,
        found: usize,
    },
    #[error("unsupported colorspace {0:?}")]
    UnsupportedColorspace(String),
    #[error("no input frames match {0:?}")]
    NotFound(String),
    #[error("{path}: dimensions {actual:?} differ from {expected:?}")]
    DimensionMismatch {
        path: PathBuf,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: cannot decode image: {message}")]
    Image { path: PathBuf, message: String },
    #[error("invalid frame sequence: {0}")]
    Invalid(String),
}

impl MediaError {
    /// True for errors caused by the environment (missing files, unreadable
    /// paths) rather than by malformed content.
    pub fn is_io(&self) -> bool {
        matches!(self, MediaError::Io { .. } | MediaError::NotFound(_))
    }
}

/// Pixel layout of a decoded frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Colorspace {
    /// Planar Y, U, V with chroma subsampled 2× in both directions.
    Yuv420,
    /// Planar Y, U, V at full resolution.
    Yuv444,
    /// Single 8-bit plane.
    Mono,
    /// Interleaved 8-bit R, G, B.
    Rgb8,
}

impl Colorspace {
    /// Byte sizes of each plane for a `width × height` frame.
    pub fn plane_sizes(self, width: usize, height: usize) -> Vec<usize> {
        let luma = width * height;
        match self {
            Colorspace::Yuv420 => {
                let chroma = width.div_ceil(2) * height.div_ceil(2);
                vec![luma, chroma, chroma]
            }
            Colorspace::Yuv444 => vec![luma; 3],
            Colorspace::Mono => vec![luma],
            Colorspace::Rgb8 => vec![3 * luma],
        }
    }

    pub fn frame_bytes(self, width: usize, height: usize) -> usize {
        self.plane_sizes(width, height).iter().sum()
    }
}

/// One decoded frame: planes laid out as described by [`Colorspace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFrame {
    pub planes: Vec<Vec<u8>>,
}

/// A decoded video: frames sharing one geometry and colorspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSequence {
    width: usize,
    height: usize,
    colorspace: Colorspace,
    frames: Vec<RawFrame>,
}

impl FrameSequence {
    pub fn new(
        width: usize,
        height: usize,
        colorspace: Colorspace,
        frames: Vec<RawFrame>,
    ) -> Result<Self, MediaError> {
        if width == 0 || height == 0 {
            return Err(MediaError::Invalid(format!("empty geometry {width}x{height}")));
        }
        if frames.is_empty() {
            return Err(MediaError::Invalid("no frames".into()));
        }
        let sizes = colorspace.plane_sizes(width, height);
        for (i, frame) in frames.iter().enumerate() {
            let actual: Vec<usize> = frame.planes.iter().map(Vec::len).collect();
            if actual != sizes {
                return Err(MediaError::Invalid(format!(
                    "frame {i} has plane sizes {actual:?}, expected {sizes:?}"
                )));
            }
        }
        Ok(FrameSequence {
            width,
            height,
            colorspace,
            frames,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn colorspace(&self) -> Colorspace {
        self.colorspace
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn frames(&self) -> &[RawFrame] {
        &self.frames
    }

    /// Grayscale conversion followed by a bilinear resize to 224×224.
    pub fn analysis_frame(&self, index: usize) -> GrayFrame {
        let pixel = gray::gray_pixel(self, index);
        GrayFrame::new(resize::resample(self.width, self.height, FRAME_SIZE, FRAME_SIZE, pixel))
    }
}

/// Grayscale image at arbitrary resolution, values in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "gray image payload size");
        GrayImage {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        GrayImage::new(width, height, vec![value; width * height])
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// A 224×224 analysis frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrame {
    data: Vec<f64>,
}

impl GrayFrame {
    pub const LEN: usize = FRAME_SIZE * FRAME_SIZE;

    /// Panics if `data` is not exactly 224×224 values.
    pub fn new(data: Vec<f64>) -> Self {
        assert_eq!(data.len(), Self::LEN, "analysis frame must be 224x224");
        GrayFrame { data }
    }

    pub fn filled(value: f64) -> Self {
        GrayFrame::new(vec![value; Self::LEN])
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(Self::LEN);
        for y in 0..FRAME_SIZE {
            for x in 0..FRAME_SIZE {
                data.push(f(x, y));
            }
        }
        GrayFrame { data }
    }

    /// Panics unless `image` is 224×224.
    pub fn from_image(image: &GrayImage) -> Self {
        assert!(image.width == FRAME_SIZE && image.height == FRAME_SIZE);
        GrayFrame::new(image.data.clone())
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * FRAME_SIZE + x]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
