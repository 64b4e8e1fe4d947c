use std::path::{Path, PathBuf};

use image::{ColorType, DynamicImage};

use super::{Colorspace, FrameSequence, MediaError, RawFrame};

/// Loads every image matching the glob `pattern`, ordered by file name.
///
/// Accepts 8-bit gray and RGB files (alpha is dropped). If any frame has
/// color the whole sequence is promoted to RGB.
pub fn load_image_sequence(pattern: &str) -> Result<FrameSequence, MediaError> {
    let entries = glob::glob(pattern)
        .map_err(|e| MediaError::Format(format!("bad file pattern {pattern:?}: {e}")))?;
    let mut paths: Vec<PathBuf> = entries.filter_map(Result::ok).filter(|p| p.is_file()).collect();
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    if paths.is_empty() {
        return Err(MediaError::NotFound(pattern.to_string()));
    }

    let mut decoded = Vec::with_capacity(paths.len());
    for path in &paths {
        decoded.push(open(path)?);
    }
    let (width, height) = (decoded[0].width() as usize, decoded[0].height() as usize);
    for (path, img) in paths.iter().zip(&decoded) {
        let actual = (img.width() as usize, img.height() as usize);
        if actual != (width, height) {
            return Err(MediaError::DimensionMismatch {
                path: path.clone(),
                expected: (width, height),
                actual,
            });
        }
    }

    let color = decoded
        .iter()
        .any(|img| !matches!(img.color(), ColorType::L8 | ColorType::La8));
    let (colorspace, frames) = if color {
        let frames = decoded
            .into_iter()
            .map(|img| RawFrame {
                planes: vec![img.into_rgb8().into_raw()],
            })
            .collect();
        (Colorspace::Rgb8, frames)
    } else {
        let frames = decoded
            .into_iter()
            .map(|img| RawFrame {
                planes: vec![img.into_luma8().into_raw()],
            })
            .collect();
        (Colorspace::Mono, frames)
    };
    FrameSequence::new(width, height, colorspace, frames)
}

fn open(path: &Path) -> Result<DynamicImage, MediaError> {
    let img = image::open(path).map_err(|e| match e {
        image::ImageError::IoError(source) => MediaError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => MediaError::Image {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })?;
    match img.color() {
        ColorType::L8 | ColorType::La8 | ColorType::Rgb8 | ColorType::Rgba8 => Ok(img),
        other => Err(MediaError::Image {
            path: path.to_path_buf(),
            message: format!("unsupported pixel format {other:?}, expected 8-bit gray or RGB"),
        }),
    }
}
