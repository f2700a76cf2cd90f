//! Single-channel 8-bit PNG codec for instance masks and semantic maps.
//!
//! Category indices are stored as raw gray levels; no palette semantics are
//! relied upon. Save followed by load is pixel-exact.

use std::path::Path;

use image::{GrayImage, ImageFormat};

use crate::error::{Error, Result};
use crate::geometry::ImageSize;
use crate::scene::{InstanceMask, SemanticMap};

fn decode_gray(path: &Path) -> Result<(ImageSize, Vec<u8>)> {
    let reader = image::ImageReader::open(path).map_err(|e| Error::io(path, e))?;
    let decoded = reader
        .decode()
        .map_err(|e| Error::codec(path, format!("png decode failed: {e}")))?;
    let gray = match decoded {
        image::DynamicImage::ImageLuma8(img) => img,
        other => {
            return Err(Error::codec(
                path,
                format!(
                    "mask must be single-channel 8-bit, found {:?}",
                    other.color()
                ),
            ))
        }
    };
    let size = ImageSize::new(gray.width(), gray.height())
        .map_err(|e| Error::codec(path, e.to_string()))?;
    Ok((size, gray.into_raw()))
}

fn encode_gray(path: &Path, size: ImageSize, pixels: &[u8]) -> Result<()> {
    let img = GrayImage::from_raw(size.width, size.height, pixels.to_vec())
        .expect("buffer length matches size");
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    img.save_with_format(path, ImageFormat::Png)
        .map_err(|e| Error::codec(path, format!("png encode failed: {e}")))
}

pub fn load_instance_mask(path: impl AsRef<Path>) -> Result<InstanceMask> {
    let (size, pixels) = decode_gray(path.as_ref())?;
    InstanceMask::from_raw(size, pixels)
}

pub fn save_instance_mask(path: impl AsRef<Path>, mask: &InstanceMask) -> Result<()> {
    encode_gray(path.as_ref(), mask.size(), mask.pixels())
}

pub fn load_semantic_map(path: impl AsRef<Path>) -> Result<SemanticMap> {
    let (size, pixels) = decode_gray(path.as_ref())?;
    SemanticMap::from_raw(size, pixels)
}

pub fn save_semantic_map(path: impl AsRef<Path>, map: &SemanticMap) -> Result<()> {
    encode_gray(path.as_ref(), map.size(), map.pixels())
}
