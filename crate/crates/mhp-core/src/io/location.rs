//! Raw little-endian float32 location maps and instance-count sidecars.
//!
//! `{image_id}.loc.f32` holds H×W×4 channels row-major in the order
//! (x_left/w, y_top/h, x_right/w, y_bottom/h). `{image_id}.count.txt`
//! holds one decimal number, possibly fractional.

use std::path::Path;

use crate::cluster::LocationMap;
use crate::error::{Error, Result};
use crate::geometry::ImageSize;

pub fn load_location_map(path: impl AsRef<Path>, size: ImageSize) -> Result<LocationMap> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = size.pixel_count() * 4 * 4;
    if bytes.len() != expected {
        return Err(Error::codec(
            path,
            format!(
                "truncated location map: expected {expected} bytes for {size}, found {}",
                bytes.len()
            ),
        ));
    }
    let mut vectors = Vec::with_capacity(size.pixel_count());
    for chunk in bytes.chunks_exact(16) {
        let mut v = [0.0f32; 4];
        for (c, field) in v.iter_mut().enumerate() {
            let off = c * 4;
            *field = f32::from_le_bytes([
                chunk[off],
                chunk[off + 1],
                chunk[off + 2],
                chunk[off + 3],
            ]);
        }
        vectors.push(v);
    }
    LocationMap::from_vectors(size, vectors)
}

pub fn save_location_map(path: impl AsRef<Path>, map: &LocationMap) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut bytes = Vec::with_capacity(map.size().pixel_count() * 16);
    for v in map.vectors() {
        for c in v {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_instance_count(path: impl AsRef<Path>) -> Result<f64> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::codec(path, format!("`{}` is not a number", text.trim())))
}

pub fn save_instance_count(path: impl AsRef<Path>, count: f64) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, format!("{count}\n")).map_err(|e| Error::io(path, e))
}
