//! Pixel-grid geometry: image sizes and inclusive-corner bounding boxes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width and height of an image grid in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImageSize {
    pub width: u32,
    pub height: u32,
}

impl ImageSize {
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain(format!(
                "image size {width}x{height}: both sides must be at least 1"
            )));
        }
        Ok(Self { width, height })
    }

    pub fn pixel_count(self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Row-major flat index of `(x, y)`.
    #[inline]
    pub fn index(self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    /// Inverse of [`ImageSize::index`].
    #[inline]
    pub fn coords(self, index: usize) -> (u32, u32) {
        let w = self.width as usize;
        ((index % w) as u32, (index / w) as u32)
    }
}

impl fmt::Display for ImageSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Axis-aligned box with inclusive corners; a single pixel has width 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_left: u32,
    pub y_top: u32,
    pub x_right: u32,
    pub y_bottom: u32,
}

impl BoundingBox {
    pub fn new(x_left: u32, y_top: u32, x_right: u32, y_bottom: u32) -> Result<Self> {
        if x_left > x_right || y_top > y_bottom {
            return Err(Error::domain(format!(
                "degenerate bounding box ({x_left},{y_top})-({x_right},{y_bottom})"
            )));
        }
        Ok(Self {
            x_left,
            y_top,
            x_right,
            y_bottom,
        })
    }

    pub fn width(self) -> u32 {
        self.x_right - self.x_left + 1
    }

    pub fn height(self) -> u32 {
        self.y_bottom - self.y_top + 1
    }

    pub fn area(self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn contains(self, x: u32, y: u32) -> bool {
        x >= self.x_left && x <= self.x_right && y >= self.y_top && y <= self.y_bottom
    }

    pub fn fits_within(self, size: ImageSize) -> bool {
        self.x_right < size.width && self.y_bottom < size.height
    }

    pub fn intersection(self, other: BoundingBox) -> Option<BoundingBox> {
        let x_left = self.x_left.max(other.x_left);
        let y_top = self.y_top.max(other.y_top);
        let x_right = self.x_right.min(other.x_right);
        let y_bottom = self.y_bottom.min(other.y_bottom);
        if x_left <= x_right && y_top <= y_bottom {
            Some(BoundingBox {
                x_left,
                y_top,
                x_right,
                y_bottom,
            })
        } else {
            None
        }
    }

    pub fn intersects(self, other: BoundingBox) -> bool {
        self.intersection(other).is_some()
    }

    /// Overlap area over union area under the inclusive-corner convention.
    pub fn iou(self, other: BoundingBox) -> f64 {
        let inter = self.intersection(other).map_or(0, BoundingBox::area);
        let union = self.area() + other.area() - inter;
        inter as f64 / union as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_rejects_zero() {
        assert!(ImageSize::new(0, 4).is_err());
        assert!(ImageSize::new(4, 0).is_err());
    }

    #[test]
    fn single_pixel_box_has_unit_extent() {
        let b = BoundingBox::new(3, 7, 3, 7).unwrap();
        assert_eq!(b.width(), 1);
        assert_eq!(b.height(), 1);
        assert_eq!(b.area(), 1);
    }

    #[test]
    fn identical_boxes_have_iou_one() {
        let b = BoundingBox::new(2, 2, 5, 9).unwrap();
        assert_eq!(b.iou(b), 1.0);
    }

    #[test]
    fn disjoint_boxes_have_iou_zero() {
        let a = BoundingBox::new(0, 0, 1, 1).unwrap();
        let b = BoundingBox::new(3, 3, 4, 4).unwrap();
        assert_eq!(a.iou(b), 0.0);
        assert!(!a.intersects(b));
    }

    #[test]
    fn inclusive_overlap() {
        // Two 2x5 boxes sharing one pixel column: intersection 5, union 15.
        let a = BoundingBox::new(0, 0, 1, 4).unwrap();
        let b = BoundingBox::new(1, 0, 2, 4).unwrap();
        let inter = a.intersection(b).unwrap();
        assert_eq!(inter.area(), 5);
        assert_eq!(a.iou(b), 5.0 / 15.0);
    }
}
