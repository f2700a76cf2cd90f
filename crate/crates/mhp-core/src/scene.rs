//! Scene and mask domain types.
//!
//! A scene is one image's ordered list of per-instance category masks.
//! Every mask covers the full image grid; pixels owned by other persons are
//! background within that mask. Structural invariants (pixel buffer length)
//! are enforced at construction; value invariants (category range, non-empty
//! foreground, instance count) are reported by [`validate`] as data rather
//! than failures.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, ImageSize};
use crate::labels::{CategoryId, LabelSpec};

/// Dense per-pixel category map for one person instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMask {
    size: ImageSize,
    pixels: Vec<u8>,
}

impl InstanceMask {
    /// Wraps a row-major category buffer; the length must equal the pixel
    /// count of `size`.
    pub fn from_raw(size: ImageSize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != size.pixel_count() {
            return Err(Error::domain(format!(
                "mask buffer holds {} pixels but size {} needs {}",
                pixels.len(),
                size,
                size.pixel_count()
            )));
        }
        Ok(Self { size, pixels })
    }

    /// An all-background mask.
    pub fn blank(size: ImageSize) -> Self {
        Self {
            size,
            pixels: vec![0; size.pixel_count()],
        }
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn category_at(&self, x: u32, y: u32) -> CategoryId {
        CategoryId(self.pixels[self.size.index(x, y)])
    }

    pub fn set_category(&mut self, x: u32, y: u32, category: CategoryId) {
        let idx = self.size.index(x, y);
        self.pixels[idx] = category.0;
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p != 0).count()
    }

    /// Pixel counts per category value, indexed by raw id.
    pub fn category_counts(&self) -> Box<[u32; 256]> {
        let mut counts = Box::new([0u32; 256]);
        for &p in &self.pixels {
            counts[p as usize] += 1;
        }
        counts
    }

    /// Distinct non-background categories present, ascending.
    pub fn categories_present(&self) -> Vec<CategoryId> {
        let counts = self.category_counts();
        (1..256)
            .filter(|&c| counts[c] > 0)
            .map(|c| CategoryId(c as u8))
            .collect()
    }

    /// Minimal axis-aligned box containing every non-background pixel.
    pub fn bounding_box(&self) -> Result<BoundingBox> {
        let mut found = false;
        let (mut min_x, mut min_y, mut max_x, mut max_y) = (u32::MAX, u32::MAX, 0u32, 0u32);
        for (idx, &p) in self.pixels.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let (x, y) = self.size.coords(idx);
            if !found {
                found = true;
                min_x = x;
                max_x = x;
                min_y = y;
                max_y = y;
            } else {
                min_x = min_x.min(x);
                max_x = max_x.max(x);
                min_y = min_y.min(y);
                max_y = max_y.max(y);
            }
        }
        if !found {
            return Err(Error::domain("empty instance"));
        }
        BoundingBox::new(min_x, min_y, max_x, max_y)
    }
}

/// Instance-agnostic per-pixel category map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticMap {
    size: ImageSize,
    pixels: Vec<u8>,
}

impl SemanticMap {
    pub fn from_raw(size: ImageSize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != size.pixel_count() {
            return Err(Error::domain(format!(
                "semantic map buffer holds {} pixels but size {} needs {}",
                pixels.len(),
                size,
                size.pixel_count()
            )));
        }
        Ok(Self { size, pixels })
    }

    pub fn blank(size: ImageSize) -> Self {
        Self {
            size,
            pixels: vec![0; size.pixel_count()],
        }
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn category_at(&self, x: u32, y: u32) -> CategoryId {
        CategoryId(self.pixels[self.size.index(x, y)])
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p != 0).count()
    }
}

/// One image's ordered per-instance masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneAnnotation {
    pub image_id: String,
    pub size: ImageSize,
    pub instances: Vec<InstanceMask>,
}

impl SceneAnnotation {
    pub fn new(image_id: impl Into<String>, size: ImageSize, instances: Vec<InstanceMask>) -> Self {
        Self {
            image_id: image_id.into(),
            size,
            instances,
        }
    }

    pub fn person_count(&self) -> usize {
        self.instances.len()
    }

    /// Collapses the instance list into one instance-agnostic map. Where
    /// instances overlap, the highest-index instance wins, matching the
    /// left-to-right annotation order semantics.
    pub fn flatten(&self) -> Result<SemanticMap> {
        let mut out = vec![0u8; self.size.pixel_count()];
        for (i, mask) in self.instances.iter().enumerate() {
            if mask.size() != self.size {
                return Err(Error::domain(format!(
                    "instance {i} has size {} but the scene is {}",
                    mask.size(),
                    self.size
                )));
            }
            for (idx, &p) in mask.pixels().iter().enumerate() {
                if p != 0 {
                    out[idx] = p;
                }
            }
        }
        SemanticMap::from_raw(self.size, out)
    }
}

/// A scene paired with one confidence score per instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredScene {
    pub scene: SceneAnnotation,
    pub scores: Vec<f64>,
}

impl ScoredScene {
    pub fn new(scene: SceneAnnotation, scores: Vec<f64>) -> Self {
        Self { scene, scores }
    }

    /// Wraps a scene with unit confidence on every instance.
    pub fn with_unit_scores(scene: SceneAnnotation) -> Self {
        let scores = vec![1.0; scene.instances.len()];
        Self { scene, scores }
    }

    pub fn instance_count(&self) -> usize {
        self.scene.instances.len()
    }
}

/// A single invariant violation found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    CategoryOutOfRange {
        instance: usize,
        value: u8,
        pixels: usize,
    },
    EmptyInstance {
        instance: usize,
    },
    SizeMismatch {
        instance: usize,
        expected: ImageSize,
        found: ImageSize,
    },
    FewerThanTwoInstances {
        found: usize,
    },
    ScoreCountMismatch {
        scores: usize,
        instances: usize,
    },
    ScoreOutOfRange {
        index: usize,
        score: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CategoryOutOfRange {
                instance,
                value,
                pixels,
            } => write!(
                f,
                "category out of range: instance {instance} uses value {value} on {pixels} pixel(s)"
            ),
            Violation::EmptyInstance { instance } => {
                write!(f, "empty instance: instance {instance} has no foreground pixel")
            }
            Violation::SizeMismatch {
                instance,
                expected,
                found,
            } => write!(
                f,
                "size mismatch: instance {instance} is {found}, scene is {expected}"
            ),
            Violation::FewerThanTwoInstances { found } => {
                write!(f, "fewer than two instances: found {found}")
            }
            Violation::ScoreCountMismatch { scores, instances } => {
                write!(f, "score count mismatch: {scores} scores for {instances} instances")
            }
            Violation::ScoreOutOfRange { index, score } => {
                write!(f, "score out of range: entry {index} is {score}")
            }
        }
    }
}

/// Checks every type invariant and returns the violations found. Strict
/// mode adds the ground-truth rule that a scene holds at least two persons.
pub fn validate(scene: &SceneAnnotation, spec: &LabelSpec, strict: bool) -> Vec<Violation> {
    let mut violations = Vec::new();
    let count = spec.count() as u16;
    for (i, mask) in scene.instances.iter().enumerate() {
        if mask.size() != scene.size {
            violations.push(Violation::SizeMismatch {
                instance: i,
                expected: scene.size,
                found: mask.size(),
            });
        }
        let counts = mask.category_counts();
        let mut foreground = 0usize;
        for value in 1..256usize {
            let pixels = counts[value] as usize;
            if pixels == 0 {
                continue;
            }
            foreground += pixels;
            if value as u16 >= count {
                violations.push(Violation::CategoryOutOfRange {
                    instance: i,
                    value: value as u8,
                    pixels,
                });
            }
        }
        if foreground == 0 {
            violations.push(Violation::EmptyInstance { instance: i });
        }
    }
    if strict && scene.person_count() < 2 {
        violations.push(Violation::FewerThanTwoInstances {
            found: scene.person_count(),
        });
    }
    violations
}

/// [`validate`] plus the score invariants of a prediction carrier.
pub fn validate_scored(scored: &ScoredScene, spec: &LabelSpec) -> Vec<Violation> {
    let mut violations = validate(&scored.scene, spec, false);
    if scored.scores.len() != scored.scene.instances.len() {
        violations.push(Violation::ScoreCountMismatch {
            scores: scored.scores.len(),
            instances: scored.scene.instances.len(),
        });
    }
    for (i, &s) in scored.scores.iter().enumerate() {
        if !(0.0..=1.0).contains(&s) || s.is_nan() {
            violations.push(Violation::ScoreOutOfRange { index: i, score: s });
        }
    }
    violations
}

/// Converts a non-empty violation list into an error for loaders that must
/// refuse invalid data outright.
pub fn require_valid(
    image_id: &str,
    violations: Vec<Violation>,
) -> std::result::Result<(), Error> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidScene {
            image_id: image_id.to_owned(),
            violations,
        })
    }
}
