//! Pixel IoU primitives: whole-mask, per-part and region overlap.

use std::collections::BTreeMap;

use crate::geometry::ImageSize;
use crate::labels::CategoryId;
use crate::scene::InstanceMask;

/// A set of pixels over an image grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelSet {
    size: ImageSize,
    bits: Vec<bool>,
}

impl PixelSet {
    pub fn new(size: ImageSize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), size.pixel_count());
        Self { size, bits }
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Pixels of one instance carrying `category`.
    pub fn of_category(mask: &InstanceMask, category: CategoryId) -> Self {
        let bits = mask.pixels().iter().map(|&p| p == category.0).collect();
        Self::new(mask.size(), bits)
    }

    /// All non-background pixels of one instance.
    pub fn foreground(mask: &InstanceMask) -> Self {
        let bits = mask.pixels().iter().map(|&p| p != 0).collect();
        Self::new(mask.size(), bits)
    }
}

/// Intersection over union of two pixel sets on the same grid. Both sets
/// empty yields 1.0; exactly one empty yields 0.0.
pub fn mask_iou(a: &PixelSet, b: &PixelSet) -> f64 {
    assert_eq!(a.size(), b.size(), "pixel sets must share one grid");
    let mut intersection = 0u64;
    let mut union = 0u64;
    for (&x, &y) in a.bits.iter().zip(&b.bits) {
        if x && y {
            intersection += 1;
        }
        if x || y {
            union += 1;
        }
    }
    ratio(intersection, union)
}

#[inline]
fn ratio(intersection: u64, union: u64) -> f64 {
    if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    }
}

/// Which categories enter the part-IoU average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryAveraging {
    /// Categories present in either instance; one-sided categories score 0.
    #[default]
    Union,
    /// Only categories present in the ground-truth instance.
    GtOnly,
}

/// Per-category and region overlap of a prediction/ground-truth pair,
/// computed in one pass over the intersection of their bounding boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct PairIou {
    /// IoU of the two foreground pixel sets.
    pub region: f64,
    /// Mean per-category IoU over the averaging set; 0.0 when that set is
    /// empty.
    pub part_mean: f64,
    /// Per-category IoU for every category in the averaging set.
    pub per_category: BTreeMap<CategoryId, f64>,
}

/// Computes [`PairIou`] for two instances on the same grid.
pub fn instance_pair_iou(
    pred: &InstanceMask,
    gt: &InstanceMask,
    averaging: CategoryAveraging,
) -> PairIou {
    assert_eq!(pred.size(), gt.size(), "instances must share one grid");
    let size = pred.size();

    let pred_counts = pred.category_counts();
    let gt_counts = gt.category_counts();

    // Intersections only happen inside the overlap of the tight boxes.
    let mut cat_inter = [0u32; 256];
    let mut region_inter = 0u64;
    let window = match (pred.bounding_box(), gt.bounding_box()) {
        (Ok(a), Ok(b)) => a.intersection(b),
        _ => None,
    };
    if let Some(w) = window {
        let pp = pred.pixels();
        let gp = gt.pixels();
        for y in w.y_top..=w.y_bottom {
            let row = size.index(w.x_left, y);
            let row_end = row + (w.x_right - w.x_left) as usize + 1;
            for (p, g) in pp[row..row_end].iter().zip(&gp[row..row_end]) {
                if *p != 0 && *g != 0 {
                    region_inter += 1;
                    if p == g {
                        cat_inter[*p as usize] += 1;
                    }
                }
            }
        }
    }

    let mut per_category = BTreeMap::new();
    let mut sum = 0.0;
    for value in 1..256usize {
        let in_pred = pred_counts[value] > 0;
        let in_gt = gt_counts[value] > 0;
        let included = match averaging {
            CategoryAveraging::Union => in_pred || in_gt,
            CategoryAveraging::GtOnly => in_gt,
        };
        if !included {
            continue;
        }
        let inter = cat_inter[value] as u64;
        let union = pred_counts[value] as u64 + gt_counts[value] as u64 - inter;
        let iou = ratio(inter, union);
        per_category.insert(CategoryId(value as u8), iou);
        sum += iou;
    }
    let part_mean = if per_category.is_empty() {
        0.0
    } else {
        sum / per_category.len() as f64
    };

    let pred_fg: u64 = (1..256).map(|v| pred_counts[v] as u64).sum();
    let gt_fg: u64 = (1..256).map(|v| gt_counts[v] as u64).sum();
    let region = ratio(region_inter, pred_fg + gt_fg - region_inter);

    PairIou {
        region,
        part_mean,
        per_category,
    }
}

/// Per-category IoU map and its mean for a prediction/ground-truth pair.
pub fn part_iou(
    pred: &InstanceMask,
    gt: &InstanceMask,
    averaging: CategoryAveraging,
) -> (BTreeMap<CategoryId, f64>, f64) {
    let pair = instance_pair_iou(pred, gt, averaging);
    (pair.per_category, pair.part_mean)
}

/// Whole-instance foreground IoU.
pub fn region_iou(pred: &InstanceMask, gt: &InstanceMask) -> f64 {
    instance_pair_iou(pred, gt, CategoryAveraging::Union).region
}
