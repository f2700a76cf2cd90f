//! Dataset statistics: category occurrence, instance counts, resolutions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ImageSize;
use crate::labels::{CategoryId, LabelSpec};
use crate::scene::SceneAnnotation;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub image_count: usize,
    /// Image counts per split; empty when the dataset has no split layout.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub split_counts: BTreeMap<String, usize>,
    pub total_instances: usize,
    pub avg_instances_per_image: f64,
    pub instance_count_min: usize,
    pub instance_count_max: usize,
    /// Number of images per instance count.
    pub instance_histogram: BTreeMap<usize, usize>,
    /// Instances carrying each category (≥1 pixel), keyed by name.
    pub category_occurrences: BTreeMap<String, usize>,
    /// Mean number of distinct non-background categories per image.
    pub avg_categories_per_image: f64,
    /// Smallest image by pixel area.
    pub min_resolution: ImageSize,
    /// Largest image by pixel area.
    pub max_resolution: ImageSize,
}

/// Aggregates statistics over a stream of scenes.
pub fn dataset_stats<'a, I>(scenes: I, spec: &LabelSpec) -> Result<StatsReport>
where
    I: IntoIterator<Item = &'a SceneAnnotation>,
{
    let mut image_count = 0usize;
    let mut total_instances = 0usize;
    let mut min_count = usize::MAX;
    let mut max_count = 0usize;
    let mut histogram = BTreeMap::new();
    let mut occurrences: BTreeMap<CategoryId, usize> = BTreeMap::new();
    let mut category_sum = 0usize;
    let mut min_res: Option<ImageSize> = None;
    let mut max_res: Option<ImageSize> = None;

    for scene in scenes {
        image_count += 1;
        let n = scene.person_count();
        total_instances += n;
        min_count = min_count.min(n);
        max_count = max_count.max(n);
        *histogram.entry(n).or_insert(0) += 1;

        let mut image_categories = std::collections::BTreeSet::new();
        for mask in &scene.instances {
            for cat in mask.categories_present() {
                *occurrences.entry(cat).or_insert(0) += 1;
                image_categories.insert(cat);
            }
        }
        category_sum += image_categories.len();

        min_res = Some(match min_res {
            None => scene.size,
            Some(cur) => {
                if area_key(scene.size) < area_key(cur) {
                    scene.size
                } else {
                    cur
                }
            }
        });
        max_res = Some(match max_res {
            None => scene.size,
            Some(cur) => {
                if area_key(scene.size) > area_key(cur) {
                    scene.size
                } else {
                    cur
                }
            }
        });
    }

    if image_count == 0 {
        return Err(Error::domain("dataset is empty"));
    }

    let category_occurrences = occurrences
        .into_iter()
        .map(|(cat, count)| {
            let name = spec
                .name(cat)
                .map(str::to_owned)
                .unwrap_or_else(|| format!("category_{}", cat.0));
            (name, count)
        })
        .collect();

    Ok(StatsReport {
        image_count,
        split_counts: BTreeMap::new(),
        total_instances,
        avg_instances_per_image: total_instances as f64 / image_count as f64,
        instance_count_min: min_count,
        instance_count_max: max_count,
        instance_histogram: histogram,
        category_occurrences,
        avg_categories_per_image: category_sum as f64 / image_count as f64,
        min_resolution: min_res.expect("non-empty dataset"),
        max_resolution: max_res.expect("non-empty dataset"),
    })
}

/// Orders sizes by area, then (width, height) for determinism on ties.
fn area_key(s: ImageSize) -> (usize, u32, u32) {
    (s.pixel_count(), s.width, s.height)
}
