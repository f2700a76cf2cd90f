//! Interaction intensity and high-interaction subset selection.

use crate::error::{Error, Result};
use crate::scene::SceneAnnotation;

/// Mean pairwise bounding-box IoU over a scene's instances; 0.0 for scenes
/// with fewer than two boxed instances. Instances without a foreground pixel
/// are skipped.
pub fn interaction_intensity(scene: &SceneAnnotation) -> f64 {
    let boxes: Vec<_> = scene
        .instances
        .iter()
        .filter_map(|m| m.bounding_box().ok())
        .collect();
    if boxes.len() < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut pairs = 0u64;
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            sum += boxes[i].iou(boxes[j]);
            pairs += 1;
        }
    }
    sum / pairs as f64
}

/// Selects the top share of images by interaction intensity. Input is
/// (image id, intensity); output ids are ordered by descending intensity
/// with ties broken by ascending id, truncated to ceil(percent% of the
/// dataset).
pub fn select_subset(intensities: &[(String, f64)], percent: u32) -> Result<Vec<String>> {
    if percent == 0 || percent > 100 {
        return Err(Error::domain(format!(
            "subset percent {percent} must lie in (0, 100]"
        )));
    }
    let mut ranked: Vec<&(String, f64)> = intensities.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let take = (percent as usize * intensities.len()).div_ceil(100);
    Ok(ranked.into_iter().take(take).map(|(id, _)| id.clone()).collect())
}
