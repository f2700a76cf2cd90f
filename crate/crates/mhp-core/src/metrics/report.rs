//! Dataset-level metric report with per-image matching traces.

use std::collections::BTreeMap;

use serde::Serialize;

use super::matching::MatchResult;
use super::threshold::Threshold;

/// Matching trace for one image at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchTrace {
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_preds: Vec<usize>,
    pub unmatched_gts: Vec<usize>,
}

impl From<&MatchResult> for MatchTrace {
    fn from(m: &MatchResult) -> Self {
        MatchTrace {
            pairs: m.pairs.iter().map(|p| (p.pred, p.gt, p.iou)).collect(),
            unmatched_preds: m.unmatched_preds.clone(),
            unmatched_gts: m.unmatched_gts.clone(),
        }
    }
}

/// Everything recorded about one image during evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ImageTrace {
    pub gt_instances: usize,
    pub pred_instances: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub part_matches: BTreeMap<Threshold, MatchTrace>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub region_matches: BTreeMap<Threshold, MatchTrace>,
    /// Per ground-truth instance PCP contributions at each threshold.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub pcp_per_instance: BTreeMap<Threshold, Vec<f64>>,
}

/// Dataset-level metric values keyed by threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct MetricReport {
    pub subset: String,
    pub image_count: usize,
    pub total_gt_instances: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub ap_p: BTreeMap<Threshold, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ap_p_vol: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub ap_r: BTreeMap<Threshold, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ap_r_vol: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub pcp: BTreeMap<Threshold, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub per_image: BTreeMap<String, ImageTrace>,
}

impl MetricReport {
    /// Mean of the nine ladder values when all are present.
    pub fn volume_over_ladder(values: &BTreeMap<Threshold, f64>) -> Option<f64> {
        let ladder = Threshold::ladder();
        let mut sum = 0.0;
        for t in &ladder {
            sum += values.get(t)?;
        }
        Some(sum / ladder.len() as f64)
    }
}
