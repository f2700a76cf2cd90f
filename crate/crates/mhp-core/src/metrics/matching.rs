//! Greedy score-ordered instance matching.

use serde::Serialize;

use crate::scene::{SceneAnnotation, ScoredScene};

use super::iou::{instance_pair_iou, CategoryAveraging, PairIou};
use super::threshold::Threshold;

/// Which overlap measure drives the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IouKind {
    /// Category-averaged part IoU.
    Part,
    /// Whole-instance foreground IoU.
    Region,
}

/// One matched prediction/ground-truth pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedPair {
    pub pred: usize,
    pub gt: usize,
    pub iou: f64,
}

/// Outcome of matching one image at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_preds: Vec<usize>,
    pub unmatched_gts: Vec<usize>,
    pub threshold: Threshold,
}

impl MatchResult {
    pub fn is_pred_matched(&self, pred: usize) -> bool {
        self.pairs.iter().any(|p| p.pred == pred)
    }

    pub fn matched_gt_for_pred(&self, pred: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.pred == pred).map(|p| p.gt)
    }

    pub fn matched_pred_for_gt(&self, gt: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.gt == gt).map(|p| p.pred)
    }
}

/// Prediction visiting order: descending score, ties by ascending index.
pub(crate) fn visit_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Greedy matching over a precomputed IoU table indexed `[pred][gt]`. Each
/// prediction, visited in score order, takes the unmatched ground truth with
/// the highest IoU strictly above the threshold; IoU ties go to the lowest
/// ground-truth index.
pub(crate) fn match_from_table(
    ious: &[Vec<f64>],
    scores: &[f64],
    gt_count: usize,
    threshold: Threshold,
) -> MatchResult {
    let t = threshold.value();
    let mut gt_taken = vec![false; gt_count];
    let mut pairs = Vec::new();
    let mut unmatched_preds = Vec::new();
    for &pred in &visit_order(scores) {
        let mut best: Option<(usize, f64)> = None;
        for (gt, &iou) in ious[pred].iter().enumerate() {
            if gt_taken[gt] || iou <= t {
                continue;
            }
            let better = match best {
                None => true,
                Some((_, best_iou)) => iou > best_iou,
            };
            if better {
                best = Some((gt, iou));
            }
        }
        match best {
            Some((gt, iou)) => {
                gt_taken[gt] = true;
                pairs.push(MatchedPair { pred, gt, iou });
            }
            None => unmatched_preds.push(pred),
        }
    }
    unmatched_preds.sort_unstable();
    let unmatched_gts = (0..gt_count).filter(|&g| !gt_taken[g]).collect();
    MatchResult {
        pairs,
        unmatched_preds,
        unmatched_gts,
        threshold,
    }
}

/// Builds the pairwise IoU table for one image.
pub(crate) fn pair_table(
    preds: &ScoredScene,
    gts: &SceneAnnotation,
    averaging: CategoryAveraging,
) -> Vec<Vec<PairIou>> {
    preds
        .scene
        .instances
        .iter()
        .map(|pred| {
            gts.instances
                .iter()
                .map(|gt| instance_pair_iou(pred, gt, averaging))
                .collect()
        })
        .collect()
}

/// Matches one image's predictions against its ground truth.
pub fn match_instances(
    preds: &ScoredScene,
    gts: &SceneAnnotation,
    kind: IouKind,
    threshold: Threshold,
    averaging: CategoryAveraging,
) -> MatchResult {
    let table = pair_table(preds, gts, averaging);
    let ious: Vec<Vec<f64>> = table
        .iter()
        .map(|row| {
            row.iter()
                .map(|pair| match kind {
                    IouKind::Part => pair.part_mean,
                    IouKind::Region => pair.region,
                })
                .collect()
        })
        .collect();
    match_from_table(&ious, &preds.scores, gts.instances.len(), threshold)
}
