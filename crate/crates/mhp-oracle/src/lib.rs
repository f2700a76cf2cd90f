//! Naive reference implementation of the parsing metrics.
//!
//! This crate re-derives AP^p, AP^p_vol, PCP and AP^r from first principles:
//! pixel sets are counted by scanning the whole grid, matching is an
//! explicit greedy walk, and average precision interpolates with a
//! quadratic max-scan over the PR table. It shares only data types with the
//! engine, never computation, so agreement between the two is meaningful.
//! Inputs are refused beyond a small tractability bound.

use std::collections::BTreeSet;

use mhp_core::error::{Error, Result};
use mhp_core::metrics::{MetricReport, Threshold};
use mhp_core::scene::{InstanceMask, SceneAnnotation, ScoredScene};

/// Largest grid side accepted by the oracle.
pub const MAX_SIDE: u32 = 64;
/// Largest per-image instance count accepted by the oracle.
pub const MAX_INSTANCES: usize = 6;

fn check_limits(preds: &ScoredScene, gt: &SceneAnnotation) -> Result<()> {
    for (what, size, count) in [
        ("ground truth", gt.size, gt.instances.len()),
        ("prediction", preds.scene.size, preds.scene.instances.len()),
    ] {
        if size.width > MAX_SIDE || size.height > MAX_SIDE {
            return Err(Error::domain(format!(
                "oracle refuses {what} grid {size}: larger than {MAX_SIDE}x{MAX_SIDE}"
            )));
        }
        if count > MAX_INSTANCES {
            return Err(Error::domain(format!(
                "oracle refuses {what} with {count} instances: more than {MAX_INSTANCES}"
            )));
        }
    }
    Ok(())
}

/// IoU of one category's pixels in two masks, counted pixel by pixel over
/// the full grid. Both-empty is 1.0.
fn category_iou(pred: &InstanceMask, gt: &InstanceMask, category: u8) -> f64 {
    let mut intersection = 0u64;
    let mut union = 0u64;
    for y in 0..gt.size().height {
        for x in 0..gt.size().width {
            let p = pred.category_at(x, y).0 == category;
            let g = gt.category_at(x, y).0 == category;
            if p && g {
                intersection += 1;
            }
            if p || g {
                union += 1;
            }
        }
    }
    if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    }
}

fn foreground_iou(pred: &InstanceMask, gt: &InstanceMask) -> f64 {
    let mut intersection = 0u64;
    let mut union = 0u64;
    for y in 0..gt.size().height {
        for x in 0..gt.size().width {
            let p = !pred.category_at(x, y).is_background();
            let g = !gt.category_at(x, y).is_background();
            if p && g {
                intersection += 1;
            }
            if p || g {
                union += 1;
            }
        }
    }
    if union == 0 {
        1.0
    } else {
        intersection as f64 / union as f64
    }
}

fn categories_of(mask: &InstanceMask) -> BTreeSet<u8> {
    let mut set = BTreeSet::new();
    for &p in mask.pixels() {
        if p != 0 {
            set.insert(p);
        }
    }
    set
}

/// Mean per-category IoU over the union of both instances' categories.
fn part_mean_iou(pred: &InstanceMask, gt: &InstanceMask) -> f64 {
    let mut categories = categories_of(pred);
    categories.extend(categories_of(gt));
    if categories.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for &c in &categories {
        sum += category_iou(pred, gt, c);
    }
    sum / categories.len() as f64
}

/// Explicit greedy walk: predictions in score order (ties by index), each
/// taking the best unclaimed ground truth with IoU strictly above the
/// threshold. Returns `matched_gt[pred]`.
fn greedy_match(
    scores: &[f64],
    iou: impl Fn(usize, usize) -> f64,
    pred_count: usize,
    gt_count: usize,
    threshold: f64,
) -> Vec<Option<usize>> {
    let mut order: Vec<usize> = (0..pred_count).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut taken = vec![false; gt_count];
    let mut matched = vec![None; pred_count];
    for &p in &order {
        let mut best_gt = None;
        let mut best_iou = threshold;
        for g in 0..gt_count {
            if taken[g] {
                continue;
            }
            let v = iou(p, g);
            if v > best_iou {
                best_iou = v;
                best_gt = Some(g);
            }
        }
        if let Some(g) = best_gt {
            taken[g] = true;
            matched[p] = Some(g);
        }
    }
    matched
}

#[derive(Debug, Clone)]
struct PooledPrediction {
    score: f64,
    image_id: String,
    pred_index: usize,
    true_positive: bool,
}

/// Explicit PR-table average precision: sort, tabulate, interpolate with a
/// nested max-scan, and sum rectangle areas.
fn table_average_precision(pool: &[PooledPrediction], total_gt: usize) -> f64 {
    if total_gt == 0 {
        return if pool.is_empty() { 1.0 } else { 0.0 };
    }
    let mut rows: Vec<&PooledPrediction> = pool.iter().collect();
    rows.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.image_id.cmp(&b.image_id))
            .then(a.pred_index.cmp(&b.pred_index))
    });
    let mut recalls = Vec::with_capacity(rows.len());
    let mut precisions = Vec::with_capacity(rows.len());
    let mut tp = 0usize;
    for (i, row) in rows.iter().enumerate() {
        if row.true_positive {
            tp += 1;
        }
        recalls.push(tp as f64 / total_gt as f64);
        precisions.push(tp as f64 / (i + 1) as f64);
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for i in 0..rows.len() {
        let mut best = 0.0f64;
        for j in i..rows.len() {
            if precisions[j] > best {
                best = precisions[j];
            }
        }
        ap += (recalls[i] - prev_recall) * best;
        prev_recall = recalls[i];
    }
    ap
}

/// Scores a dataset with the naive routines. The report carries the same
/// metric maps as the engine's; per-image traces stay empty.
pub fn oracle_evaluate(
    pairs: &[(ScoredScene, SceneAnnotation)],
    thresholds: &[Threshold],
) -> Result<MetricReport> {
    for (pred, gt) in pairs {
        check_limits(pred, gt)?;
    }

    let total_gt: usize = pairs.iter().map(|(_, gt)| gt.instances.len()).sum();
    let mut report = MetricReport {
        subset: "all".to_owned(),
        image_count: pairs.len(),
        total_gt_instances: total_gt,
        ..MetricReport::default()
    };

    for &t in thresholds {
        let tv = t.value();
        let mut part_pool = Vec::new();
        let mut region_pool = Vec::new();
        let mut pcp_sum = 0.0;

        for (pred, gt) in pairs {
            let pred_count = pred.scene.instances.len();
            let gt_count = gt.instances.len();

            let part_matched = greedy_match(
                &pred.scores,
                |p, g| part_mean_iou(&pred.scene.instances[p], &gt.instances[g]),
                pred_count,
                gt_count,
                tv,
            );
            for (p, matched) in part_matched.iter().enumerate() {
                part_pool.push(PooledPrediction {
                    score: pred.scores[p],
                    image_id: gt.image_id.clone(),
                    pred_index: p,
                    true_positive: matched.is_some(),
                });
            }

            // PCP: for each matched ground truth, the share of its
            // categories parsed with IoU above the threshold.
            for (p, matched) in part_matched.iter().enumerate() {
                if let Some(g) = matched {
                    let gt_mask = &gt.instances[*g];
                    let categories = categories_of(gt_mask);
                    if categories.is_empty() {
                        continue;
                    }
                    let mut correct = 0usize;
                    for &c in &categories {
                        if category_iou(&pred.scene.instances[p], gt_mask, c) > tv {
                            correct += 1;
                        }
                    }
                    pcp_sum += correct as f64 / categories.len() as f64;
                }
            }

            let region_matched = greedy_match(
                &pred.scores,
                |p, g| foreground_iou(&pred.scene.instances[p], &gt.instances[g]),
                pred_count,
                gt_count,
                tv,
            );
            for (p, matched) in region_matched.iter().enumerate() {
                region_pool.push(PooledPrediction {
                    score: pred.scores[p],
                    image_id: gt.image_id.clone(),
                    pred_index: p,
                    true_positive: matched.is_some(),
                });
            }
        }

        report
            .ap_p
            .insert(t, table_average_precision(&part_pool, total_gt));
        report
            .ap_r
            .insert(t, table_average_precision(&region_pool, total_gt));
        let pcp = if total_gt == 0 {
            0.0
        } else {
            pcp_sum / total_gt as f64
        };
        report.pcp.insert(t, pcp);
    }

    report.ap_p_vol = MetricReport::volume_over_ladder(&report.ap_p);
    report.ap_r_vol = MetricReport::volume_over_ladder(&report.ap_r);
    Ok(report)
}
