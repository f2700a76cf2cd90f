//! Average precision with all-point interpolation.

use serde::Serialize;

use super::threshold::Threshold;

/// One prediction pooled across the dataset, carrying its sort keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredFlag {
    pub score: f64,
    pub image_id: String,
    pub pred_index: usize,
    pub true_positive: bool,
}

impl ScoredFlag {
    pub fn new(score: f64, true_positive: bool) -> Self {
        Self {
            score,
            image_id: String::new(),
            pred_index: 0,
            true_positive,
        }
    }
}

/// One point on the precision/recall curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
    pub score: f64,
}

/// Average precision at one threshold plus the curve behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApResult {
    pub threshold: Threshold,
    pub value: f64,
    pub pr_points: Vec<PrPoint>,
}

/// Computes AP over pooled scored flags. Predictions are ranked by
/// descending score with ties broken by (image id, prediction index); the
/// value is the area under the interpolated precision envelope
/// p̂(r) = max precision at recall ≥ r. With no ground truth, AP is 1.0 if
/// there are also no predictions and 0.0 otherwise.
pub fn average_precision(
    flags: &[ScoredFlag],
    total_gt: usize,
    threshold: Threshold,
) -> ApResult {
    if total_gt == 0 {
        let value = if flags.is_empty() { 1.0 } else { 0.0 };
        return ApResult {
            threshold,
            value,
            pr_points: Vec::new(),
        };
    }
    let mut order: Vec<&ScoredFlag> = flags.iter().collect();
    order.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.image_id.cmp(&b.image_id))
            .then(a.pred_index.cmp(&b.pred_index))
    });

    let mut pr_points = Vec::with_capacity(order.len());
    let mut tp = 0usize;
    let mut fp = 0usize;
    for flag in &order {
        if flag.true_positive {
            tp += 1;
        } else {
            fp += 1;
        }
        pr_points.push(PrPoint {
            recall: tp as f64 / total_gt as f64,
            precision: tp as f64 / (tp + fp) as f64,
            score: flag.score,
        });
    }

    // Precision envelope from the right, then area over recall increments.
    let mut envelope = vec![0.0; pr_points.len()];
    let mut running = 0.0f64;
    for i in (0..pr_points.len()).rev() {
        running = running.max(pr_points[i].precision);
        envelope[i] = running;
    }
    let mut value = 0.0;
    let mut prev_recall = 0.0;
    for (point, &env) in pr_points.iter().zip(&envelope) {
        value += (point.recall - prev_recall) * env;
        prev_recall = point.recall;
    }

    ApResult {
        threshold,
        value,
        pr_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Threshold {
        Threshold::from_value(0.5).unwrap()
    }

    #[test]
    fn single_true_positive_is_one() {
        let flags = vec![ScoredFlag::new(0.9, true)];
        assert_eq!(average_precision(&flags, 1, t()).value, 1.0);
    }

    #[test]
    fn false_positive_above_true_positive_halves_ap() {
        let flags = vec![ScoredFlag::new(0.9, false), ScoredFlag::new(0.8, true)];
        assert_eq!(average_precision(&flags, 1, t()).value, 0.5);
    }

    #[test]
    fn false_positive_below_true_positive_keeps_ap_one() {
        let flags = vec![ScoredFlag::new(0.9, true), ScoredFlag::new(0.8, false)];
        assert_eq!(average_precision(&flags, 1, t()).value, 1.0);
    }

    #[test]
    fn no_gt_edge_cases() {
        assert_eq!(average_precision(&[], 0, t()).value, 1.0);
        assert_eq!(
            average_precision(&[ScoredFlag::new(0.9, false)], 0, t()).value,
            0.0
        );
    }

    #[test]
    fn missing_predictions_leave_recall_gap() {
        // One of two ground truths predicted: AP = 0.5.
        let flags = vec![ScoredFlag::new(1.0, true)];
        assert_eq!(average_precision(&flags, 2, t()).value, 0.5);
    }

    #[test]
    fn recall_is_non_decreasing() {
        let flags = vec![
            ScoredFlag::new(0.9, true),
            ScoredFlag::new(0.7, false),
            ScoredFlag::new(0.6, true),
            ScoredFlag::new(0.5, true),
        ];
        let result = average_precision(&flags, 5, t());
        for pair in result.pr_points.windows(2) {
            assert!(pair[1].recall >= pair[0].recall);
        }
    }

    #[test]
    fn score_ties_order_by_image_then_index() {
        let mk = |image: &str, idx: usize, tp: bool| ScoredFlag {
            score: 0.5,
            image_id: image.into(),
            pred_index: idx,
            true_positive: tp,
        };
        // With everything tied at 0.5, (a,0) sorts first.
        let flags = vec![mk("b", 0, false), mk("a", 1, false), mk("a", 0, true)];
        let result = average_precision(&flags, 1, t());
        assert_eq!(result.pr_points[0].precision, 1.0);
        assert_eq!(result.value, 1.0);
    }
}
