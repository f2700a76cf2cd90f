//! The dataset scoring engine: AP^p, AP^p_vol, PCP and AP^r.
//!
//! Per-image work is pure and order-independent; pooled flags carry
//! (image id, prediction index) keys so the final ranking is identical for
//! any evaluation order or degree of parallelism.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scene::{SceneAnnotation, ScoredScene};

use super::ap::{average_precision, ScoredFlag};
use super::iou::CategoryAveraging;
use super::matching::{match_from_table, pair_table, MatchResult};
use super::report::{ImageTrace, MatchTrace, MetricReport};
use super::threshold::Threshold;

/// Which metric families to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSelection {
    pub ap_p: bool,
    pub pcp: bool,
    pub ap_r: bool,
}

impl Default for MetricSelection {
    fn default() -> Self {
        Self {
            ap_p: true,
            pcp: true,
            ap_r: true,
        }
    }
}

impl MetricSelection {
    /// Parses the CLI form `ap_p,pcp,ap_r`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sel = Self {
            ap_p: false,
            pcp: false,
            ap_r: false,
        };
        for token in text.split(',') {
            match token.trim() {
                "ap_p" => sel.ap_p = true,
                "pcp" => sel.pcp = true,
                "ap_r" => sel.ap_r = true,
                other => {
                    return Err(Error::domain(format!("unknown metric `{other}`")));
                }
            }
        }
        if !(sel.ap_p || sel.pcp || sel.ap_r) {
            return Err(Error::domain("metric selection is empty"));
        }
        Ok(sel)
    }

    fn needs_part(self) -> bool {
        self.ap_p || self.pcp
    }
}

/// Evaluation parameters shared by the engine entry points.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub thresholds: Vec<Threshold>,
    pub metrics: MetricSelection,
    pub averaging: CategoryAveraging,
    pub subset_label: String,
    /// Record per-image matching traces in the report.
    pub with_traces: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            thresholds: Threshold::ladder(),
            metrics: MetricSelection::default(),
            averaging: CategoryAveraging::Union,
            subset_label: "all".to_owned(),
            with_traces: true,
        }
    }
}

/// Per-image evaluation output, ready for order-independent pooling.
#[derive(Debug, Clone)]
pub struct ImageEval {
    pub image_id: String,
    pub gt_count: usize,
    pub pred_count: usize,
    pred_scores: Vec<f64>,
    /// Part-IoU matchings aligned with `EvalOptions::thresholds`.
    part_matches: Vec<MatchResult>,
    /// Region-IoU matchings aligned with `EvalOptions::thresholds`.
    region_matches: Vec<MatchResult>,
    /// Per threshold, per ground-truth instance PCP contribution.
    pcp_values: Vec<Vec<f64>>,
}

/// Scores one image at every requested threshold. The pairwise IoU table is
/// computed once and shared across thresholds.
pub fn evaluate_image(
    pred: &ScoredScene,
    gt: &SceneAnnotation,
    opts: &EvalOptions,
) -> Result<ImageEval> {
    if pred.scene.size != gt.size {
        return Err(Error::domain(format!(
            "prediction size {} does not match ground truth size {} for `{}`",
            pred.scene.size, gt.size, gt.image_id
        )));
    }
    if pred.scores.len() != pred.scene.instances.len() {
        return Err(Error::domain(format!(
            "`{}`: {} scores for {} predicted instances",
            gt.image_id,
            pred.scores.len(),
            pred.scene.instances.len()
        )));
    }

    let table = pair_table(pred, gt, opts.averaging);
    let gt_count = gt.instances.len();

    let part_ious: Vec<Vec<f64>> = table
        .iter()
        .map(|row| row.iter().map(|p| p.part_mean).collect())
        .collect();
    let region_ious: Vec<Vec<f64>> = table
        .iter()
        .map(|row| row.iter().map(|p| p.region).collect())
        .collect();

    let mut part_matches = Vec::new();
    let mut region_matches = Vec::new();
    let mut pcp_values = Vec::new();
    for &t in &opts.thresholds {
        if opts.metrics.needs_part() {
            let m = match_from_table(&part_ious, &pred.scores, gt_count, t);
            if opts.metrics.pcp {
                pcp_values.push(pcp_for_match(&m, &table, gt, t));
            }
            part_matches.push(m);
        }
        if opts.metrics.ap_r {
            region_matches.push(match_from_table(&region_ious, &pred.scores, gt_count, t));
        }
    }

    Ok(ImageEval {
        image_id: gt.image_id.clone(),
        gt_count,
        pred_count: pred.scene.instances.len(),
        pred_scores: pred.scores.clone(),
        part_matches,
        region_matches,
        pcp_values,
    })
}

/// Per ground-truth instance PCP at one threshold: the fraction of the
/// instance's categories whose IoU with the matched prediction exceeds the
/// threshold; unmatched instances contribute zero.
fn pcp_for_match(
    m: &MatchResult,
    table: &[Vec<super::iou::PairIou>],
    gt: &SceneAnnotation,
    t: Threshold,
) -> Vec<f64> {
    let tv = t.value();
    let mut values = vec![0.0; gt.instances.len()];
    for pair in &m.pairs {
        let gt_mask = &gt.instances[pair.gt];
        let gt_categories = gt_mask.categories_present();
        if gt_categories.is_empty() {
            continue;
        }
        let per_category = &table[pair.pred][pair.gt].per_category;
        let correct = gt_categories
            .iter()
            .filter(|c| per_category.get(c).copied().unwrap_or(0.0) > tv)
            .count();
        values[pair.gt] = correct as f64 / gt_categories.len() as f64;
    }
    values
}

/// Streaming accumulator over per-image evaluations.
#[derive(Debug)]
pub struct DatasetAccumulator {
    opts: EvalOptions,
    image_count: usize,
    total_gt: usize,
    part_flags: Vec<Vec<ScoredFlag>>,
    region_flags: Vec<Vec<ScoredFlag>>,
    pcp_sums: Vec<f64>,
    traces: BTreeMap<String, ImageTrace>,
}

impl DatasetAccumulator {
    pub fn new(opts: EvalOptions) -> Self {
        let n = opts.thresholds.len();
        Self {
            opts,
            image_count: 0,
            total_gt: 0,
            part_flags: vec![Vec::new(); n],
            region_flags: vec![Vec::new(); n],
            pcp_sums: vec![0.0; n],
            traces: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, eval: ImageEval) {
        self.image_count += 1;
        self.total_gt += eval.gt_count;

        let mut trace = ImageTrace {
            gt_instances: eval.gt_count,
            pred_instances: eval.pred_count,
            ..ImageTrace::default()
        };

        for (ti, t) in self.opts.thresholds.iter().enumerate() {
            if self.opts.metrics.needs_part() {
                let m = &eval.part_matches[ti];
                for pred in 0..eval.pred_count {
                    self.part_flags[ti].push(ScoredFlag {
                        score: eval.pred_scores[pred],
                        image_id: eval.image_id.clone(),
                        pred_index: pred,
                        true_positive: m.is_pred_matched(pred),
                    });
                }
                if self.opts.with_traces {
                    trace.part_matches.insert(*t, MatchTrace::from(m));
                }
            }
            if self.opts.metrics.pcp {
                let values = &eval.pcp_values[ti];
                self.pcp_sums[ti] += values.iter().sum::<f64>();
                if self.opts.with_traces {
                    trace.pcp_per_instance.insert(*t, values.clone());
                }
            }
            if self.opts.metrics.ap_r {
                let m = &eval.region_matches[ti];
                for pred in 0..eval.pred_count {
                    self.region_flags[ti].push(ScoredFlag {
                        score: eval.pred_scores[pred],
                        image_id: eval.image_id.clone(),
                        pred_index: pred,
                        true_positive: m.is_pred_matched(pred),
                    });
                }
                if self.opts.with_traces {
                    trace.region_matches.insert(*t, MatchTrace::from(m));
                }
            }
        }

        if self.opts.with_traces {
            self.traces.insert(eval.image_id, trace);
        }
    }

    pub fn finalize(self) -> MetricReport {
        let mut report = MetricReport {
            subset: self.opts.subset_label.clone(),
            image_count: self.image_count,
            total_gt_instances: self.total_gt,
            per_image: self.traces,
            ..MetricReport::default()
        };
        for (ti, t) in self.opts.thresholds.iter().enumerate() {
            if self.opts.metrics.ap_p {
                let ap = average_precision(&self.part_flags[ti], self.total_gt, *t);
                report.ap_p.insert(*t, ap.value);
            }
            if self.opts.metrics.pcp {
                let value = if self.total_gt == 0 {
                    0.0
                } else {
                    self.pcp_sums[ti] / self.total_gt as f64
                };
                report.pcp.insert(*t, value);
            }
            if self.opts.metrics.ap_r {
                let ap = average_precision(&self.region_flags[ti], self.total_gt, *t);
                report.ap_r.insert(*t, ap.value);
            }
        }
        if self.opts.metrics.ap_p {
            report.ap_p_vol = MetricReport::volume_over_ladder(&report.ap_p);
        }
        if self.opts.metrics.ap_r {
            report.ap_r_vol = MetricReport::volume_over_ladder(&report.ap_r);
        }
        report
    }
}

/// Evaluates a pre-paired in-memory dataset.
pub fn evaluate_dataset<'a, I>(pairs: I, opts: &EvalOptions) -> Result<MetricReport>
where
    I: IntoIterator<Item = (&'a ScoredScene, &'a SceneAnnotation)>,
{
    let mut acc = DatasetAccumulator::new(opts.clone());
    for (pred, gt) in pairs {
        acc.push(evaluate_image(pred, gt, opts)?);
    }
    Ok(acc.finalize())
}
