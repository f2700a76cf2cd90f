//! The benchmark scoring engine.
//!
//! AP^p ranks predicted persons by confidence and counts a prediction as a
//! true positive when its category-averaged part IoU against an unclaimed
//! ground-truth person strictly exceeds the threshold. AP^p_vol averages
//! AP^p over the nine thresholds 0.1..0.9. PCP scores each matched person by
//! the fraction of its ground-truth categories parsed with IoU above the
//! threshold, with missed persons scoring zero. AP^r swaps the part IoU for
//! whole-instance region IoU.

mod ap;
mod evaluate;
mod interaction;
mod iou;
mod matching;
mod report;
mod stats;
mod threshold;

pub use ap::{average_precision, ApResult, PrPoint, ScoredFlag};
pub use evaluate::{
    evaluate_dataset, evaluate_image, DatasetAccumulator, EvalOptions, ImageEval, MetricSelection,
};
pub use interaction::{interaction_intensity, select_subset};
pub use iou::{
    instance_pair_iou, mask_iou, part_iou, region_iou, CategoryAveraging, PairIou, PixelSet,
};
pub use matching::{match_instances, IouKind, MatchResult, MatchedPair};
pub use report::{ImageTrace, MatchTrace, MetricReport};
pub use stats::{dataset_stats, StatsReport};
pub use threshold::Threshold;
