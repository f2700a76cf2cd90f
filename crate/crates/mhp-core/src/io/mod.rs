//! Bit-exact readers and writers for every on-disk format.

mod dataset;
mod location;
mod masks;
mod report;

pub use dataset::{
    load_semantic_for, parse_mask_filename, require_same_ids, save_predictions, save_scene,
    DatasetHandle, ManifestEntry, PredictionManifest, Split,
};
pub use location::{
    load_instance_count, load_location_map, save_instance_count, save_location_map,
};
pub use masks::{load_instance_mask, load_semantic_map, save_instance_mask, save_semantic_map};
pub use report::{to_sorted_json_bytes, write_report, ReportFormat};
