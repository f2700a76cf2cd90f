//! Core library for the multi-human parsing benchmark toolkit.
//!
//! The pieces, bottom to top:
//!
//! - [`labels`], [`geometry`], [`scene`]: the annotation data model — ordered
//!   per-instance category masks over one image grid, with validation.
//! - [`io`]: bit-exact readers/writers for mask PNGs, prediction manifests,
//!   raw float32 location maps, instance-count sidecars and metric reports.
//! - [`metrics`]: the scoring engine — part/region IoU, greedy matching,
//!   AP^p / AP^p_vol / PCP / AP^r, interaction-intensity subsets and dataset
//!   statistics.
//! - [`cluster`]: location-vector encoding and spectral clustering of
//!   foreground pixels into person instances.
//! - [`synth`] / [`corrupt`]: seeded scene generation and prediction
//!   corruption for desk-scale verification.
//!
//! Everything is a pure function of its inputs (plus explicit seeds), so
//! results are reproducible bit-for-bit across runs and thread counts.

pub mod cluster;
pub mod corrupt;
pub mod error;
pub mod geometry;
pub mod io;
pub mod labels;
pub mod metrics;
pub mod pipeline;
pub mod scene;
pub mod synth;

pub use error::{Error, Result};
