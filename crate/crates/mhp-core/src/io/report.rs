//! Deterministic report serialization.
//!
//! JSON goes through a `serde_json::Value` so object keys come out sorted;
//! identical reports always produce identical bytes. CSV has the fixed
//! column set (metric, threshold, value, subset) with rows ordered by
//! (metric, threshold); volume rows leave the threshold column empty.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{MetricReport, Threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::domain(format!(
                "unknown report format `{other}` (expected `json` or `csv`)"
            ))),
        }
    }
}

/// Serializes any report-like value as pretty JSON with sorted keys.
pub fn to_sorted_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let value = serde_json::to_value(value)
        .map_err(|e| Error::domain(format!("serialization failed: {e}")))?;
    let mut bytes = serde_json::to_vec_pretty(&value)
        .map_err(|e| Error::domain(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Renders a metric report in the requested format.
pub fn write_report(report: &MetricReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => to_sorted_json_bytes(report),
        ReportFormat::Csv => write_csv(report),
    }
}

fn write_csv(report: &MetricReport) -> Result<Vec<u8>> {
    let mut rows: Vec<(String, String, f64)> = Vec::new();
    let push_map = |rows: &mut Vec<(String, String, f64)>,
                    name: &str,
                    map: &std::collections::BTreeMap<Threshold, f64>| {
        for (t, v) in map {
            rows.push((name.to_owned(), t.to_string(), *v));
        }
    };
    push_map(&mut rows, "ap_p", &report.ap_p);
    if let Some(v) = report.ap_p_vol {
        rows.push(("ap_p_vol".to_owned(), String::new(), v));
    }
    push_map(&mut rows, "ap_r", &report.ap_r);
    if let Some(v) = report.ap_r_vol {
        rows.push(("ap_r_vol".to_owned(), String::new(), v));
    }
    push_map(&mut rows, "pcp", &report.pcp);

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["metric", "threshold", "value", "subset"])
        .map_err(|e| Error::domain(format!("csv write failed: {e}")))?;
    for (metric, threshold, value) in rows {
        writer
            .write_record([
                metric.as_str(),
                threshold.as_str(),
                &value.to_string(),
                report.subset.as_str(),
            ])
            .map_err(|e| Error::domain(format!("csv write failed: {e}")))?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::domain(format!("csv write failed: {e}")))
}
