//! IoU thresholds with exact hundredth resolution.
//!
//! Thresholds are stored as integer hundredths so the schedule 0.1..0.9 has
//! no accumulation drift and report keys format identically everywhere.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An IoU threshold in the open interval (0, 1), held in hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(u16);

impl Threshold {
    pub fn from_hundredths(hundredths: u16) -> Result<Self> {
        if hundredths == 0 || hundredths >= 100 {
            return Err(Error::domain(format!(
                "threshold {} is outside (0, 1)",
                hundredths as f64 / 100.0
            )));
        }
        Ok(Self(hundredths))
    }

    /// Accepts values representable in hundredths, e.g. 0.5 or 0.85.
    pub fn from_value(value: f64) -> Result<Self> {
        let scaled = value * 100.0;
        let rounded = scaled.round();
        if !value.is_finite() || (scaled - rounded).abs() > 1e-6 {
            return Err(Error::domain(format!(
                "threshold {value} is not representable in hundredths"
            )));
        }
        Self::from_hundredths(rounded as u16)
    }

    pub fn hundredths(self) -> u16 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 100.0
    }

    /// The nine-step schedule 0.1, 0.2, ..., 0.9.
    pub fn ladder() -> Vec<Threshold> {
        (1..=9).map(|i| Threshold(i * 10)).collect()
    }

    /// Parses an `A:B:STEP` schedule, inclusive of both endpoints.
    pub fn parse_schedule(text: &str) -> Result<Vec<Threshold>> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::domain(format!(
                "threshold schedule `{text}` must have the form A:B:STEP"
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::domain(format!("`{s}` is not a number")))
        };
        let lo = Threshold::from_value(parse(parts[0])?)?;
        let hi = Threshold::from_value(parse(parts[1])?)?;
        let step_value = parse(parts[2])?;
        let step = (step_value * 100.0).round();
        if !(step_value * 100.0 - step).abs().le(&1e-6) || step < 1.0 {
            return Err(Error::domain(format!(
                "threshold step {step_value} must be a positive multiple of 0.01"
            )));
        }
        if lo > hi {
            return Err(Error::domain(format!(
                "threshold schedule `{text}` has start above end"
            )));
        }
        let step = step as u16;
        let mut out = Vec::new();
        let mut t = lo.0;
        while t <= hi.0 {
            out.push(Threshold(t));
            t += step;
        }
        Ok(out)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.value())
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        let value: f64 = text.parse().map_err(D::Error::custom)?;
        Threshold::from_value(value).map_err(D::Error::custom)
    }
}
