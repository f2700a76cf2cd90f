//! Category label specifications.
//!
//! A [`LabelSpec`] is an ordered list of category names; index 0 is always
//! the background. The bundled default is the 59-entry MHP v2.0 list
//! (58 foreground categories plus background). Alternative specs, such as
//! the 7-category PASCAL-Person-Part list, load from plain text files with
//! one name per line.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MHP_V2_LABELS: &str = include_str!("../data/mhp_v2_labels.txt");

/// Index into a [`LabelSpec`]. Zero denotes background.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryId(pub u8);

impl CategoryId {
    pub const BACKGROUND: CategoryId = CategoryId(0);

    pub fn is_background(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CategoryId({})", self.0)
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered category names; line number equals category id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSpec {
    names: Vec<String>,
}

impl LabelSpec {
    /// Builds a spec from an ordered name list, checking the invariants:
    /// entry 0 is `background`, names are unique and non-empty, and the
    /// total count fits in the 8-bit category range.
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::domain("label spec must contain at least `background`"));
        }
        if names[0] != "background" {
            return Err(Error::domain(format!(
                "label spec entry 0 must be `background`, found `{}`",
                names[0]
            )));
        }
        if names.len() > 256 {
            return Err(Error::domain(format!(
                "label spec has {} entries; at most 256 are supported",
                names.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::domain(format!("label spec entry {i} is empty")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::domain(format!(
                    "label spec entry {i} duplicates name `{name}`"
                )));
            }
        }
        Ok(Self { names })
    }

    /// The bundled 58-category MHP v2.0 spec plus background.
    pub fn mhp_v2() -> Self {
        Self::parse(MHP_V2_LABELS).expect("bundled label spec is valid")
    }

    /// Category count including background.
    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, id: CategoryId) -> bool {
        (id.0 as usize) < self.names.len()
    }

    pub fn name(&self, id: CategoryId) -> Option<&str> {
        self.names.get(id.0 as usize).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Parses the one-name-per-line text format.
    pub fn parse(text: &str) -> Result<Self> {
        let names = text
            .lines()
            .map(|line| line.trim_end().to_owned())
            .filter(|line| !line.is_empty())
            .collect();
        Self::new(names)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Renders the file format back out; `parse` of the result round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str(name);
            out.push('\n');
        }
        out
    }
}
