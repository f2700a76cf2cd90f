//! Parsers for the little textual forms shared by the CLI and the API.

use std::ops::RangeInclusive;

use mhp_core::error::{Error, Result};
use mhp_core::geometry::ImageSize;

/// Parses `WxH`, e.g. `512x512`.
pub fn parse_grid(text: &str) -> Result<ImageSize> {
    let (w, h) = text
        .split_once('x')
        .ok_or_else(|| Error::domain(format!("grid `{text}` must have the form WxH")))?;
    let width: u32 = w
        .parse()
        .map_err(|_| Error::domain(format!("bad grid width `{w}`")))?;
    let height: u32 = h
        .parse()
        .map_err(|_| Error::domain(format!("bad grid height `{h}`")))?;
    ImageSize::new(width, height)
}

/// Parses an inclusive `A..B` range (or a single `N`).
pub fn parse_usize_range(text: &str) -> Result<RangeInclusive<usize>> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: usize = a
            .parse()
            .map_err(|_| Error::domain(format!("bad range start `{a}`")))?;
        let hi: usize = b
            .parse()
            .map_err(|_| Error::domain(format!("bad range end `{b}`")))?;
        if lo > hi {
            return Err(Error::domain(format!("range `{text}` is empty")));
        }
        Ok(lo..=hi)
    } else {
        let n: usize = text
            .parse()
            .map_err(|_| Error::domain(format!("bad range `{text}`")))?;
        Ok(n..=n)
    }
}
