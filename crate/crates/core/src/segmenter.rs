//! Marker-based splitting of a docket into its accused, plaintiff and
//! charges parts.
//!
//! A part starts at a line whose first characters equal one of its markers
//! (case-sensitive, column 0) and runs until the next part's marker or the
//! end of the document. Anything before the first marker is the header.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{RawPlumitif, Segment, SegmentKind, Span};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("no {0} marker found")]
    MissingPart(SegmentKind),
    #[error("markers of different kinds match at byte {offset}: {first:?} and {second:?}")]
    AmbiguousMarkers {
        offset: usize,
        first: String,
        second: String,
    },
    #[error("{kind} marker appears twice (bytes {first} and {second})")]
    DuplicatePart {
        kind: SegmentKind,
        first: usize,
        second: usize,
    },
    #[error("invalid marker table: {0}")]
    InvalidTable(String),
}

pub const DEFAULT_MARKERS: &str = include_str!("../data/markers.conf");

/// Ordered `(marker, kind)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerTable {
    entries: Vec<(String, SegmentKind)>,
}

impl Default for MarkerTable {
    fn default() -> Self {
        Self::parse(DEFAULT_MARKERS).expect("bundled marker table is valid")
    }
}

impl MarkerTable {
    pub fn new(entries: Vec<(String, SegmentKind)>) -> Result<Self, SegmentError> {
        let mut seen = HashSet::new();
        for (marker, _) in &entries {
            if marker.is_empty() || marker.contains('\n') {
                return Err(SegmentError::InvalidTable(format!("bad marker {marker:?}")));
            }
            if !seen.insert(marker.as_str()) {
                return Err(SegmentError::InvalidTable(format!("duplicate marker {marker:?}")));
            }
        }
        for kind in SegmentKind::ALL {
            if !entries.iter().any(|(_, k)| *k == kind) {
                return Err(SegmentError::InvalidTable(format!("no marker for {kind}")));
            }
        }
        Ok(Self { entries })
    }

    /// Parses the `kind = marker` line format. `#` starts a comment line;
    /// the marker is everything after the first `=`, trimmed.
    pub fn parse(src: &str) -> Result<Self, SegmentError> {
        let mut entries = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (kind, marker) = line
                .split_once('=')
                .ok_or_else(|| SegmentError::InvalidTable(format!("line {}: expected `kind = marker`", n + 1)))?;
            let kind = kind
                .parse::<SegmentKind>()
                .map_err(|e| SegmentError::InvalidTable(format!("line {}: {e}", n + 1)))?;
            entries.push((marker.trim().to_string(), kind));
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(String, SegmentKind)] {
        &self.entries
    }

    pub fn markers_for(&self, kind: SegmentKind) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(move |(_, k)| *k == kind)
            .map(|(m, _)| m.as_str())
    }

    /// Kind whose marker starts `line`, checking for cross-kind ambiguity.
    fn classify(&self, line: &str, offset: usize) -> Result<Option<SegmentKind>, SegmentError> {
        let mut found: Option<&(String, SegmentKind)> = None;
        for entry in self.entries.iter().filter(|(m, _)| line.starts_with(m.as_str())) {
            match found {
                Some(prev) if prev.1 != entry.1 => {
                    return Err(SegmentError::AmbiguousMarkers {
                        offset,
                        first: prev.0.clone(),
                        second: entry.0.clone(),
                    })
                }
                Some(_) => {}
                None => found = Some(entry),
            }
        }
        Ok(found.map(|(_, k)| *k))
    }
}

/// Result of a lenient segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentedDoc {
    /// Text before the first marker (case number, district line).
    pub header: String,
    /// Found parts in document order.
    pub segments: Vec<Segment>,
    pub missing: Vec<SegmentKind>,
}

impl SegmentedDoc {
    pub fn get(&self, kind: SegmentKind) -> Option<&Segment> {
        self.segments.iter().find(|s| s.kind == kind)
    }
}

/// Line start offsets, including 0.
fn line_starts(text: &str) -> impl Iterator<Item = usize> + '_ {
    std::iter::once(0).chain(text.match_indices('\n').map(|(i, _)| i + 1).filter(move |&i| i < text.len()))
}

/// Splits `doc` and reports absent parts instead of failing on them.
pub fn segment_partial(doc: &RawPlumitif, markers: &MarkerTable) -> Result<SegmentedDoc, SegmentError> {
    let text = doc.text();
    let mut hits: Vec<(usize, SegmentKind)> = Vec::new();
    for start in line_starts(text) {
        let line_end = text[start..].find('\n').map_or(text.len(), |i| start + i);
        if let Some(kind) = markers.classify(&text[start..line_end], start)? {
            if let Some(&(first, _)) = hits.iter().find(|(_, k)| *k == kind) {
                return Err(SegmentError::DuplicatePart {
                    kind,
                    first,
                    second: start,
                });
            }
            hits.push((start, kind));
        }
    }

    let header_end = hits.first().map_or(text.len(), |&(o, _)| o);
    let segments = hits
        .iter()
        .enumerate()
        .map(|(i, &(start, kind))| {
            let end = hits.get(i + 1).map_or(text.len(), |&(o, _)| o);
            Segment {
                kind,
                span: Span::new(start, end),
                text: text[start..end].to_string(),
            }
        })
        .collect();
    let missing = SegmentKind::ALL
        .into_iter()
        .filter(|k| !hits.iter().any(|(_, h)| h == k))
        .collect();
    Ok(SegmentedDoc {
        header: text[..header_end].to_string(),
        segments,
        missing,
    })
}

/// Splits `doc` into exactly one accused, plaintiff and charges segment, in
/// document order.
pub fn segment(doc: &RawPlumitif, markers: &MarkerTable) -> Result<Vec<Segment>, SegmentError> {
    let parts = segment_partial(doc, markers)?;
    if let Some(&kind) = parts.missing.first() {
        return Err(SegmentError::MissingPart(kind));
    }
    Ok(parts.segments)
}
