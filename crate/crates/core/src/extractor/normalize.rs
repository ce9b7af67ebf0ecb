//! Entities to [`CaseRecord`].
//!
//! Labels alone do not say whether a date is a birth date or an infraction
//! date, so the text between the start of the entity's line and the entity
//! (the line prefix, e.g. `NÉ LE`, `AV.`, `2E DISP.`) decides its role.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::convictions::parse_conviction;
use crate::model::{
    parse_docket_date, CaseRecord, ChargeRecord, DecisionRecord, Entity, EntityLabel, LawCitation, PartyRecord,
    PartyRole, PleaCode, Segment, SegmentKind, SentenceRecord,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("cannot normalize {part}: {reason}")]
pub struct NormalizationError {
    pub part: SegmentKind,
    pub reason: String,
}

impl NormalizationError {
    pub fn new(part: SegmentKind, reason: impl Into<String>) -> Self {
        Self {
            part,
            reason: reason.into(),
        }
    }
}

/// Per-part outcome; lets one failing part leave the others usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedParts {
    pub accused: Result<PartyRecord, NormalizationError>,
    pub plaintiff: Result<PartyRecord, NormalizationError>,
    pub charges: Result<Vec<ChargeRecord>, NormalizationError>,
}

impl NormalizedParts {
    pub fn into_case(self) -> Result<CaseRecord, NormalizationError> {
        Ok(CaseRecord {
            accused: self.accused?,
            plaintiff: self.plaintiff?,
            charges: self.charges?,
        })
    }
}

fn line_prefix<'a>(text: &'a str, e: &Entity) -> &'a str {
    let start = text[..e.span.start].rfind('\n').map_or(0, |i| i + 1);
    text[start..e.span.start].trim()
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].bytes().filter(|&b| b == b'\n').count()
}

fn is_lawyer_prefix(prefix: &str) -> bool {
    prefix == "AV." || prefix.ends_with(" AV.") || prefix.starts_with("AV.")
}

fn date(part: SegmentKind, e: &Entity) -> Result<chrono::NaiveDate, NormalizationError> {
    parse_docket_date(&e.surface).map_err(|err| NormalizationError::new(part, err.to_string()))
}

fn normalize_accused(seg: &Segment, entities: &[Entity]) -> Result<PartyRecord, NormalizationError> {
    let part = SegmentKind::Accused;
    let mut name: Option<String> = None;
    let mut party = PartyRecord::named(PartyRole::Accused, "");
    for e in entities {
        let prefix = line_prefix(&seg.text, e);
        match e.label {
            EntityLabel::Person if is_lawyer_prefix(prefix) => {
                party.lawyer.get_or_insert_with(|| e.surface.clone());
            }
            EntityLabel::Person | EntityLabel::Organisation => {
                name.get_or_insert_with(|| e.surface.clone());
            }
            EntityLabel::Address => {
                party.address.get_or_insert_with(|| e.surface.clone());
            }
            EntityLabel::Date if prefix.starts_with("NÉ") => party.birth_date = Some(date(part, e)?),
            EntityLabel::Date if prefix.starts_with("INFR") => party.infraction_date = Some(date(part, e)?),
            _ => {}
        }
    }
    party.name = name.ok_or_else(|| NormalizationError::new(part, "no accused name"))?;
    Ok(party)
}

fn normalize_plaintiff(seg: &Segment, entities: &[Entity]) -> Result<PartyRecord, NormalizationError> {
    let mut org: Option<&Entity> = None;
    let mut person: Option<&Entity> = None;
    let mut lawyer: Option<String> = None;
    for e in entities {
        let prefix = line_prefix(&seg.text, e);
        match e.label {
            EntityLabel::Person if is_lawyer_prefix(prefix) => {
                lawyer.get_or_insert_with(|| e.surface.clone());
            }
            EntityLabel::Person => {
                person.get_or_insert(e);
            }
            EntityLabel::Organisation => {
                org.get_or_insert(e);
            }
            _ => {}
        }
    }
    let mut party = match (org, person) {
        (Some(o), _) => PartyRecord::organisation(o.surface.clone()),
        (None, Some(p)) => PartyRecord::named(PartyRole::Plaintiff, p.surface.clone()),
        (None, None) => return Err(NormalizationError::new(SegmentKind::Plaintiff, "no identity")),
    };
    party.lawyer = lawyer;
    Ok(party)
}

fn normalize_charges(seg: &Segment, entities: &[Entity]) -> Result<Vec<ChargeRecord>, NormalizationError> {
    let part = SegmentKind::Charges;
    let err = |reason: String| NormalizationError::new(part, reason);
    let mut charges: Vec<ChargeRecord> = Vec::new();
    // Decision waiting for the date on its own line.
    let mut pending: Option<(usize, String)> = None;

    let flush = |pending: &mut Option<(usize, String)>| match pending.take() {
        Some((_, code)) => Err(NormalizationError::new(part, format!("decision {code:?} has no date"))),
        None => Ok(()),
    };

    for e in entities {
        let line = line_of(&seg.text, e.span.start);
        if pending.as_ref().is_some_and(|(l, _)| *l != line) {
            flush(&mut pending)?;
        }
        let prefix = line_prefix(&seg.text, e);
        match e.label {
            EntityLabel::Law if prefix.contains("2E DISP") => {
                let current = charges
                    .last_mut()
                    .ok_or_else(|| err("secondary provision before any charge".into()))?;
                let secondary: LawCitation = e.surface.parse().map_err(|x: crate::model::ModelError| err(x.to_string()))?;
                current.law_citation.secondary_provision = Some(secondary.reference());
            }
            EntityLabel::Law => {
                let citation: LawCitation = e.surface.parse().map_err(|x: crate::model::ModelError| err(x.to_string()))?;
                charges.push(ChargeRecord::new(charges.len() as u32 + 1, citation));
            }
            EntityLabel::Plea => {
                let current = charges
                    .last_mut()
                    .ok_or_else(|| err("plea before any charge".into()))?;
                let plea =
                    PleaCode::from_docket(&e.surface).ok_or_else(|| err(format!("unknown plea {:?}", e.surface)))?;
                current.plea = Some(plea);
            }
            EntityLabel::Decision => {
                if charges.is_empty() {
                    return Err(err("decision before any charge".into()));
                }
                pending = Some((line, e.surface.clone()));
            }
            EntityLabel::Date => {
                if let Some((_, code)) = pending.take() {
                    let current = charges.last_mut().expect("pending decision implies a charge");
                    let d = date(part, e)?;
                    current.decisions.push(DecisionRecord::new(&code, d, current.index));
                }
            }
            EntityLabel::Sentence => {
                let current = charges
                    .last_mut()
                    .ok_or_else(|| err("sentence before any charge".into()))?;
                let sentence = current.sentence.get_or_insert_with(SentenceRecord::default);
                if !sentence.raw_text.is_empty() {
                    sentence.raw_text.push('\n');
                }
                sentence.raw_text.push_str(e.surface.trim());
                sentence.convictions.push(parse_conviction(&e.surface));
            }
            _ => {}
        }
    }
    flush(&mut pending)?;
    Ok(charges)
}

/// Normalizes each part independently. Segments that are absent from
/// `segments` produce a "part not found" error for that part.
pub fn normalize_parts(segments: &[(Segment, Vec<Entity>)]) -> NormalizedParts {
    let find = |kind| segments.iter().find(|(s, _)| s.kind == kind);
    let missing = |kind| NormalizationError::new(kind, "part not found in document");
    NormalizedParts {
        accused: find(SegmentKind::Accused)
            .ok_or_else(|| missing(SegmentKind::Accused))
            .and_then(|(s, e)| normalize_accused(s, e)),
        plaintiff: find(SegmentKind::Plaintiff)
            .ok_or_else(|| missing(SegmentKind::Plaintiff))
            .and_then(|(s, e)| normalize_plaintiff(s, e)),
        charges: find(SegmentKind::Charges)
            .ok_or_else(|| missing(SegmentKind::Charges))
            .and_then(|(s, e)| normalize_charges(s, e)),
    }
}

/// Builds the normalized view of a whole docket; the first failing part wins.
pub fn normalize(segments: &[(Segment, Vec<Entity>)]) -> Result<CaseRecord, NormalizationError> {
    normalize_parts(segments).into_case()
}
