//! Domain types shared by every pipeline stage.
//!
//! Everything here is a plain value object: construction validates the
//! invariants that can be checked locally, and [`validate_case`] checks the
//! ones that span a whole [`CaseRecord`]. Offsets are UTF-8 byte offsets and
//! always fall on character boundaries.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("document is empty")]
    EmptyDocument,
    #[error("control character U+{0:04X} at byte {1}")]
    ControlCharacter(u32, usize),
    #[error("invalid span {start}..{end} for text of length {len}")]
    InvalidSpan { start: usize, end: usize, len: usize },
    #[error("invalid docket date {0:?} (expected DD/MM/YYYY)")]
    InvalidDate(String),
    #[error("invalid law citation {0:?}")]
    InvalidCitation(String),
    #[error("invalid conviction: {0}")]
    InvalidConviction(&'static str),
}

/// A docket exactly as pasted by a user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPlumitif {
    text: String,
    source_district: Option<String>,
}

impl RawPlumitif {
    pub fn new(text: impl Into<String>) -> Result<Self, ModelError> {
        Self::with_district(text, None)
    }

    pub fn with_district(
        text: impl Into<String>,
        source_district: Option<String>,
    ) -> Result<Self, ModelError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(ModelError::EmptyDocument);
        }
        if let Some((at, c)) = text
            .char_indices()
            .find(|&(_, c)| c.is_control() && c != '\n' && c != '\t' && c != '\r')
        {
            return Err(ModelError::ControlCharacter(c as u32, at));
        }
        Ok(Self {
            text,
            source_district,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn source_district(&self) -> Option<&str> {
        self.source_district.as_deref()
    }
}

/// Half-open byte range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn slice<'a>(&self, text: &'a str) -> Result<&'a str, ModelError> {
        text.get(self.start..self.end).ok_or(ModelError::InvalidSpan {
            start: self.start,
            end: self.end,
            len: text.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Accused,
    Plaintiff,
    Charges,
}

impl SegmentKind {
    pub const ALL: [SegmentKind; 3] = [Self::Accused, Self::Plaintiff, Self::Charges];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Accused => "accused",
            Self::Plaintiff => "plaintiff",
            Self::Charges => "charges",
        }
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SegmentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "accused" => Ok(Self::Accused),
            "plaintiff" => Ok(Self::Plaintiff),
            "charges" => Ok(Self::Charges),
            other => Err(format!("unknown segment kind {other:?}")),
        }
    }
}

/// One labeled part of a docket. `span` indexes the owning document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub span: Span,
    pub text: String,
}

impl Segment {
    pub fn from_document(kind: SegmentKind, span: Span, doc: &str) -> Result<Self, ModelError> {
        let text = span.slice(doc)?.to_string();
        Ok(Self { kind, span, text })
    }

    /// Text after the marker line.
    pub fn body(&self) -> &str {
        match self.text.find('\n') {
            Some(i) => self.text[i + 1..].trim_end(),
            None => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityLabel {
    Address,
    Charge,
    Date,
    Decision,
    Law,
    Organisation,
    Person,
    Plea,
    Sentence,
}

impl EntityLabel {
    pub const ALL: [EntityLabel; 9] = [
        Self::Address,
        Self::Charge,
        Self::Date,
        Self::Decision,
        Self::Law,
        Self::Organisation,
        Self::Person,
        Self::Plea,
        Self::Sentence,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Address => "Address",
            Self::Charge => "Charge",
            Self::Date => "Date",
            Self::Decision => "Decision",
            Self::Law => "Law",
            Self::Organisation => "Organisation",
            Self::Person => "Person",
            Self::Plea => "Plea",
            Self::Sentence => "Sentence",
        }
    }
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown entity label {s:?}"))
    }
}

/// A labeled span of a segment; `span` indexes `Segment::text`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub label: EntityLabel,
    pub span: Span,
    pub surface: String,
}

impl Entity {
    pub fn in_segment(label: EntityLabel, span: Span, segment_text: &str) -> Result<Self, ModelError> {
        let surface = span.slice(segment_text)?.to_string();
        Ok(Self {
            label,
            span,
            surface,
        })
    }
}

/// True when entities are sorted by start and pairwise disjoint.
pub fn entities_well_formed(entities: &[Entity]) -> bool {
    entities
        .windows(2)
        .all(|w| w[0].span.end <= w[1].span.start && w[0].span.start <= w[1].span.start)
}

/// Strict day-first docket date. Two-digit years are rejected.
pub fn parse_docket_date(s: &str) -> Result<NaiveDate, ModelError> {
    let err = || ModelError::InvalidDate(s.to_string());
    let parts: Vec<&str> = s.trim().split('/').collect();
    match parts.as_slice() {
        [d, m, y]
            if d.len() == 2
                && m.len() == 2
                && y.len() == 4
                && parts.iter().all(|p| p.bytes().all(|b| b.is_ascii_digit())) =>
        {
            let (d, m, y) = (d.parse().map_err(|_| err())?, m.parse().map_err(|_| err())?, y.parse().map_err(|_| err())?);
            NaiveDate::from_ymd_opt(y, m, d).ok_or_else(err)
        }
        _ => Err(err()),
    }
}

pub fn format_docket_date(d: NaiveDate) -> String {
    format!("{:02}/{:02}/{:04}", d.day(), d.month(), d.year())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartyRole {
    Accused,
    Plaintiff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyRecord {
    pub role: PartyRole,
    pub name: String,
    pub birth_date: Option<NaiveDate>,
    pub address: Option<String>,
    pub lawyer: Option<String>,
    pub infraction_date: Option<NaiveDate>,
    pub organisation: Option<String>,
}

impl PartyRecord {
    pub fn named(role: PartyRole, name: impl Into<String>) -> Self {
        Self {
            role,
            name: name.into(),
            birth_date: None,
            address: None,
            lawyer: None,
            infraction_date: None,
            organisation: None,
        }
    }

    /// A plaintiff represented by an organisation; `name` mirrors it.
    pub fn organisation(name: impl Into<String>) -> Self {
        let name = name.into();
        Self {
            organisation: Some(name.clone()),
            ..Self::named(PartyRole::Plaintiff, name)
        }
    }
}

/// Reference to a statute provision as written on a docket, e.g. `C.CR. 145(3)a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LawCitation {
    pub act: String,
    pub provision: String,
    pub paragraph: Option<String>,
    pub subparagraph: Option<String>,
    pub secondary_provision: Option<String>,
}

impl LawCitation {
    pub fn provision(provision: impl Into<String>) -> Self {
        Self {
            act: "C.CR.".to_string(),
            provision: provision.into(),
            paragraph: None,
            subparagraph: None,
            secondary_provision: None,
        }
    }

    pub fn with_paragraph(mut self, label: impl Into<String>) -> Self {
        self.paragraph = Some(label.into());
        self
    }

    pub fn with_subparagraph(mut self, label: impl Into<String>) -> Self {
        self.subparagraph = Some(label.into());
        self
    }

    /// `145(3)a)` style reference without the act.
    pub fn reference(&self) -> String {
        let mut s = self.provision.clone();
        s.extend(self.paragraph.iter().map(String::as_str));
        s.extend(self.subparagraph.iter().map(String::as_str));
        s
    }
}

pub fn is_provision_number(s: &str) -> bool {
    let mut parts = s.split('.');
    let head_ok = parts
        .next()
        .is_some_and(|h| !h.is_empty() && h.bytes().all(|b| b.is_ascii_digit()));
    head_ok && parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

/// Splits `145(3)a)` or `266a)` into provision, first-level and second-level labels.
fn split_reference(s: &str) -> Option<(String, Option<String>, Option<String>)> {
    let num_end = s
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || c == '.'))
        .map_or(s.len(), |(i, _)| i);
    let provision = s[..num_end].trim_end_matches('.');
    if !is_provision_number(provision) {
        return None;
    }
    let mut labels = Vec::new();
    let mut rest = &s[num_end..];
    while !rest.is_empty() {
        let close = rest.find(')')?;
        let label = &rest[..=close];
        let inner = label.trim_start_matches('(').trim_end_matches(')');
        if inner.is_empty() || !inner.chars().all(|c| c.is_alphanumeric() || c == '.') {
            return None;
        }
        labels.push(label.to_string());
        rest = &rest[close + 1..];
    }
    if labels.len() > 2 {
        return None;
    }
    let mut labels = labels.into_iter();
    Some((provision.to_string(), labels.next(), labels.next()))
}

impl FromStr for LawCitation {
    type Err = ModelError;

    /// Parses `C.CR. 145(3)` (act token, whitespace, reference).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ModelError::InvalidCitation(s.to_string());
        let (act, reference) = s.trim().rsplit_once(char::is_whitespace).ok_or_else(err)?;
        let (provision, paragraph, subparagraph) = split_reference(reference).ok_or_else(err)?;
        Ok(Self {
            act: act.trim().to_string(),
            provision,
            paragraph,
            subparagraph,
            secondary_provision: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PleaCode {
    Guilty,
    NotGuilty,
}

impl PleaCode {
    /// Docket spelling, e.g. `NON COUPABLE`.
    pub fn from_docket(s: &str) -> Option<Self> {
        let norm: String = s.split_whitespace().collect::<Vec<_>>().join(" ").to_uppercase();
        match norm.as_str() {
            "COUPABLE" => Some(Self::Guilty),
            "NON COUPABLE" | "NON-COUPABLE" => Some(Self::NotGuilty),
            _ => None,
        }
    }

    pub fn docket_form(&self) -> &'static str {
        match self {
            Self::Guilty => "COUPABLE",
            Self::NotGuilty => "NON COUPABLE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub code: String,
    pub date: NaiveDate,
    pub charge_index: u32,
}

impl DecisionRecord {
    pub fn new(code: &str, date: NaiveDate, charge_index: u32) -> Self {
        Self {
            code: normalize_code(code),
            date,
            charge_index,
        }
    }
}

pub fn normalize_code(code: &str) -> String {
    code.trim().to_lowercase()
}

/// Kinds in realization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvictionKind {
    Penalty,
    FineOrFee,
    CommunityWork,
    Other,
    Probation,
    Surcharge,
}

impl ConvictionKind {
    pub const ALL: [ConvictionKind; 6] = [
        Self::Penalty,
        Self::FineOrFee,
        Self::CommunityWork,
        Self::Other,
        Self::Probation,
        Self::Surcharge,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvictionDetail {
    Inflicted,
    Custody,
    PretrialGranted,
    Supervised,
    Unsupervised,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationUnit {
    Hours,
    Days,
    Months,
    Years,
}

impl DurationUnit {
    /// Docket abbreviation (`JS`, `MS`, `AN`/`ANS`, `HS`).
    pub fn from_docket(s: &str) -> Option<Self> {
        match s.to_uppercase().as_str() {
            "J" | "JR" | "JRS" | "JS" | "JOUR" | "JOURS" => Some(Self::Days),
            "M" | "MS" | "MOIS" => Some(Self::Months),
            "AN" | "ANS" => Some(Self::Years),
            "H" | "HS" | "HRS" | "HEURES" => Some(Self::Hours),
            _ => None,
        }
    }

    pub fn docket_form(&self, value: u32) -> &'static str {
        match self {
            Self::Hours => "HS",
            Self::Days => "JS",
            Self::Months => "MS",
            Self::Years if value == 1 => "AN",
            Self::Years => "ANS",
        }
    }
}

/// Strictly positive amount of some time unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quantity {
    pub value: u32,
    pub unit: DurationUnit,
}

impl Quantity {
    pub fn new(value: u32, unit: DurationUnit) -> Self {
        Self { value, unit }
    }

    pub fn days(value: u32) -> Self {
        Self::new(value, DurationUnit::Days)
    }

    pub fn months(value: u32) -> Self {
        Self::new(value, DurationUnit::Months)
    }

    pub fn years(value: u32) -> Self {
        Self::new(value, DurationUnit::Years)
    }

    pub fn hours(value: u32) -> Self {
        Self::new(value, DurationUnit::Hours)
    }
}

/// Money in cents, serialized as an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Amount(pub u64);

impl Amount {
    pub fn dollars(d: u64) -> Self {
        Self(d * 100)
    }

    pub fn cents(&self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conviction {
    pub kind: ConvictionKind,
    pub duration: Option<Quantity>,
    pub amount: Option<Amount>,
    pub delay: Option<Quantity>,
    pub detail: ConvictionDetail,
}

impl Conviction {
    pub fn new(kind: ConvictionKind, detail: ConvictionDetail) -> Self {
        Self {
            kind,
            duration: None,
            amount: None,
            delay: None,
            detail,
        }
    }

    pub fn penalty(detail: ConvictionDetail, duration: Quantity) -> Self {
        Self::new(ConvictionKind::Penalty, detail).with_duration(duration)
    }

    pub fn probation(supervised: bool, duration: Quantity) -> Self {
        let detail = if supervised {
            ConvictionDetail::Supervised
        } else {
            ConvictionDetail::Unsupervised
        };
        Self::new(ConvictionKind::Probation, detail).with_duration(duration)
    }

    pub fn surcharge(delay: Quantity) -> Self {
        Self::new(ConvictionKind::Surcharge, ConvictionDetail::None).with_delay(delay)
    }

    pub fn fine(amount: Amount) -> Self {
        let mut c = Self::new(ConvictionKind::FineOrFee, ConvictionDetail::None);
        c.amount = Some(amount);
        c
    }

    pub fn community_work(hours: u32) -> Self {
        Self::new(ConvictionKind::CommunityWork, ConvictionDetail::None)
            .with_duration(Quantity::hours(hours))
    }

    pub fn other() -> Self {
        Self::new(ConvictionKind::Other, ConvictionDetail::None)
    }

    pub fn with_duration(mut self, d: Quantity) -> Self {
        self.duration = Some(d);
        self
    }

    pub fn with_delay(mut self, d: Quantity) -> Self {
        self.delay = Some(d);
        self
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let positive = |q: &Option<Quantity>| q.is_none_or(|q| q.value > 0);
        if !positive(&self.duration) || !positive(&self.delay) {
            return Err(ModelError::InvalidConviction("durations and delays must be positive"));
        }
        if self.amount.is_some_and(|a| a.0 == 0) {
            return Err(ModelError::InvalidConviction("amount must be positive"));
        }
        match self.kind {
            ConvictionKind::Surcharge if self.delay.is_none() => {
                Err(ModelError::InvalidConviction("surcharge requires a delay"))
            }
            ConvictionKind::Probation if self.duration.is_none() => {
                Err(ModelError::InvalidConviction("probation requires a duration"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub convictions: Vec<Conviction>,
    pub raw_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeRecord {
    pub index: u32,
    pub law_citation: LawCitation,
    pub plea: Option<PleaCode>,
    pub decisions: Vec<DecisionRecord>,
    pub sentence: Option<SentenceRecord>,
}

impl ChargeRecord {
    pub fn new(index: u32, law_citation: LawCitation) -> Self {
        Self {
            index,
            law_citation,
            plea: None,
            decisions: Vec::new(),
            sentence: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub accused: PartyRecord,
    pub plaintiff: PartyRecord,
    pub charges: Vec<ChargeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{0:?} name non-empty")]
    EmptyName(PartyRole),
    #[error("party in the {0:?} slot has role {1:?}")]
    WrongRole(PartyRole, PartyRole),
    #[error("non-contiguous charge indices")]
    NonContiguousCharges,
    #[error("charge {0}: invalid provision number {1:?}")]
    BadProvision(u32, String),
    #[error("charge {0}: decision attached to charge {1}")]
    MisattachedDecision(u32, u32),
    #[error("charge {0}: decision code not normalized: {1:?}")]
    UnnormalizedCode(u32, String),
    #[error("charge {0}: {1}")]
    BadConviction(u32, ModelError),
    #[error("charge {0}: sentence has text but no convictions")]
    EmptySentence(u32),
}

/// Returns every invariant violation of `case`, not just the first.
pub fn validate_case(case: &CaseRecord) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for (slot, party) in [(PartyRole::Accused, &case.accused), (PartyRole::Plaintiff, &case.plaintiff)] {
        if party.role != slot {
            out.push(Violation::WrongRole(slot, party.role));
        }
        if party.name.trim().is_empty() {
            out.push(Violation::EmptyName(slot));
        }
    }
    if case
        .charges
        .iter()
        .enumerate()
        .any(|(i, c)| c.index as usize != i + 1)
    {
        out.push(Violation::NonContiguousCharges);
    }
    for charge in &case.charges {
        if !is_provision_number(&charge.law_citation.provision) {
            out.push(Violation::BadProvision(
                charge.index,
                charge.law_citation.provision.clone(),
            ));
        }
        for d in &charge.decisions {
            if d.charge_index != charge.index {
                out.push(Violation::MisattachedDecision(charge.index, d.charge_index));
            }
            if d.code != normalize_code(&d.code) || d.code.is_empty() {
                out.push(Violation::UnnormalizedCode(charge.index, d.code.clone()));
            }
        }
        if let Some(sentence) = &charge.sentence {
            if sentence.convictions.is_empty() && !sentence.raw_text.trim().is_empty() {
                out.push(Violation::EmptySentence(charge.index));
            }
            for c in &sentence.convictions {
                if let Err(e) = c.check() {
                    out.push(Violation::BadConviction(charge.index, e));
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartStatus {
    Ok,
    ExtractionError,
    GenerationError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Accused,
    Plaintiff,
    /// The charge list as a whole (empty or unreadable charge block).
    Charges,
    Charge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartReport {
    pub part: Part,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge_index: Option<u32>,
    pub status: PartStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl PartReport {
    pub fn ok(part: Part, charge_index: Option<u32>) -> Self {
        Self {
            part,
            charge_index,
            status: PartStatus::Ok,
            message: None,
        }
    }

    pub fn failed(part: Part, charge_index: Option<u32>, status: PartStatus, message: impl Into<String>) -> Self {
        Self {
            part,
            charge_index,
            status,
            message: Some(message.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GenerationReport {
    pub parts: Vec<PartReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl GenerationReport {
    pub fn has(&self, status: PartStatus) -> bool {
        self.parts.iter().any(|p| p.status == status)
    }

    pub fn has_extraction_error(&self) -> bool {
        self.has(PartStatus::ExtractionError)
    }

    pub fn has_generation_error(&self) -> bool {
        self.has(PartStatus::GenerationError)
    }

    pub fn status_of(&self, part: Part, charge_index: Option<u32>) -> Option<PartStatus> {
        self.parts
            .iter()
            .find(|p| p.part == part && p.charge_index == charge_index)
            .map(|p| p.status)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub accused_paragraph: Option<String>,
    pub plaintiff_paragraph: Option<String>,
    pub charge_paragraphs: Vec<Option<String>>,
    /// Provision number cited by each charge, parallel to `charge_paragraphs`.
    pub provisions: Vec<String>,
    pub report: GenerationReport,
}

impl Summary {
    pub fn paragraphs(&self) -> impl Iterator<Item = &str> {
        self.accused_paragraph
            .iter()
            .chain(self.plaintiff_paragraph.iter())
            .chain(self.charge_paragraphs.iter().flatten())
            .map(String::as_str)
    }

    pub fn realized_any(&self) -> bool {
        self.paragraphs().next().is_some()
    }

    /// Plain-text rendering, one paragraph per block.
    pub fn to_text(&self) -> String {
        self.paragraphs().collect::<Vec<_>>().join("\n\n")
    }
}

/// True if `s` still contains a `<slot>` placeholder.
pub fn has_placeholder(s: &str) -> bool {
    let mut rest = s;
    while let Some(open) = rest.find('<') {
        let after = &rest[open + 1..];
        match after.find('>') {
            Some(close) if close > 0 && !after[..close].contains(char::is_whitespace) => return true,
            _ => rest = after,
        }
    }
    false
}
