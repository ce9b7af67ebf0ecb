//! Slot templates and the rule table loaded from `data/templates.json`.
//!
//! Template syntax: `<slot>` placeholders and `[...]` optional groups. A
//! group is emitted only when every slot inside it has a value; a slot
//! outside any group is required.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use serde::Deserialize;
use thiserror::Error;

use super::GenerationError;

pub const DEFAULT_TEMPLATES: &str = include_str!("../../data/templates.json");
pub const TEMPLATES_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template {id}: {reason}")]
    Syntax { id: String, reason: String },
    #[error("rule table: {0}")]
    Table(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Lit(String),
    Slot(String),
    Group(Vec<Piece>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub id: String,
    pieces: Vec<Piece>,
}

pub type Values<'a> = BTreeMap<&'a str, String>;

impl Template {
    pub fn parse(id: impl Into<String>, src: &str) -> Result<Self, TemplateError> {
        let id = id.into();
        let err = |reason: &str| TemplateError::Syntax { id: id.clone(), reason: reason.into() };
        let mut top: Vec<Piece> = Vec::new();
        let mut group: Option<Vec<Piece>> = None;
        let mut lit = String::new();
        let mut chars = src.chars().peekable();
        while let Some(c) = chars.next() {
            let target = group.as_mut().unwrap_or(&mut top);
            match c {
                '<' => {
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('>') => break,
                            Some(ch) if ch.is_ascii_lowercase() || ch == '_' => name.push(ch),
                            _ => return Err(err("bad slot name")),
                        }
                    }
                    if name.is_empty() {
                        return Err(err("empty slot"));
                    }
                    if !lit.is_empty() {
                        target.push(Piece::Lit(std::mem::take(&mut lit)));
                    }
                    target.push(Piece::Slot(name));
                }
                '[' => {
                    if group.is_some() {
                        return Err(err("nested optional group"));
                    }
                    if !lit.is_empty() {
                        top.push(Piece::Lit(std::mem::take(&mut lit)));
                    }
                    group = Some(Vec::new());
                }
                ']' => {
                    let mut g = group.take().ok_or_else(|| err("unmatched ]"))?;
                    if !lit.is_empty() {
                        g.push(Piece::Lit(std::mem::take(&mut lit)));
                    }
                    top.push(Piece::Group(g));
                }
                '>' => return Err(err("unmatched >")),
                c => lit.push(c),
            }
        }
        if group.is_some() {
            return Err(err("unclosed optional group"));
        }
        if !lit.is_empty() {
            top.push(Piece::Lit(lit));
        }
        Ok(Self { id, pieces: top })
    }

    /// Every slot name, in order of first appearance.
    pub fn slots(&self) -> Vec<&str> {
        fn walk<'a>(ps: &'a [Piece], out: &mut Vec<&'a str>) {
            for p in ps {
                match p {
                    Piece::Slot(s) if !out.contains(&s.as_str()) => out.push(s),
                    Piece::Group(g) => walk(g, out),
                    _ => {}
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.pieces, &mut out);
        out
    }

    pub fn required_slots(&self) -> Vec<&str> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                Piece::Slot(s) => Some(s.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Number of optional groups that `values` fills.
    pub fn filled_groups(&self, values: &Values) -> usize {
        self.pieces
            .iter()
            .filter(|p| matches!(p, Piece::Group(g) if group_ready(g, values)))
            .count()
    }

    /// Renders the template; surrounding whitespace is trimmed.
    pub fn render(&self, values: &Values) -> Result<String, GenerationError> {
        let mut out = String::new();
        for p in &self.pieces {
            match p {
                Piece::Lit(l) => out.push_str(l),
                Piece::Slot(s) => out.push_str(
                    values
                        .get(s.as_str())
                        .ok_or_else(|| GenerationError::MissingSlot { template: self.id.clone(), slot: s.clone() })?,
                ),
                Piece::Group(g) if group_ready(g, values) => {
                    for q in g {
                        match q {
                            Piece::Lit(l) => out.push_str(l),
                            Piece::Slot(s) => out.push_str(&values[s.as_str()]),
                            Piece::Group(_) => unreachable!("groups do not nest"),
                        }
                    }
                }
                Piece::Group(_) => {}
            }
        }
        Ok(out.trim().to_string())
    }
}

fn group_ready(g: &[Piece], values: &Values) -> bool {
    g.iter().all(|p| match p {
        Piece::Slot(s) => values.contains_key(s.as_str()),
        _ => true,
    })
}

#[derive(Debug, Deserialize)]
struct RawTable {
    version: u32,
    party: RawParty,
    plea: RawPlea,
    decision: RawDecision,
    stitch: RawStitch,
    clauses: BTreeMap<String, String>,
    signatures: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct RawParty {
    accused: RawVariant,
    plaintiff: RawVariant,
}

#[derive(Debug, Deserialize)]
struct RawVariant {
    pattern: String,
    fallback: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawPlea {
    guilty: String,
    not_guilty: String,
}

#[derive(Debug, Deserialize)]
struct RawDecision {
    pattern: String,
    lexicon: IndexMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct RawStitch {
    pattern: String,
    repealed: String,
}

/// Decision code to realized noun phrase. One-to-one by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionLexicon {
    entries: IndexMap<String, String>,
}

impl DecisionLexicon {
    pub fn new(entries: IndexMap<String, String>) -> Result<Self, TemplateError> {
        let phrases: BTreeSet<&String> = entries.values().collect();
        if phrases.len() != entries.len() {
            return Err(TemplateError::Table("decision phrases are not distinct".into()));
        }
        if entries.keys().any(|k| *k != crate::model::normalize_code(k)) {
            return Err(TemplateError::Table("decision codes must be normalized".into()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, code: &str) -> Option<&str> {
        self.entries.get(code).map(String::as_str)
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Keys a conviction can contribute to a sentence signature, with the
/// slots each clause template must use.
pub const CLAUSE_KEYS: [(&str, &[&str]); 9] = [
    ("penalty:inflicted", &["inflicted"]),
    ("penalty:custody", &["custody"]),
    ("penalty:pretrial_granted", &["granted", "remaining"]),
    ("fine", &["amount", "delay"]),
    ("community_work", &["hours", "delay"]),
    ("other", &["duration"]),
    ("probation:supervised", &["duration"]),
    ("probation:unsupervised", &["duration"]),
    ("surcharge", &["delay"]),
];

#[derive(Debug, Clone)]
pub struct RuleTable {
    pub accused: Template,
    pub accused_fallback: Template,
    pub plaintiff: Template,
    pub plea_guilty: String,
    pub plea_not_guilty: String,
    pub decision: Template,
    pub decisions: DecisionLexicon,
    pub stitch: Template,
    pub stitch_repealed: Template,
    pub clauses: BTreeMap<String, Template>,
    /// Sorted multisets of clause keys.
    signatures: BTreeSet<Vec<String>>,
}

impl Default for RuleTable {
    fn default() -> Self {
        Self::from_json(DEFAULT_TEMPLATES).expect("bundled templates are valid")
    }
}

fn expect_slots(t: &Template, want: &[&str]) -> Result<(), TemplateError> {
    let mut got = t.slots();
    got.sort_unstable();
    let mut want = want.to_vec();
    want.sort_unstable();
    if got != want {
        return Err(TemplateError::Table(format!("{}: slots {got:?}, expected {want:?}", t.id)));
    }
    Ok(())
}

impl RuleTable {
    pub fn from_json(src: &str) -> Result<Self, TemplateError> {
        let raw: RawTable = serde_json::from_str(src).map_err(|e| TemplateError::Table(e.to_string()))?;
        if raw.version != TEMPLATES_VERSION {
            return Err(TemplateError::Table(format!("unsupported version {}", raw.version)));
        }
        let accused = Template::parse("party.accused", &raw.party.accused.pattern)?;
        expect_slots(&accused, &["accused", "birth_date", "address", "infraction_date", "lawyer"])?;
        let fallback_src = raw
            .party
            .accused
            .fallback
            .ok_or_else(|| TemplateError::Table("party.accused needs a fallback".into()))?;
        let accused_fallback = Template::parse("party.accused.fallback", &fallback_src)?;
        expect_slots(&accused_fallback, &["accused"])?;
        let plaintiff = Template::parse("party.plaintiff", &raw.party.plaintiff.pattern)?;
        expect_slots(&plaintiff, &["plaintiff", "lawyer"])?;
        let decision = Template::parse("decision", &raw.decision.pattern)?;
        expect_slots(&decision, &["ordinal", "decision", "date"])?;
        let stitch = Template::parse("stitch", &raw.stitch.pattern)?;
        expect_slots(&stitch, &["accused", "preposition", "title"])?;
        let stitch_repealed = Template::parse("stitch.repealed", &raw.stitch.repealed)?;
        expect_slots(&stitch_repealed, &["accused", "article"])?;

        let mut clauses = BTreeMap::new();
        for (key, src) in &raw.clauses {
            let (_, slots) = CLAUSE_KEYS
                .iter()
                .find(|(k, _)| k == key)
                .ok_or_else(|| TemplateError::Table(format!("unknown clause {key}")))?;
            let t = Template::parse(format!("clause.{key}"), src)?;
            expect_slots(&t, slots)?;
            clauses.insert(key.clone(), t);
        }
        let mut signatures = BTreeSet::new();
        for mut sig in raw.signatures {
            if sig.is_empty() {
                return Err(TemplateError::Table("empty signature".into()));
            }
            if let Some(k) = sig.iter().find(|k| !clauses.contains_key(k.as_str())) {
                return Err(TemplateError::Table(format!("signature uses {k} which has no clause")));
            }
            sig.sort();
            if !signatures.insert(sig.clone()) {
                return Err(TemplateError::Table(format!("duplicate signature {sig:?}")));
            }
        }
        Ok(Self {
            accused,
            accused_fallback,
            plaintiff,
            plea_guilty: raw.plea.guilty,
            plea_not_guilty: raw.plea.not_guilty,
            decision,
            decisions: DecisionLexicon::new(raw.decision.lexicon)?,
            stitch,
            stitch_repealed,
            clauses,
            signatures,
        })
    }

    pub fn has_signature(&self, sorted_keys: &[String]) -> bool {
        self.signatures.contains(sorted_keys)
    }

    pub fn signatures(&self) -> impl Iterator<Item = &[String]> {
        self.signatures.iter().map(Vec::as_slice)
    }

    pub fn party_rule_count(&self) -> usize {
        2
    }

    pub fn plea_decision_rule_count(&self) -> usize {
        2 + self.decisions.len()
    }

    pub fn sentence_rule_count(&self) -> usize {
        self.signatures.len()
    }

    pub fn rule_count(&self) -> usize {
        self.party_rule_count() + self.plea_decision_rule_count() + self.sentence_rule_count()
    }
}
