//! Criminal Code provisions: HTML parsing, lookup and JSON storage.
//!
//! The parser reads the consolidated French HTML published on the Justice
//! Laws site. Only the first two nesting levels below a section are kept as
//! structure; anything deeper is folded into the text of its parent.

use std::sync::LazyLock;

use indexmap::IndexMap;
use scraper::{ElementRef, Html, Node, Selector};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const SAMPLE_HTML: &str = include_str!("../data/ccc_sample.html");
pub const SOURCE_KEY: &str = "$source";
pub const REPEALED_TITLE: &str = "Abrogé";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CccError {
    #[error("parse error at {location}: {reason}")]
    Parse { location: String, reason: String },
    #[error("provision {0} not found")]
    NotFound(String),
    #[error("provision {provision}: {reason}")]
    Schema { provision: String, reason: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn parse_err(location: impl Into<String>, reason: impl Into<String>) -> CccError {
    CccError::Parse { location: location.into(), reason: reason.into() }
}

fn schema_err(provision: &str, reason: impl Into<String>) -> CccError {
    CccError::Schema { provision: provision.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParagraphNode {
    pub text: String,
    pub subparagraphs: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provision {
    pub number: String,
    pub title: String,
    /// Text attached to the section itself. Empty when the section is made
    /// only of subsections.
    pub text: String,
    pub repealed: bool,
    pub paragraphs: IndexMap<String, ParagraphNode>,
}

impl Provision {
    /// The store-file entry for this provision, without its number.
    pub fn to_json(&self) -> Value {
        let paragraphs: Map<String, Value> = self
            .paragraphs
            .iter()
            .map(|(label, node)| {
                let subs: Map<String, Value> =
                    node.subparagraphs.iter().map(|(l, t)| (l.clone(), Value::String(t.clone()))).collect();
                let mut n = Map::new();
                n.insert("text".into(), Value::String(node.text.clone()));
                n.insert("subparagraphs".into(), Value::Object(subs));
                (label.clone(), Value::Object(n))
            })
            .collect();
        let mut entry = Map::new();
        entry.insert("title".into(), Value::String(self.title.clone()));
        entry.insert("text".into(), Value::String(self.text.clone()));
        entry.insert("repealed".into(), Value::Bool(self.repealed));
        entry.insert("paragraphs".into(), Value::Object(paragraphs));
        Value::Object(entry)
    }

    pub fn paragraph(&self, label: &str) -> Result<&ParagraphNode, CccError> {
        self.paragraphs
            .get(label)
            .ok_or_else(|| CccError::NotFound(format!("{}{}", self.number, label)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceInfo {
    pub url: Option<String>,
    pub fetched: Option<String>,
    pub sha256: Option<String>,
}

/// Provisions keyed by number, in document order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProvisionStore {
    provisions: IndexMap<String, Provision>,
    pub source: Option<SourceInfo>,
}

static SAMPLE: LazyLock<ProvisionStore> =
    LazyLock::new(|| parse_ccc_html(SAMPLE_HTML).expect("bundled provisions parse"));

impl ProvisionStore {
    /// The small bundled extract used when no store is configured.
    pub fn sample() -> &'static ProvisionStore {
        &SAMPLE
    }

    pub fn len(&self) -> usize {
        self.provisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provisions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Provision> {
        self.provisions.values()
    }

    pub fn insert(&mut self, p: Provision) -> Option<Provision> {
        self.provisions.insert(p.number.clone(), p)
    }

    pub fn lookup(&self, number: &str) -> Result<&Provision, CccError> {
        self.provisions
            .get(number.trim())
            .ok_or_else(|| CccError::NotFound(number.trim().to_string()))
    }

    pub fn lookup_paragraph(&self, number: &str, label: &str) -> Result<&ParagraphNode, CccError> {
        self.lookup(number)?.paragraph(label)
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        if let Some(src) = &self.source {
            let mut m = Map::new();
            for (k, v) in [("url", &src.url), ("fetched", &src.fetched), ("sha256", &src.sha256)] {
                if let Some(v) = v {
                    m.insert(k.into(), Value::String(v.clone()));
                }
            }
            root.insert(SOURCE_KEY.into(), Value::Object(m));
        }
        for p in self.provisions.values() {
            root.insert(p.number.clone(), p.to_json());
        }
        Value::Object(root)
    }

    pub fn export_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize")
    }

    pub fn import_json(src: &str) -> Result<Self, CccError> {
        let value: Value = serde_json::from_str(src).map_err(|e| CccError::Json(e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, CccError> {
        let root = value
            .as_object()
            .ok_or_else(|| CccError::Json("top level must be an object".into()))?;
        let mut store = ProvisionStore::default();
        for (key, entry) in root {
            if key == SOURCE_KEY {
                store.source = Some(read_source(entry)?);
                continue;
            }
            if !crate::model::is_provision_number(key) {
                return Err(schema_err(key, "key is not a provision number"));
            }
            store.insert(read_provision(key, entry)?);
        }
        Ok(store)
    }
}

fn read_source(v: &Value) -> Result<SourceInfo, CccError> {
    let m = v.as_object().ok_or_else(|| schema_err(SOURCE_KEY, "must be an object"))?;
    let field = |k: &str| -> Result<Option<String>, CccError> {
        match m.get(k) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(schema_err(SOURCE_KEY, format!("{k} must be a string"))),
        }
    };
    Ok(SourceInfo { url: field("url")?, fetched: field("fetched")?, sha256: field("sha256")? })
}

fn read_provision(number: &str, v: &Value) -> Result<Provision, CccError> {
    let m = v.as_object().ok_or_else(|| schema_err(number, "entry must be an object"))?;
    let string = |k: &str| -> Result<String, CccError> {
        m.get(k)
            .ok_or_else(|| schema_err(number, format!("missing {k}")))?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| schema_err(number, format!("{k} must be a string")))
    };
    let title = string("title")?;
    let text = string("text")?;
    let repealed = match m.get("repealed") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(schema_err(number, "repealed must be a boolean")),
    };
    let mut paragraphs = IndexMap::new();
    if let Some(ps) = m.get("paragraphs") {
        let ps = ps.as_object().ok_or_else(|| schema_err(number, "paragraphs must be an object"))?;
        for (label, node) in ps {
            let node = node
                .as_object()
                .ok_or_else(|| schema_err(number, format!("paragraph {label} must be an object")))?;
            let text = node
                .get("text")
                .and_then(Value::as_str)
                .ok_or_else(|| schema_err(number, format!("paragraph {label}: missing text")))?
                .to_string();
            let mut subparagraphs = IndexMap::new();
            if let Some(subs) = node.get("subparagraphs") {
                let subs = subs
                    .as_object()
                    .ok_or_else(|| schema_err(number, format!("paragraph {label}: subparagraphs must be an object")))?;
                for (l, t) in subs {
                    let t = t
                        .as_str()
                        .ok_or_else(|| schema_err(number, format!("subparagraph {label}{l} must be a string")))?;
                    subparagraphs.insert(l.clone(), t.to_string());
                }
            }
            paragraphs.insert(label.clone(), ParagraphNode { text, subparagraphs });
        }
    }
    Ok(Provision { number: number.to_string(), title, text, repealed, paragraphs })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Selectors {
    items: Selector,
    section_label: Selector,
    law_label: Selector,
    repealed: Selector,
}

static SELECTORS: LazyLock<Selectors> = LazyLock::new(|| {
    let s = |q: &str| Selector::parse(q).expect("static selector");
    Selectors {
        items: s("p.MarginalNote, p.Section, p.Subsection, p.Paragraph, p.Subparagraph, p.Clause"),
        section_label: s(".sectionLabel"),
        law_label: s("span.lawlabel"),
        repealed: s(".Repealed"),
    }
});

const LEVELS: [&str; 4] = ["Subsection", "Paragraph", "Subparagraph", "Clause"];
const SKIPPED: [&str; 3] = ["lawlabel", "sectionLabel", "wb-invisible"];

fn has_class(el: &ElementRef, class: &str) -> bool {
    el.value().classes().any(|c| c == class)
}

/// Element text without labels or screen-reader hints, whitespace collapsed.
fn clean_text(el: &ElementRef) -> String {
    let mut out = String::new();
    for node in el.descendants() {
        let Node::Text(t) = node.value() else { continue };
        let hidden = node.ancestors().take_while(|a| a.id() != el.id()).any(|a| {
            ElementRef::wrap(a).is_some_and(|e| SKIPPED.iter().any(|c| has_class(&e, c)))
        });
        if !hidden {
            out.push_str(t);
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn label_of(el: &ElementRef, sel: &Selector) -> Option<String> {
    el.select(sel)
        .next()
        .map(|l| l.text().collect::<String>().trim().to_string())
        .filter(|l| !l.is_empty())
}

struct Open {
    provision: Provision,
    /// Index into `LEVELS` of the shallowest level seen in this section.
    base: Option<usize>,
}

/// Parses a Justice Laws HTML page into a store. Any structural problem
/// fails the whole parse.
pub fn parse_ccc_html(html: &str) -> Result<ProvisionStore, CccError> {
    let doc = Html::parse_document(html);
    let sel = &*SELECTORS;
    let mut store = ProvisionStore::default();
    let mut note: Option<String> = None;
    let mut open: Option<Open> = None;

    let close = |open: &mut Option<Open>, store: &mut ProvisionStore| -> Result<(), CccError> {
        if let Some(o) = open.take() {
            let n = o.provision.number.clone();
            if store.insert(o.provision).is_some() {
                return Err(parse_err(format!("section {n}"), "duplicate section number"));
            }
        }
        Ok(())
    };

    for (i, el) in doc.select(&sel.items).enumerate() {
        if has_class(&el, "MarginalNote") {
            note = Some(clean_text(&el));
            continue;
        }
        let starts_section = has_class(&el, "Section")
            || (has_class(&el, "Subsection") && el.select(&sel.section_label).next().is_some());
        if starts_section {
            close(&mut open, &mut store)?;
            let number = label_of(&el, &sel.section_label)
                .ok_or_else(|| parse_err(format!("element {i}"), "section without a number"))?;
            if !crate::model::is_provision_number(&number) {
                return Err(parse_err(format!("element {i}"), format!("bad section number {number:?}")));
            }
            let repealed = el.select(&sel.repealed).next().is_some() || clean_text(&el).starts_with("[Abrogé");
            let title = match note.take() {
                Some(t) if !t.is_empty() => t,
                _ if repealed => REPEALED_TITLE.to_string(),
                _ => return Err(parse_err(format!("section {number}"), "no marginal note")),
            };
            let mut o = Open {
                provision: Provision { number, title, text: String::new(), repealed, paragraphs: IndexMap::new() },
                base: None,
            };
            if has_class(&el, "Section") {
                o.provision.text = clean_text(&el);
            } else {
                add_level(&mut o, 0, &el, i)?;
            }
            open = Some(o);
            continue;
        }
        note = None;
        let level = LEVELS
            .iter()
            .position(|c| has_class(&el, c))
            .expect("selector only matches known classes");
        let o = open
            .as_mut()
            .ok_or_else(|| parse_err(format!("element {i}"), format!("{} before any section", LEVELS[level])))?;
        add_level(o, level, &el, i)?;
    }
    close(&mut open, &mut store)?;
    if store.is_empty() {
        return Err(parse_err("document", "no provisions found"));
    }
    store.source = Some(SourceInfo { sha256: Some(sha256_hex(html.as_bytes())), ..SourceInfo::default() });
    Ok(store)
}

fn add_level(o: &mut Open, level: usize, el: &ElementRef, i: usize) -> Result<(), CccError> {
    let number = o.provision.number.clone();
    let label = label_of(el, &SELECTORS.law_label)
        .ok_or_else(|| parse_err(format!("section {number}, element {i}"), "missing label"))?;
    let text = clean_text(el);
    let base = *o.base.get_or_insert(level);
    if level < base {
        return Err(parse_err(format!("section {number}{label}"), "nesting goes above the first level"));
    }
    let nodes = &mut o.provision.paragraphs;
    match level - base {
        0 => {
            if nodes.insert(label.clone(), ParagraphNode { text, subparagraphs: IndexMap::new() }).is_some() {
                return Err(parse_err(format!("section {number}{label}"), "duplicate label"));
            }
        }
        1 => {
            let (parent, node) = nodes
                .last_mut()
                .ok_or_else(|| parse_err(format!("section {number}{label}"), "orphan second-level item"))?;
            if node.subparagraphs.insert(label.clone(), text).is_some() {
                return Err(parse_err(format!("section {number}{parent}{label}"), "duplicate label"));
            }
        }
        _ => {
            let (_, node) = nodes
                .last_mut()
                .ok_or_else(|| parse_err(format!("section {number}{label}"), "orphan nested item"))?;
            let target = match node.subparagraphs.last_mut() {
                Some((_, t)) => t,
                None => &mut node.text,
            };
            target.push(' ');
            target.push_str(&label);
            target.push(' ');
            target.push_str(&text);
        }
    }
    Ok(())
}
