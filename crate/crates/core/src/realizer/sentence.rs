//! Sentence (penalty) paragraphs.
//!
//! Each conviction contributes one clause. The multiset of clause keys must
//! be one of the signatures in the rule table; there is no partial match and
//! no cascade of rules.

use crate::model::{Conviction, ConvictionDetail, ConvictionKind, DurationUnit, Quantity, SentenceRecord};

use super::french::{format_amount, format_quantity};
use super::template::Values;
use super::{GenerationError, RuleTable};

pub fn clause_key(c: &Conviction) -> &'static str {
    match (c.kind, c.detail) {
        (ConvictionKind::Penalty, ConvictionDetail::Custody) => "penalty:custody",
        (ConvictionKind::Penalty, ConvictionDetail::PretrialGranted) => "penalty:pretrial_granted",
        (ConvictionKind::Penalty, _) => "penalty:inflicted",
        (ConvictionKind::FineOrFee, _) => "fine",
        (ConvictionKind::CommunityWork, _) => "community_work",
        (ConvictionKind::Other, _) => "other",
        (ConvictionKind::Probation, ConvictionDetail::Unsupervised) => "probation:unsupervised",
        (ConvictionKind::Probation, _) => "probation:supervised",
        (ConvictionKind::Surcharge, _) => "surcharge",
    }
}

fn penalty_rank(d: ConvictionDetail) -> u8 {
    match d {
        ConvictionDetail::Custody => 1,
        ConvictionDetail::PretrialGranted => 2,
        _ => 0,
    }
}

/// Stable sort by kind order; within Penalty, inflicted then custody then
/// granted.
pub fn order_convictions(cs: &[Conviction]) -> Vec<Conviction> {
    let mut out = cs.to_vec();
    out.sort_by_key(|c| (c.kind, if c.kind == ConvictionKind::Penalty { penalty_rank(c.detail) } else { 0 }));
    out
}

/// Sorted clause keys of `cs`, duplicates kept.
pub fn signature(cs: &[Conviction]) -> Vec<String> {
    let mut keys: Vec<String> = cs.iter().map(|c| clause_key(c).to_string()).collect();
    keys.sort();
    keys
}

/// Days left to serve. Both durations must be in days.
pub fn remaining_custody(inflicted: Quantity, granted: Quantity) -> Result<Quantity, GenerationError> {
    if inflicted.unit != DurationUnit::Days || granted.unit != DurationUnit::Days {
        return Err(GenerationError::EdgeCase(format!(
            "remaining custody needs days, got {inflicted:?} and {granted:?}"
        )));
    }
    inflicted
        .value
        .checked_sub(granted.value)
        .map(Quantity::days)
        .ok_or_else(|| {
            GenerationError::EdgeCase(format!("granted credit {} exceeds sentence {}", granted.value, inflicted.value))
        })
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, GenerationError> {
    v.ok_or_else(|| GenerationError::EdgeCase(format!("conviction without {what}")))
}

fn clause_values<'a>(c: &Conviction, all: &[Conviction]) -> Result<Values<'a>, GenerationError> {
    let mut v = Values::new();
    match clause_key(c) {
        "penalty:inflicted" => {
            v.insert("inflicted", format_quantity(need(c.duration, "duration")?));
        }
        "penalty:custody" => {
            v.insert("custody", format_quantity(need(c.duration, "duration")?));
        }
        "penalty:pretrial_granted" => {
            let granted = need(c.duration, "duration")?;
            let inflicted = all
                .iter()
                .find(|o| clause_key(o) == "penalty:inflicted")
                .and_then(|o| o.duration);
            let inflicted = need(inflicted, "an inflicted sentence")?;
            v.insert("granted", format_quantity(granted));
            v.insert("remaining", format_quantity(remaining_custody(inflicted, granted)?));
        }
        "fine" => {
            v.insert("amount", format_amount(need(c.amount, "amount")?));
        }
        "community_work" => {
            let hours = need(c.duration, "hours")?;
            if hours.unit != DurationUnit::Hours {
                return Err(GenerationError::EdgeCase("community work not counted in hours".into()));
            }
            v.insert("hours", format_quantity(hours));
        }
        "probation:supervised" | "probation:unsupervised" => {
            v.insert("duration", format_quantity(need(c.duration, "duration")?));
        }
        "other" => {
            if let Some(d) = c.duration {
                v.insert("duration", format_quantity(d));
            }
        }
        "surcharge" => {
            v.insert("delay", format_quantity(need(c.delay, "delay")?));
        }
        _ => unreachable!("clause_key is closed"),
    }
    if c.kind != ConvictionKind::Surcharge {
        if let Some(d) = c.delay {
            v.insert("delay", format_quantity(d));
        }
    }
    Ok(v)
}

/// The merged paragraph for one sentence, or `None` for an empty one.
pub fn realize_sentence(s: &SentenceRecord, rules: &RuleTable) -> Result<Option<String>, GenerationError> {
    if s.convictions.is_empty() {
        return if s.raw_text.trim().is_empty() {
            Ok(None)
        } else {
            Err(GenerationError::NoRule(Vec::new()))
        };
    }
    let ordered = order_convictions(&s.convictions);
    let sig = signature(&ordered);
    if !rules.has_signature(&sig) {
        return Err(GenerationError::NoRule(sig));
    }
    let clauses = ordered
        .iter()
        .map(|c| rules.clauses[clause_key(c)].render(&clause_values(c, &ordered)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(clauses.join(" ")))
}
