//! Reading one conviction out of a docket sentence line.
//!
//! Lines that match no rule become an `Other` conviction with no values,
//! which keeps them countable without inventing numbers for them.

use std::sync::LazyLock;

use regex::{Captures, Regex};

use crate::model::{Amount, Conviction, ConvictionDetail, ConvictionKind, DurationUnit, Quantity};

type Build = fn(&Captures) -> Option<Conviction>;

fn quantity(caps: &Captures, value: usize, unit: usize) -> Option<Quantity> {
    let v: u32 = caps.get(value)?.as_str().parse().ok()?;
    let u = DurationUnit::from_docket(caps.get(unit)?.as_str())?;
    (v > 0).then(|| Quantity::new(v, u))
}

fn opt_quantity(caps: &Captures, value: usize, unit: usize) -> Option<Option<Quantity>> {
    match caps.get(value) {
        None => Some(None),
        Some(_) => quantity(caps, value, unit).map(Some),
    }
}

static RULES: LazyLock<Vec<(Regex, Build)>> = LazyLock::new(|| {
    let rules: Vec<(&str, Build)> = vec![
        (r"^SURAMENDE(?: COMPENSATOIRE)?(?: DEL)? (\d+) ([A-Z]+)$", |c| {
            Some(Conviction::surcharge(quantity(c, 1, 2)?))
        }),
        (r"^EMPRISONNEMENT (\d+) ([A-Z]+)$", |c| {
            Some(Conviction::penalty(ConvictionDetail::Inflicted, quantity(c, 1, 2)?))
        }),
        (r"^DÉTENTION PROVISOIRE (\d+) ([A-Z]+)$", |c| {
            Some(Conviction::penalty(ConvictionDetail::Custody, quantity(c, 1, 2)?))
        }),
        (r"^CRÉDIT ACCORDÉ (\d+) ([A-Z]+)$", |c| {
            Some(Conviction::penalty(ConvictionDetail::PretrialGranted, quantity(c, 1, 2)?))
        }),
        (r"^PROBATION(?: DE)? +(\d+) ([A-Z]+)(?: (SANS|AVEC))? SURV\.?$", |c| {
            let supervised = c.get(3).is_none_or(|m| m.as_str() == "AVEC");
            Some(Conviction::probation(supervised, quantity(c, 1, 2)?))
        }),
        (r"^AMENDE (\d+)(?:,(\d{2}))? ?\$(?: DEL (\d+) ([A-Z]+))?$", |c| {
            let dollars: u64 = c[1].parse().ok()?;
            let cents: u64 = c.get(2).map_or(Some(0), |m| m.as_str().parse().ok())?;
            let amount = dollars.checked_mul(100)?.checked_add(cents)?;
            if amount == 0 {
                return None;
            }
            let mut conv = Conviction::fine(Amount(amount));
            conv.delay = opt_quantity(c, 3, 4)?;
            Some(conv)
        }),
        (r"^TC (\d+) (HS)(?: DEL (\d+) ([A-Z]+))?$", |c| {
            let mut conv = Conviction::new(ConvictionKind::CommunityWork, ConvictionDetail::None)
                .with_duration(quantity(c, 1, 2)?);
            conv.delay = opt_quantity(c, 3, 4)?;
            Some(conv)
        }),
        (r"^INTERDICTION [A-ZÉÈ' ]+? (\d+) ([A-Z]+)$", |c| {
            Some(Conviction::other().with_duration(quantity(c, 1, 2)?))
        }),
    ];
    rules
        .into_iter()
        .map(|(p, f)| (Regex::new(p).expect("conviction pattern"), f))
        .collect()
});

/// Number of line rules, for accounting.
pub fn rule_count() -> usize {
    RULES.len()
}

/// Parses one conviction line (already trimmed).
pub fn parse_conviction(line: &str) -> Conviction {
    let line = line.trim();
    RULES
        .iter()
        .find_map(|(re, build)| re.captures(line).and_then(|c| build(&c)))
        .unwrap_or_else(Conviction::other)
}
