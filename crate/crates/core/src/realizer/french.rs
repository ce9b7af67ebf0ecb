//! French surface forms: dates, ordinals, quantities, amounts, elision.

use chrono::{Datelike, NaiveDate};

use crate::model::{Amount, DurationUnit, Quantity};

const MONTHS: [&str; 12] = [
    "janvier", "février", "mars", "avril", "mai", "juin", "juillet", "août", "septembre", "octobre", "novembre",
    "décembre",
];

/// `1er janvier 1979`, `15 mars 2020`.
pub fn format_date_fr(d: NaiveDate) -> String {
    let day = match d.day() {
        1 => "1er".to_string(),
        n => n.to_string(),
    };
    format!("{day} {} {}", MONTHS[d.month0() as usize], d.year())
}

/// `1er`, `2e`, `11e`.
pub fn format_ordinal_fr(n: u32) -> String {
    if n == 1 {
        "1er".into()
    } else {
        format!("{n}e")
    }
}

pub fn unit_word(unit: DurationUnit, value: u32) -> &'static str {
    let plural = value > 1;
    match (unit, plural) {
        (DurationUnit::Hours, false) => "heure",
        (DurationUnit::Hours, true) => "heures",
        (DurationUnit::Days, false) => "jour",
        (DurationUnit::Days, true) => "jours",
        (DurationUnit::Months, _) => "mois",
        (DurationUnit::Years, false) => "an",
        (DurationUnit::Years, true) => "ans",
    }
}

/// `30 jours`, `1 an`, `6 mois`.
pub fn format_quantity(q: Quantity) -> String {
    format!("{} {}", q.value, unit_word(q.unit, q.value))
}

/// `500 $`, `250,50 $`. Digits are not grouped so they stay identical to
/// the docket.
pub fn format_amount(a: Amount) -> String {
    let (dollars, cents) = (a.0 / 100, a.0 % 100);
    if cents == 0 {
        format!("{dollars} $")
    } else {
        format!("{dollars},{cents:02} $")
    }
}

/// Words whose initial `h` blocks elision.
const H_ASPIRE: &[&str] = &[
    "hache", "haine", "haïr", "hall", "halte", "hameau", "hanche", "handicap", "harcèlement", "harceler", "hardi",
    "hargne", "hasard", "hâte", "hausse", "haut", "hauteur", "héros", "heurt", "heurter", "hibou", "hiérarchie",
    "hold-up", "homard", "honte", "hors", "hublot", "huée", "hurler", "hutte",
];

fn first_word(s: &str) -> String {
    s.split(|c: char| c.is_whitespace() || c == '\'' || c == '’' || c == ',')
        .next()
        .unwrap_or("")
        .to_lowercase()
}

/// True when `word` starts with a vowel sound for elision purposes.
pub fn starts_with_vowel_sound(word: &str) -> bool {
    let Some(c) = word.chars().next() else { return false };
    let c = c.to_lowercase().next().unwrap_or(c);
    if "aeiouyàâäéèêëîïôöùûüœæ".contains(c) {
        return true;
    }
    if c == 'h' {
        let w = first_word(word);
        return !H_ASPIRE.iter().any(|h| w.starts_with(h));
    }
    false
}

/// Joins a preposition and the following phrase, applying elision (`de` →
/// `d'`) and contraction (`de le` → `du`, `à les` → `aux`).
pub fn join_preposition(prep: &str, phrase: &str) -> String {
    let phrase = phrase.trim_start();
    let (article, rest) = match phrase.split_once(' ') {
        Some((a, r)) => (a, r),
        None => (phrase, ""),
    };
    let contracted = match (prep, article.to_lowercase().as_str()) {
        ("de", "le") => Some("du"),
        ("de", "les") => Some("des"),
        ("à", "le") => Some("au"),
        ("à", "les") => Some("aux"),
        _ => None,
    };
    if let (Some(c), false) = (contracted, rest.is_empty()) {
        return format!("{c} {rest}");
    }
    if prep == "de" && starts_with_vowel_sound(phrase) {
        return format!("d'{phrase}");
    }
    format!("{prep} {phrase}")
}

/// Lowercases the first letter unless the first word looks like an acronym.
pub fn decapitalize(s: &str) -> String {
    let mut chars = s.chars();
    let Some(first) = chars.next() else { return String::new() };
    let second = chars.clone().next();
    if second.is_some_and(|c| c.is_uppercase()) {
        return s.to_string();
    }
    first.to_lowercase().chain(chars).collect()
}
