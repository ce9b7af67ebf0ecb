//! Synthetic dockets with gold annotations.
//!
//! The writer records every entity span while it emits text, and builds the
//! gold [`CaseRecord`] from its own draws, never by reading the text back.

use std::sync::LazyLock;

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{DistrictProfile, ProfileError};
use crate::ccc::ProvisionStore;
use crate::extractor::TaggerStrategy;
use crate::model::{
    format_docket_date, Amount, CaseRecord, ChargeRecord, Conviction, ConvictionDetail, DecisionRecord,
    Entity, EntityLabel, LawCitation, PartyRecord, PartyRole, PleaCode, Quantity, RawPlumitif, Segment, SegmentKind,
    SentenceRecord, Span,
};
use crate::realizer::RuleTable;

const POOL_JSON: &str = include_str!("../../data/fictional_pool.json");

#[derive(Debug, Deserialize)]
struct Pool {
    first_names: Vec<String>,
    last_names: Vec<String>,
    streets: Vec<String>,
    cities: Vec<(String, String)>,
    organisations: Vec<String>,
    unknown_organisations: Vec<String>,
    other_orders: Vec<String>,
}

static POOL: LazyLock<Pool> = LazyLock::new(|| serde_json::from_str(POOL_JSON).expect("bundled pool is valid"));

/// The three sentence lines of the documented edge case, with the
/// convictions a reader of the docket would record for them.
pub fn complex_sentence_lines() -> Vec<(&'static str, Conviction)> {
    vec![
        ("PROBATION DE  2 ANS SURV.", Conviction::probation(true, Quantity::years(2))),
        ("PROBATION DPAC:8.5MS/EMPR:6.5M", Conviction::other()),
        ("TC 75 HS DEL 12 MS/SUIVI PROB 1 1/2 AN", Conviction::other()),
    ]
}

/// Per-document overrides of the profile's random draws.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentSpec {
    pub unknown_plaintiff: Option<bool>,
    pub organisation_plaintiff: Option<bool>,
    pub edge_case: Option<bool>,
}

impl DocumentSpec {
    pub fn unknown_plaintiff() -> Self {
        Self { unknown_plaintiff: Some(true), ..Self::clean() }
    }

    pub fn edge_case() -> Self {
        Self { edge_case: Some(true), ..Self::clean() }
    }

    pub fn clean() -> Self {
        Self { unknown_plaintiff: Some(false), organisation_plaintiff: None, edge_case: Some(false) }
    }
}

/// What was injected into a document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injections {
    pub unknown_plaintiff: bool,
    pub edge_case_charge: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldPlumitif {
    pub district: String,
    pub raw: RawPlumitif,
    pub gold_segments: Vec<Segment>,
    /// Parallel to `gold_segments`; spans index the segment text.
    pub gold_entities: Vec<Vec<Entity>>,
    pub gold_case: CaseRecord,
    pub injected: Injections,
}

impl GoldPlumitif {
    pub fn entities_for(&self, kind: SegmentKind) -> &[Entity] {
        self.gold_segments
            .iter()
            .position(|s| s.kind == kind)
            .map_or(&[], |i| &self.gold_entities[i])
    }

    /// A tagger that returns this document's gold entities.
    pub fn oracle(&self) -> GoldTagger<'_> {
        GoldTagger { doc: self }
    }
}

/// Perfect tagger for one document; unknown segments yield nothing.
pub struct GoldTagger<'a> {
    doc: &'a GoldPlumitif,
}

impl TaggerStrategy for GoldTagger<'_> {
    fn id(&self) -> &str {
        "gold"
    }

    fn tag(&self, segment: &Segment) -> Vec<Entity> {
        self.doc
            .gold_segments
            .iter()
            .position(|s| s.kind == segment.kind && s.span == segment.span)
            .map(|i| self.doc.gold_entities[i].clone())
            .unwrap_or_default()
    }
}

struct Writer {
    text: String,
    starts: Vec<(SegmentKind, usize)>,
    entities: Vec<Vec<Entity>>,
}

impl Writer {
    fn new() -> Self {
        Self { text: String::new(), starts: Vec::new(), entities: Vec::new() }
    }

    fn begin(&mut self, kind: SegmentKind) {
        self.starts.push((kind, self.text.len()));
        self.entities.push(Vec::new());
    }

    fn put(&mut self, s: &str) {
        self.text.push_str(s);
    }

    fn ent(&mut self, label: EntityLabel, s: &str) {
        let base = self.starts.last().expect("entity outside a segment").1;
        let start = self.text.len() - base;
        self.text.push_str(s);
        self.entities
            .last_mut()
            .expect("segment open")
            .push(Entity { label, span: Span::new(start, start + s.len()), surface: s.to_string() });
    }

    fn finish(self) -> (String, Vec<Segment>, Vec<Vec<Entity>>) {
        let n = self.starts.len();
        let segments = (0..n)
            .map(|i| {
                let (kind, start) = self.starts[i];
                let end = self.starts.get(i + 1).map_or(self.text.len(), |s| s.1);
                Segment { kind, span: Span::new(start, end), text: self.text[start..end].to_string() }
            })
            .collect();
        (self.text, segments, self.entities)
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("non-empty pool")
}

fn person(rng: &mut ChaCha8Rng) -> String {
    format!("{} {}", pick(rng, &POOL.first_names), pick(rng, &POOL.last_names))
}

fn date_between(rng: &mut ChaCha8Rng, from: NaiveDate, days: u64) -> NaiveDate {
    from + Days::new(rng.gen_range(0..=days))
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid constant date")
}

fn address(rng: &mut ChaCha8Rng) -> String {
    let (city, prefix) = pick(rng, &POOL.cities);
    let letter = (b'A' + rng.gen_range(0..26u8)) as char;
    format!(
        "{} {} {} QC {}{}{}{}",
        rng.gen_range(1..=9999),
        pick(rng, &POOL.streets),
        city,
        prefix,
        rng.gen_range(0..10),
        letter,
        rng.gen_range(0..10)
    )
}

fn organisation(rng: &mut ChaCha8Rng, known: bool) -> String {
    let template = if known { pick(rng, &POOL.organisations) } else { pick(rng, &POOL.unknown_organisations) };
    let city = &pick(rng, &POOL.cities).0;
    template
        .replace("{city}", city)
        .replace("{CITY}", &city.to_uppercase())
        .replace("{LAST}", &pick(rng, &POOL.last_names).to_uppercase())
        .replace("{digits}", &format!("{:03}-{:04}", rng.gen_range(0..1000), rng.gen_range(0..10000)))
}

fn quantity_line(q: Quantity) -> String {
    format!("{} {}", q.value, q.unit.docket_form(q.value))
}

/// Docket line and gold conviction for one clause key.
fn conviction_line(rng: &mut ChaCha8Rng, key: &str, inflicted_days: Option<u32>) -> (String, Conviction) {
    match key {
        "penalty:inflicted" => {
            let q = match inflicted_days {
                Some(d) => Quantity::days(d),
                None => Quantity::months(rng.gen_range(1..=24)),
            };
            (format!("EMPRISONNEMENT {}", quantity_line(q)), Conviction::penalty(ConvictionDetail::Inflicted, q))
        }
        "penalty:custody" => {
            let q = Quantity::days(rng.gen_range(1..=400));
            (format!("DÉTENTION PROVISOIRE {}", quantity_line(q)), Conviction::penalty(ConvictionDetail::Custody, q))
        }
        "penalty:pretrial_granted" => {
            let q = Quantity::days(rng.gen_range(1..=inflicted_days.expect("credit needs a sentence in days")));
            (format!("CRÉDIT ACCORDÉ {}", quantity_line(q)), Conviction::penalty(ConvictionDetail::PretrialGranted, q))
        }
        "fine" => {
            let dollars = rng.gen_range(1..=100u64) * 50;
            let cents = if rng.gen_bool(0.1) { rng.gen_range(1..100u64) } else { 0 };
            let amount = Amount(dollars * 100 + cents);
            let mut line = if cents == 0 { format!("AMENDE {dollars} $") } else { format!("AMENDE {dollars},{cents:02} $") };
            let mut c = Conviction::fine(amount);
            if rng.gen_bool(0.7) {
                let d = Quantity::months(rng.gen_range(1..=24));
                line.push_str(&format!(" DEL {}", quantity_line(d)));
                c = c.with_delay(d);
            }
            (line, c)
        }
        "community_work" => {
            let h = rng.gen_range(10..=240);
            let mut line = format!("TC {h} HS");
            let mut c = Conviction::community_work(h);
            if rng.gen_bool(0.6) {
                let d = Quantity::months(rng.gen_range(1..=18));
                line.push_str(&format!(" DEL {}", quantity_line(d)));
                c = c.with_delay(d);
            }
            (line, c)
        }
        "other" => {
            if rng.gen_bool(0.5) {
                let q = Quantity::years(rng.gen_range(1..=5));
                (format!("INTERDICTION DE CONDUIRE {}", quantity_line(q)), Conviction::other().with_duration(q))
            } else {
                (pick(rng, &POOL.other_orders).clone(), Conviction::other())
            }
        }
        "probation:supervised" | "probation:unsupervised" => {
            let supervised = key == "probation:supervised";
            let q = if rng.gen_bool(0.7) {
                Quantity::years(rng.gen_range(1..=3))
            } else {
                Quantity::months(rng.gen_range(6..=36))
            };
            let flag = if supervised { "AVEC" } else { "SANS" };
            (format!("PROBATION {} {flag} SURV.", quantity_line(q)), Conviction::probation(supervised, q))
        }
        "surcharge" => {
            let q = if rng.gen_bool(0.8) {
                Quantity::days(rng.gen_range(30..=180))
            } else {
                Quantity::months(rng.gen_range(1..=6))
            };
            (format!("SURAMENDE DEL {}", quantity_line(q)), Conviction::surcharge(q))
        }
        other => unreachable!("unknown clause key {other}"),
    }
}

struct Tables {
    rules: RuleTable,
    singles: Vec<Vec<String>>,
    all: Vec<Vec<String>>,
    citations: Vec<(LawCitation, String)>,
}

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let rules = RuleTable::default();
    let all: Vec<Vec<String>> = rules.signatures().map(<[String]>::to_vec).collect();
    let singles = all.iter().filter(|s| s.len() == 1).cloned().collect();
    let mut citations = Vec::new();
    for p in ProvisionStore::sample().iter().filter(|p| !p.repealed) {
        let description = p.title.to_uppercase();
        citations.push((LawCitation::provision(&p.number), description.clone()));
        for (label, node) in &p.paragraphs {
            citations.push((LawCitation::provision(&p.number).with_paragraph(label), description.clone()));
            for sub in node.subparagraphs.keys() {
                citations.push((
                    LawCitation::provision(&p.number).with_paragraph(label).with_subparagraph(sub),
                    description.clone(),
                ));
            }
        }
    }
    Tables { rules, singles, all, citations }
});

fn sentence_lines(rng: &mut ChaCha8Rng, profile: &DistrictProfile) -> Vec<(String, Conviction)> {
    let t = &*TABLES;
    let sig = if rng.gen_bool(profile.conviction_diversity) { pick(rng, &t.all) } else { pick(rng, &t.singles) };
    let needs_days = sig.iter().any(|k| k == "penalty:pretrial_granted") || rng.gen_bool(0.8);
    let inflicted_days = needs_days.then(|| rng.gen_range(1..=730));
    let mut lines: Vec<(String, Conviction)> = sig.iter().map(|k| conviction_line(rng, k, inflicted_days)).collect();
    lines.shuffle(rng);
    lines
}

fn document_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One document. Deterministic in `(profile, seed, index, spec)`.
pub fn synthesize_document(profile: &DistrictProfile, seed: u64, index: u64, spec: DocumentSpec) -> GoldPlumitif {
    let mut rng = document_rng(seed, index);
    let rng = &mut rng;
    let t = &*TABLES;
    let mut w = Writer::new();

    w.put("COUR DU QUÉBEC, CHAMBRE CRIMINELLE ET PÉNALE\n");
    w.put(&format!(
        "DISTRICT: {}   DOSSIER: {}-01-{:06}-{:03}\n",
        profile.name.to_uppercase(),
        profile.court_code,
        rng.gen_range(0..1_000_000),
        rng.gen_range(150..=219)
    ));

    // Accused.
    w.begin(SegmentKind::Accused);
    let name = person(rng);
    let mut accused = PartyRecord::named(PartyRole::Accused, name.clone());
    w.put("ACC. ");
    w.ent(EntityLabel::Person, &name);
    w.put("\n");
    if rng.gen_bool(0.9) {
        let d = date_between(rng, ymd(1950, 1, 1), 19_000);
        w.put("     NÉ LE ");
        w.ent(EntityLabel::Date, &format_docket_date(d));
        w.put("\n");
        accused.birth_date = Some(d);
    }
    if rng.gen_bool(0.85) {
        let a = address(rng);
        w.put("     ADR. ");
        w.ent(EntityLabel::Address, &a);
        w.put("\n");
        accused.address = Some(a);
    }
    if rng.gen_bool(0.7) {
        let l = person(rng);
        w.put(if rng.gen_bool(0.5) { "     AV. Me " } else { "     AV. " });
        w.ent(EntityLabel::Person, &l);
        w.put("\n");
        accused.lawyer = Some(l);
    }
    let infraction = date_between(rng, ymd(2015, 1, 1), 2_000);
    if rng.gen_bool(0.9) {
        w.put("     INFR. ");
        w.ent(EntityLabel::Date, &format_docket_date(infraction));
        w.put("\n");
        accused.infraction_date = Some(infraction);
    }

    // Plaintiff.
    w.begin(SegmentKind::Plaintiff);
    let unknown = spec.unknown_plaintiff.unwrap_or_else(|| rng.gen_bool(profile.unknown_organisation_rate));
    let is_org = unknown || spec.organisation_plaintiff.unwrap_or_else(|| rng.gen_bool(profile.organisation_plaintiff_rate));
    w.put(if rng.gen_bool(0.9) { "POURS. " } else { "PLTE. " });
    let mut plaintiff = if is_org {
        let o = organisation(rng, !unknown);
        w.ent(EntityLabel::Organisation, &o);
        PartyRecord::organisation(o)
    } else {
        let p = person(rng);
        w.ent(EntityLabel::Person, &p);
        PartyRecord::named(PartyRole::Plaintiff, p)
    };
    w.put("\n");
    if rng.gen_bool(0.6) {
        let l = person(rng);
        w.put("     AV. Me ");
        w.ent(EntityLabel::Person, &l);
        w.put("\n");
        plaintiff.lawyer = Some(l);
    }

    // Charges.
    w.begin(SegmentKind::Charges);
    w.put("CHEFS\n");
    let n = rng.gen_range(profile.min_charges..=profile.max_charges);
    let edge = spec.edge_case.unwrap_or_else(|| rng.gen_bool(profile.edge_case_rate));
    let edge_charge = edge.then(|| rng.gen_range(1..=n));
    let codes: Vec<&str> = t.rules.decisions.codes().collect();
    let mut charges = Vec::new();
    for i in 1..=n {
        let (citation, description) = pick(rng, &t.citations).clone();
        let mut charge = ChargeRecord::new(i, citation.clone());
        w.put(&format!("CH. {i}  "));
        w.ent(EntityLabel::Law, &format!("C.CR. {}", citation.reference()));
        if rng.gen_bool(0.15) {
            let (second, _) = pick(rng, &t.citations);
            w.put("  2E DISP. ");
            w.ent(EntityLabel::Law, &format!("C.CR. {}", second.reference()));
            charge.law_citation.secondary_provision = Some(second.reference());
        }
        w.put("\n     ");
        w.ent(EntityLabel::Charge, &description);
        w.put("\n");

        let mut day = date_between(rng, infraction, 200);
        if rng.gen_bool(0.9) {
            let plea = if rng.gen_bool(0.6) { PleaCode::Guilty } else { PleaCode::NotGuilty };
            w.put("     PLAID. ");
            w.ent(EntityLabel::Plea, plea.docket_form());
            w.put(" ");
            w.ent(EntityLabel::Date, &format_docket_date(day));
            w.put("\n");
            charge.plea = Some(plea);
        }
        let n_decisions = match rng.gen_range(0..20) {
            0..=1 => 0,
            2..=16 => 1,
            _ => 2,
        };
        for _ in 0..n_decisions {
            day = date_between(rng, day, 120);
            let code = if charge.plea == Some(PleaCode::Guilty) && rng.gen_bool(0.8) {
                "coupable"
            } else {
                pick(rng, &codes)
            };
            w.put("     DÉC. ");
            w.ent(EntityLabel::Decision, code);
            w.put(" ");
            w.ent(EntityLabel::Date, &format_docket_date(day));
            w.put("\n");
            charge.decisions.push(DecisionRecord::new(code, day, i));
        }
        let convicted = charge.plea == Some(PleaCode::Guilty) || charge.decisions.iter().any(|d| d.code == "coupable");
        let lines: Option<Vec<(String, Conviction)>> = if edge_charge == Some(i) {
            Some(complex_sentence_lines().into_iter().map(|(l, c)| (l.to_string(), c)).collect())
        } else if convicted && rng.gen_bool(0.85) {
            Some(sentence_lines(rng, profile))
        } else {
            None
        };
        if let Some(lines) = lines {
            day = date_between(rng, day, 60);
            w.put("     PEINE ");
            w.ent(EntityLabel::Date, &format_docket_date(day));
            w.put("\n");
            let mut sentence = SentenceRecord::default();
            for (line, conviction) in lines {
                w.put("       ");
                w.ent(EntityLabel::Sentence, &line);
                w.put("\n");
                if !sentence.raw_text.is_empty() {
                    sentence.raw_text.push('\n');
                }
                sentence.raw_text.push_str(&line);
                sentence.convictions.push(conviction);
            }
            charge.sentence = Some(sentence);
        }
        charges.push(charge);
    }

    let (text, gold_segments, gold_entities) = w.finish();
    GoldPlumitif {
        district: profile.name.clone(),
        raw: RawPlumitif::with_district(text, Some(profile.name.clone())).expect("generated text is valid"),
        gold_segments,
        gold_entities,
        gold_case: CaseRecord { accused, plaintiff, charges },
        injected: Injections { unknown_plaintiff: unknown, edge_case_charge: edge_charge },
    }
}

/// `n` documents drawn from `profile`, in index order.
pub fn synthesize(profile: &DistrictProfile, seed: u64, n: usize) -> Result<Vec<GoldPlumitif>, ProfileError> {
    profile.validate()?;
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| synthesize_document(profile, seed, i, DocumentSpec::default()))
        .collect())
}

/// One document per spec; spec `i` gets document index `i`.
pub fn synthesize_with(
    profile: &DistrictProfile,
    seed: u64,
    specs: &[DocumentSpec],
) -> Result<Vec<GoldPlumitif>, ProfileError> {
    profile.validate()?;
    Ok(specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| synthesize_document(profile, seed, i as u64, *spec))
        .collect())
}

/// `n` documents cycling through `profiles`.
pub fn synthesize_mixed(profiles: &[DistrictProfile], seed: u64, n: usize) -> Result<Vec<GoldPlumitif>, ProfileError> {
    for p in profiles {
        p.validate()?;
    }
    if profiles.is_empty() {
        return Ok(Vec::new());
    }
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| synthesize_document(&profiles[i as usize % profiles.len()], seed, i, DocumentSpec::default()))
        .collect())
}

/// Per-district document counts, in the order of [`super::district_profiles`].
pub const TEST_SPLIT: [usize; 8] = [9, 13, 18, 17, 65, 18, 12, 13];

/// The extraction test split: for each district, its share of documents.
pub fn test_split(seed: u64) -> Vec<GoldPlumitif> {
    super::district_profiles()
        .iter()
        .zip(TEST_SPLIT)
        .enumerate()
        .flat_map(|(k, (p, n))| synthesize(p, seed.wrapping_add(k as u64), n).expect("bundled profile"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::{extract_entities, normalize};
    use crate::segmenter::{segment, MarkerTable};

    #[test]
    fn deterministic_per_seed() {
        let p = DistrictProfile::default();
        let a = synthesize(&p, 7, 5).unwrap();
        let b = synthesize(&p, 7, 5).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        let c = synthesize(&p, 8, 5).unwrap();
        assert_ne!(a[0].raw, c[0].raw);
    }

    #[test]
    fn gold_spans_slice_their_segments() {
        for doc in synthesize(&DistrictProfile::default(), 3, 30).unwrap() {
            for (seg, ents) in doc.gold_segments.iter().zip(&doc.gold_entities) {
                assert_eq!(&doc.raw.text()[seg.span.start..seg.span.end], seg.text);
                assert!(crate::model::entities_well_formed(ents));
                for e in ents {
                    assert_eq!(&seg.text[e.span.start..e.span.end], e.surface);
                }
            }
            crate::model::validate_case(&doc.gold_case).unwrap();
        }
    }

    #[test]
    fn oracle_tagger_reproduces_gold_case() {
        let markers = MarkerTable::default();
        let profiles = super::super::district_profiles();
        for doc in synthesize_mixed(&profiles, 11, 80).unwrap() {
            let segs = segment(&doc.raw, &markers).unwrap();
            let tagged: Vec<_> = segs.iter().map(|s| (s.clone(), extract_entities(s, &doc.oracle()))).collect();
            assert_eq!(normalize(&tagged).unwrap(), doc.gold_case);
        }
    }

    #[test]
    fn forced_injections() {
        let p = DistrictProfile { edge_case_rate: 1.0, ..DistrictProfile::default() };
        for d in synthesize(&p, 1, 10).unwrap() {
            let i = d.injected.edge_case_charge.unwrap();
            assert!(d.raw.text().contains("PROBATION DPAC:8.5MS/EMPR:6.5M"));
            assert!(d.gold_case.charges[i as usize - 1].sentence.is_some());
        }
        let p = DistrictProfile { organisation_plaintiff_rate: 1.0, ..DistrictProfile::default() };
        for d in synthesize(&p, 1, 10).unwrap() {
            assert!(d.gold_case.plaintiff.organisation.is_some());
            assert_eq!(d.entities_for(SegmentKind::Plaintiff)[0].label, EntityLabel::Organisation);
        }
        let specs = [DocumentSpec::clean(), DocumentSpec::unknown_plaintiff()];
        let docs = synthesize_with(&DistrictProfile::default(), 1, &specs).unwrap();
        assert!(!docs[0].injected.unknown_plaintiff && docs[1].injected.unknown_plaintiff);
    }

    #[test]
    fn test_split_size() {
        assert_eq!(TEST_SPLIT.iter().sum::<usize>(), 165);
        assert_eq!(test_split(1).len(), 165);
    }
}
