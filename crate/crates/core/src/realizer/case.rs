use crate::ccc::{CccError, ProvisionStore};
use crate::extractor::NormalizedParts;
use crate::model::{
    CaseRecord, ChargeRecord, DecisionRecord, GenerationReport, LawCitation, Part, PartReport, PartStatus, PartyRecord,
    PartyRole, PleaCode, Summary,
};

use super::french::{format_date_fr, format_ordinal_fr};
use super::sentence::realize_sentence;
use super::stitch::{stitch_title, DefaultStitcher, PrepositionLexicon, StitchStrategy};
use super::template::Values;
use super::{GenerationError, RuleTable};

/// Subject used in charge sentences when the accused's name is unknown.
pub const ANONYMOUS_ACCUSED: &str = "L'accusé";

/// Everything needed to turn records into text. Cheap to share across threads.
pub struct Realizer<'a> {
    pub rules: &'a RuleTable,
    pub store: &'a ProvisionStore,
    pub lexicon: &'a PrepositionLexicon,
    pub stitcher: &'a dyn StitchStrategy,
}

impl<'a> Realizer<'a> {
    pub fn new(
        rules: &'a RuleTable,
        store: &'a ProvisionStore,
        lexicon: &'a PrepositionLexicon,
        stitcher: &'a dyn StitchStrategy,
    ) -> Self {
        Self { rules, store, lexicon, stitcher }
    }

    pub fn realize_party(&self, p: &PartyRecord) -> Result<String, GenerationError> {
        let name = p.organisation.as_deref().unwrap_or(&p.name).trim();
        if name.is_empty() {
            return Err(GenerationError::NoVariant(format!("{:?} without a name", p.role)));
        }
        let mut v = Values::new();
        if let Some(l) = p.lawyer.as_deref().filter(|l| !l.trim().is_empty()) {
            v.insert("lawyer", l.trim().to_string());
        }
        match p.role {
            PartyRole::Accused => {
                v.insert("accused", name.to_string());
                if let Some(d) = p.birth_date {
                    v.insert("birth_date", format_date_fr(d));
                }
                if let Some(a) = p.address.as_deref().filter(|a| !a.trim().is_empty()) {
                    v.insert("address", a.trim().to_string());
                }
                if let Some(d) = p.infraction_date {
                    v.insert("infraction_date", format_date_fr(d));
                }
                if self.rules.accused.filled_groups(&v) == 0 {
                    self.rules.accused_fallback.render(&v)
                } else {
                    self.rules.accused.render(&v)
                }
            }
            PartyRole::Plaintiff => {
                v.insert("plaintiff", name.to_string());
                self.rules.plaintiff.render(&v)
            }
        }
    }

    pub fn realize_plea(&self, plea: Option<PleaCode>) -> Option<&str> {
        plea.map(|p| match p {
            PleaCode::Guilty => self.rules.plea_guilty.as_str(),
            PleaCode::NotGuilty => self.rules.plea_not_guilty.as_str(),
        })
    }

    pub fn realize_decisions(&self, decisions: &[DecisionRecord]) -> Result<Vec<String>, GenerationError> {
        decisions
            .iter()
            .map(|d| {
                let phrase = self
                    .rules
                    .decisions
                    .get(&d.code)
                    .ok_or_else(|| GenerationError::UnknownCode(d.code.clone()))?;
                let v: Values = [
                    ("ordinal", format_ordinal_fr(d.charge_index)),
                    ("decision", phrase.to_string()),
                    ("date", format_date_fr(d.date)),
                ]
                .into_iter()
                .collect();
                self.rules.decision.render(&v)
            })
            .collect()
    }

    /// The opening sentence of a charge paragraph. Returns the sentence and
    /// an optional warning.
    pub fn stitch_charge(&self, accused: &str, citation: &LawCitation) -> Result<(String, Option<String>), GenerationError> {
        let p = self.store.lookup(&citation.provision)?;
        if let Some(label) = &citation.paragraph {
            let node = p.paragraph(label)?;
            if let Some(sub) = &citation.subparagraph {
                if !node.subparagraphs.contains_key(sub) {
                    return Err(CccError::NotFound(citation.reference()).into());
                }
            }
        }
        if p.repealed {
            let v: Values = [("accused", accused.to_string()), ("article", p.number.clone())].into_iter().collect();
            return Ok((self.rules.stitch_repealed.render(&v)?, None));
        }
        let s = stitch_title(self.rules, self.stitcher, self.lexicon, accused, &p.title)?;
        Ok((s.sentence, s.warning))
    }

    pub fn realize_charge(&self, accused: &str, c: &ChargeRecord) -> Result<(String, Option<String>), GenerationError> {
        let (opening, warning) = self.stitch_charge(accused, &c.law_citation)?;
        let mut parts = vec![opening];
        parts.extend(self.realize_plea(c.plea).map(str::to_string));
        parts.extend(self.realize_decisions(&c.decisions)?);
        if let Some(s) = &c.sentence {
            parts.extend(realize_sentence(s, self.rules)?);
        }
        Ok((parts.join(" "), warning))
    }

    /// Realizes a full, already normalized case.
    pub fn realize_case(&self, case: &CaseRecord) -> Summary {
        self.realize_parts(&NormalizedParts {
            accused: Ok(case.accused.clone()),
            plaintiff: Ok(case.plaintiff.clone()),
            charges: Ok(case.charges.clone()),
        })
    }

    /// Realizes whatever parts normalized; failed parts are reported, never
    /// filled in.
    pub fn realize_parts(&self, parts: &NormalizedParts) -> Summary {
        let mut report = GenerationReport::default();
        let mut party = |part: Part, r: &Result<PartyRecord, crate::extractor::NormalizationError>| match r {
            Err(e) => {
                report.parts.push(PartReport::failed(part, None, PartStatus::ExtractionError, e.to_string()));
                None
            }
            Ok(p) => match self.realize_party(p) {
                Ok(text) => {
                    report.parts.push(PartReport::ok(part, None));
                    Some(text)
                }
                Err(e) => {
                    report.parts.push(PartReport::failed(part, None, PartStatus::GenerationError, e.to_string()));
                    None
                }
            },
        };
        let accused_paragraph = party(Part::Accused, &parts.accused);
        let plaintiff_paragraph = party(Part::Plaintiff, &parts.plaintiff);

        let accused_name = parts
            .accused
            .as_ref()
            .ok()
            .map(|p| p.name.trim())
            .filter(|n| !n.is_empty())
            .unwrap_or(ANONYMOUS_ACCUSED);
        let mut charge_paragraphs = Vec::new();
        let mut provisions = Vec::new();
        match &parts.charges {
            Err(e) => report.parts.push(PartReport::failed(Part::Charges, None, PartStatus::ExtractionError, e.to_string())),
            Ok(cs) if cs.is_empty() => {
                report.parts.push(PartReport::failed(Part::Charges, None, PartStatus::ExtractionError, "no charges"))
            }
            Ok(cs) => {
                report.parts.push(PartReport::ok(Part::Charges, None));
                for c in cs {
                    provisions.push(c.law_citation.provision.clone());
                    match self.realize_charge(accused_name, c) {
                        Ok((text, warning)) => {
                            report.parts.push(PartReport::ok(Part::Charge, Some(c.index)));
                            report.warnings.extend(warning.map(|w| format!("charge {}: {w}", c.index)));
                            charge_paragraphs.push(Some(text));
                        }
                        Err(e) => {
                            report.parts.push(PartReport::failed(
                                Part::Charge,
                                Some(c.index),
                                PartStatus::GenerationError,
                                e.to_string(),
                            ));
                            charge_paragraphs.push(None);
                        }
                    }
                }
            }
        }
        Summary { accused_paragraph, plaintiff_paragraph, charge_paragraphs, provisions, report }
    }
}

/// Owned realizer configuration using the bundled rules, sample store and
/// default stitching strategy.
pub struct DefaultRealizer {
    pub rules: RuleTable,
    pub lexicon: PrepositionLexicon,
    pub stitcher: DefaultStitcher,
}

impl Default for DefaultRealizer {
    fn default() -> Self {
        let lexicon = PrepositionLexicon::default();
        Self { rules: RuleTable::default(), stitcher: DefaultStitcher { lexicon: lexicon.clone() }, lexicon }
    }
}

impl DefaultRealizer {
    pub fn with_store<'a>(&'a self, store: &'a ProvisionStore) -> Realizer<'a> {
        Realizer::new(&self.rules, store, &self.lexicon, &self.stitcher)
    }
}
