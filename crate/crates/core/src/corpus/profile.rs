use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("{field} = {value} is outside [0, 1]")]
    RateOutOfRange { field: &'static str, value: f64 },
    #[error("charge count range {0}..={1} is empty")]
    EmptyChargeRange(u32, u32),
    #[error("district name is empty")]
    NoName,
}

/// Knobs for one district's synthetic dockets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistrictProfile {
    pub name: String,
    /// Court number used in docket numbers (`500` for Montréal).
    #[serde(default = "default_court")]
    pub court_code: String,
    /// Share of plaintiffs that are organisations rather than people.
    pub organisation_plaintiff_rate: f64,
    /// Share of documents whose plaintiff is an organisation missing from
    /// the tagger's marker list.
    #[serde(default)]
    pub unknown_organisation_rate: f64,
    /// Share of documents with one sentence outside the rule table.
    #[serde(default)]
    pub edge_case_rate: f64,
    /// 0 keeps sentences to a single conviction; 1 draws from every
    /// combination in the rule table.
    #[serde(default = "half")]
    pub conviction_diversity: f64,
    pub min_charges: u32,
    pub max_charges: u32,
}

fn default_court() -> String {
    "500".into()
}

fn half() -> f64 {
    0.5
}

impl Default for DistrictProfile {
    fn default() -> Self {
        Self {
            name: "Défaut".into(),
            court_code: default_court(),
            organisation_plaintiff_rate: 0.9,
            unknown_organisation_rate: 0.0,
            edge_case_rate: 0.0,
            conviction_diversity: 0.5,
            min_charges: 1,
            max_charges: 4,
        }
    }
}

impl DistrictProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.name.trim().is_empty() {
            return Err(ProfileError::NoName);
        }
        for (field, value) in [
            ("organisation_plaintiff_rate", self.organisation_plaintiff_rate),
            ("unknown_organisation_rate", self.unknown_organisation_rate),
            ("edge_case_rate", self.edge_case_rate),
            ("conviction_diversity", self.conviction_diversity),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ProfileError::RateOutOfRange { field, value });
            }
        }
        if self.min_charges == 0 || self.min_charges > self.max_charges {
            return Err(ProfileError::EmptyChargeRange(self.min_charges, self.max_charges));
        }
        Ok(())
    }

    /// Same profile with both failure injections switched off.
    pub fn clean(&self) -> Self {
        Self { unknown_organisation_rate: 0.0, edge_case_rate: 0.0, ..self.clone() }
    }
}

#[allow(clippy::too_many_arguments)]
fn district(name: &str, court: &str, org: f64, unknown: f64, edge: f64, diversity: f64, min: u32, max: u32) -> DistrictProfile {
    DistrictProfile {
        name: name.into(),
        court_code: court.into(),
        organisation_plaintiff_rate: org,
        unknown_organisation_rate: unknown,
        edge_case_rate: edge,
        conviction_diversity: diversity,
        min_charges: min,
        max_charges: max,
    }
}

/// Eight districts. Organisation-heavy districts get more unknown
/// organisations; busy districts get more varied sentences.
pub fn district_profiles() -> Vec<DistrictProfile> {
    vec![
        district("Chicoutimi", "150", 0.95, 0.00, 0.00, 0.3, 1, 3),
        district("Gatineau", "550", 0.90, 0.07, 0.07, 0.5, 1, 4),
        district("Granby", "460", 0.70, 0.30, 0.05, 0.5, 1, 4),
        district("Longueuil", "505", 0.90, 0.06, 0.00, 0.4, 1, 4),
        district("Montréal", "500", 0.85, 0.14, 0.09, 0.9, 1, 6),
        district("Québec", "200", 0.95, 0.00, 0.00, 0.4, 1, 3),
        district("Sherbrooke", "450", 0.75, 0.25, 0.08, 0.6, 1, 4),
        district("Trois-Rivières", "400", 0.85, 0.15, 0.00, 0.5, 1, 4),
    ]
}

pub fn profile_by_name(name: &str) -> Option<DistrictProfile> {
    if name.eq_ignore_ascii_case("default") || name == "Défaut" {
        return Some(DistrictProfile::default());
    }
    district_profiles()
        .into_iter()
        .find(|p| p.name.to_lowercase() == name.to_lowercase())
}
