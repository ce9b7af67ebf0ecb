use std::collections::HashSet;

use plumitif_core::ccc::ProvisionStore;
use plumitif_core::corpus::{district_profiles, synthesize_document, DocumentSpec};
use plumitif_core::extractor::{extract_entities, normalize, PatternTagger};
use plumitif_core::pipeline::Pipeline;
use plumitif_core::realizer::{remaining_custody, GenerationError};
use plumitif_core::segmenter::{segment, MarkerTable};
use plumitif_core::*;
use proptest::prelude::*;

fn profile_index() -> impl Strategy<Value = usize> {
    0..district_profiles().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn case_record_json_round_trip(seed in any::<u64>(), index in 0u64..1000, k in profile_index()) {
        let doc = synthesize_document(&district_profiles()[k], seed, index, DocumentSpec::default());
        let json = serde_json::to_string(&doc.gold_case).unwrap();
        let back: CaseRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, doc.gold_case);
    }

    #[test]
    fn store_json_round_trip(keep in proptest::collection::vec(any::<bool>(), 47)) {
        let mut store = ProvisionStore::default();
        for (p, k) in ProvisionStore::sample().iter().zip(keep) {
            if k {
                store.insert(p.clone());
            }
        }
        let back = ProvisionStore::import_json(&store.export_json()).unwrap();
        prop_assert_eq!(back, store);
    }

    #[test]
    fn segments_tile_the_document(seed in any::<u64>(), index in 0u64..1000, k in profile_index()) {
        let doc = synthesize_document(&district_profiles()[k], seed, index, DocumentSpec::default());
        let markers = MarkerTable::default();
        let segs = segment(&doc.raw, &markers).unwrap();
        let text = doc.raw.text();
        prop_assert_eq!(segs.last().unwrap().span.end, text.len());
        for w in segs.windows(2) {
            prop_assert_eq!(w[0].span.end, w[1].span.start);
        }
        for s in &segs {
            prop_assert_eq!(&text[s.span.start..s.span.end], s.text.as_str());
        }
        prop_assert_eq!(&segs, &doc.gold_segments);
        prop_assert_eq!(segment(&doc.raw, &markers).unwrap(), segs);
    }

    #[test]
    fn pattern_entities_are_verbatim_and_disjoint(seed in any::<u64>(), index in 0u64..1000, k in profile_index()) {
        let doc = synthesize_document(&district_profiles()[k], seed, index, DocumentSpec::default());
        let tagger = PatternTagger::default();
        for seg in &doc.gold_segments {
            let es = extract_entities(seg, &tagger);
            prop_assert!(entities_well_formed(&es));
            for e in &es {
                prop_assert_eq!(&seg.text[e.span.start..e.span.end], e.surface.as_str());
            }
        }
    }

    #[test]
    fn clean_documents_normalize_to_gold(seed in any::<u64>(), index in 0u64..1000, k in profile_index()) {
        let doc = synthesize_document(&district_profiles()[k], seed, index, DocumentSpec::clean());
        let tagger = PatternTagger::default();
        let tagged: Vec<_> = doc.gold_segments.iter().map(|s| (s.clone(), extract_entities(s, &tagger))).collect();
        prop_assert_eq!(normalize(&tagged).unwrap(), doc.gold_case);
    }

    #[test]
    fn remaining_custody_is_difference(inflicted in 0u32..5000, granted in 0u32..5000) {
        let r = remaining_custody(Quantity::days(inflicted), Quantity::days(granted));
        if granted <= inflicted {
            prop_assert_eq!(r, Ok(Quantity::days(inflicted - granted)));
        } else {
            prop_assert!(matches!(r, Err(GenerationError::EdgeCase(_))));
        }
    }

    #[test]
    fn summarize_never_panics(text in "(ACC\\. |POURS\\. |CHEFS\n|CH\\. 1  C\\.CR\\. 266\n|[ A-Za-zÉé0-9/.$]{0,20}\n){0,12}") {
        let p = Pipeline::default();
        match p.summarize(&text) {
            Ok(s) => {
                let parts: HashSet<_> = s.report.parts.iter().map(|r| (r.part, r.charge_index)).collect();
                prop_assert_eq!(parts.len(), s.report.parts.len());
                for para in s.paragraphs() {
                    prop_assert!(!has_placeholder(para));
                }
            }
            Err(_) => prop_assert!(text.trim().is_empty()),
        }
    }
}
