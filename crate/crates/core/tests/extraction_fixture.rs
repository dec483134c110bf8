use std::collections::BTreeSet;

use litvar_core::extract::{classify_surface, extract_mentions, list_pattern_classes, Document, PatternClass};
use litvar_core::test_support::{fixtures, VariantGenerator};
use proptest::prelude::*;

type Span = (u64, usize, usize, PatternClass);

fn slice(text: &str, start: usize, end: usize) -> String {
    text.chars().skip(start).take(end - start).collect()
}

#[test]
fn labelled_corpus_precision_and_recall() {
    let corpus = fixtures::extraction_corpus();
    let mut gold: BTreeSet<Span> = BTreeSet::new();
    let mut found: BTreeSet<Span> = BTreeSet::new();
    for rec in &corpus {
        for a in &rec.annotations {
            let class = PatternClass::from_name(&a.entity_type).expect("label is a class name");
            gold.insert((a.pmid, a.start, a.end, class));
        }
        for m in extract_mentions(&rec.document) {
            found.insert((m.pmid, m.start, m.end, m.pattern_class));
        }
    }
    assert_eq!(gold.len(), 50);
    let tp = gold.intersection(&found).count() as f64;
    let precision = tp / found.len() as f64;
    let recall = tp / gold.len() as f64;
    assert!(
        precision >= 1.0 && recall >= 1.0,
        "precision {precision} recall {recall}\nmissed {:?}\nspurious {:?}",
        gold.difference(&found).collect::<Vec<_>>(),
        found.difference(&gold).collect::<Vec<_>>()
    );
    let classes: BTreeSet<PatternClass> = gold.iter().map(|s| s.3).collect();
    assert_eq!(classes.len(), PatternClass::ALL.len());
}

#[test]
fn spans_slice_surfaces_and_runs_are_identical() {
    for rec in fixtures::extraction_corpus().iter().chain(fixtures::corpus().iter()) {
        let text = rec.document.combined_text();
        let first = extract_mentions(&rec.document);
        assert_eq!(first, extract_mentions(&rec.document));
        for m in &first {
            assert_eq!(slice(&text, m.start, m.end), m.surface);
            assert_eq!(classify_surface(&m.surface), Some(m.pattern_class));
        }
        for w in first.windows(2) {
            assert!(w[0].end <= w[1].start, "overlap {:?} {:?}", w[0], w[1]);
        }
    }
}

#[test]
fn pattern_listing_is_stable() {
    let names: Vec<&str> = list_pattern_classes().iter().map(|(c, _)| c.as_str()).collect();
    assert_eq!(names, ["hgvs_canonical", "protein_shorthand", "protein_spelled", "ivs", "rsid"]);
    assert!(list_pattern_classes().iter().all(|(_, d)| !d.is_empty()));
}

fn filler() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            Just(" "),
            Just(", "),
            Just(" the "),
            Just(" é "),
            Just(" (patients) "),
            Just("; β-cells "),
        ],
        1..4,
    )
    .prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn embedded_variants_are_recovered(seed in any::<u64>(), fills in prop::collection::vec(filler(), 4)) {
        let mut generator = VariantGenerator::new(seed);
        let mut text = String::new();
        let mut expected = Vec::new();
        for fill in &fills[..3] {
            text.push_str(fill);
            let surface = generator.canonical_corpus(30)[(seed % 30) as usize].clone();
            let start = text.chars().count();
            text.push_str(&surface);
            expected.push((start, start + surface.chars().count(), surface));
        }
        text.push_str(&fills[3]);
        let doc = Document::new(1, text.clone(), "");
        let mentions = extract_mentions(&doc);
        let combined = doc.combined_text();
        for m in &mentions {
            prop_assert_eq!(slice(&combined, m.start, m.end), m.surface.clone());
        }
        let got: BTreeSet<(usize, usize, String)> =
            mentions.iter().map(|m| (m.start, m.end, m.surface.clone())).collect();
        for e in expected {
            prop_assert!(got.contains(&e), "missing {:?} in {:?}", e, got);
        }
    }

    #[test]
    fn arbitrary_text_never_panics(seed in any::<u64>()) {
        let mut generator = VariantGenerator::new(seed);
        let title = String::from_utf8_lossy(&generator.noise(200)).into_owned();
        let abs = String::from_utf8_lossy(&generator.noise(200)).into_owned();
        let doc = Document::new(seed.max(1), title, abs);
        let text = doc.combined_text();
        let n = text.chars().count();
        for m in extract_mentions(&doc) {
            prop_assert!(m.start < m.end && m.end <= n);
            prop_assert_eq!(slice(&text, m.start, m.end), m.surface);
        }
    }
}
