//! Pattern-based variant mention extraction.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::gene::GeneMention;
use crate::hgvs::{parse_loose, VariantAst};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub pmid: u64,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

impl Document {
    pub fn new(pmid: u64, title: impl Into<String>, abstract_text: impl Into<String>) -> Self {
        Document {
            pmid,
            title: title.into(),
            abstract_text: abstract_text.into(),
        }
    }

    /// Title and abstract joined by one space; all offsets index into this.
    pub fn combined_text(&self) -> String {
        let mut text = String::with_capacity(self.title.len() + 1 + self.abstract_text.len());
        text.push_str(&self.title);
        text.push(' ');
        text.push_str(&self.abstract_text);
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternClass {
    HgvsCanonical,
    ProteinShorthand,
    ProteinSpelled,
    Ivs,
    Rsid,
}

impl PatternClass {
    pub const ALL: [PatternClass; 5] = [
        PatternClass::HgvsCanonical,
        PatternClass::ProteinShorthand,
        PatternClass::ProteinSpelled,
        PatternClass::Ivs,
        PatternClass::Rsid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternClass::HgvsCanonical => "hgvs_canonical",
            PatternClass::ProteinShorthand => "protein_shorthand",
            PatternClass::ProteinSpelled => "protein_spelled",
            PatternClass::Ivs => "ivs",
            PatternClass::Rsid => "rsid",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            PatternClass::HgvsCanonical => {
                "HGVS with molecule prefix and optional accession: c.76A>T, NM_000059.3:c.7397T>C, g.1004del, p.R506Q"
            }
            PatternClass::ProteinShorthand => {
                "one-letter protein change without prefix: R506Q, W26X, F508del, R97fs"
            }
            PatternClass::ProteinSpelled => {
                "three-letter protein change, with or without p.: Arg506Gln, p.Trp26Ter"
            }
            PatternClass::Ivs => "intron-relative substitution: IVS1+1G>A",
            PatternClass::Rsid => "dbSNP identifier: rs80359550",
        }
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub pmid: u64,
    /// Character offsets into [`Document::combined_text`], end exclusive.
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub pattern_class: PatternClass,
    pub ast: Option<VariantAst>,
}

pub fn list_pattern_classes() -> Vec<(PatternClass, &'static str)> {
    PatternClass::ALL
        .into_iter()
        .map(|c| (c, c.description()))
        .collect()
}

const AA3: &str = "Ala|Arg|Asn|Asp|Cys|Gln|Glu|Gly|His|Ile|Leu|Lys|Met|Phe|Pro|Ser|Thr|Trp|Tyr|Val|Ter";
const AA1: &str = "[ACDEFGHIKLMNPQRSTVWY]";

fn nucleotide_pattern() -> String {
    let point = r"[1-9][0-9]*(?:[+-][1-9][0-9]*)?";
    let bases = "[ACGTacgtu]";
    format!(
        r"(?:[A-Za-z][A-Za-z0-9_]*(?:\.[0-9]+)?(?:\([A-Za-z0-9-]+\))?:)?[cgrmn]\.{point}(?:_{point})?(?:{bases}>{bases}|delins{bases}+|del{bases}*|dup{bases}*|ins{bases}+|{bases}?=)"
    )
}

fn protein_edit(residue: &str) -> String {
    format!(
        r"(?:delins(?:{residue})+|del|dup|ins(?:{residue})+|=|(?:{residue})?fs(?:(?:\*|Ter|X)[1-9][0-9]*)?|{residue})"
    )
}

fn one_letter_protein() -> String {
    let residue = format!(r"{AA1}|\*|X");
    format!(
        r"(?:{residue})[1-9][0-9]*(?:_(?:{residue})[1-9][0-9]*)?{}",
        protein_edit(&residue)
    )
}

fn three_letter_protein() -> String {
    let residue = format!(r"{AA3}|\*|X");
    format!(
        r"(?:{AA3})[1-9][0-9]*(?:_(?:{AA3})[1-9][0-9]*)?{}",
        protein_edit(&residue)
    )
}

struct ClassPattern {
    class: PatternClass,
    regex: Regex,
    full: Regex,
}

impl ClassPattern {
    fn new(class: PatternClass, pattern: String) -> Self {
        ClassPattern {
            class,
            regex: Regex::new(&pattern).unwrap(),
            full: Regex::new(&format!("^(?:{pattern})$")).unwrap(),
        }
    }
}

static PATTERNS: LazyLock<Vec<ClassPattern>> = LazyLock::new(|| {
    vec![
        ClassPattern::new(
            PatternClass::HgvsCanonical,
            format!(
                r"{}|(?:[A-Za-z][A-Za-z0-9_]*(?:\.[0-9]+)?:)?p\.{}",
                nucleotide_pattern(),
                one_letter_protein()
            ),
        ),
        ClassPattern::new(PatternClass::ProteinShorthand, one_letter_protein()),
        ClassPattern::new(
            PatternClass::ProteinSpelled,
            format!(r"(?:p\.)?{}", three_letter_protein()),
        ),
        ClassPattern::new(
            PatternClass::Ivs,
            r"IVS[1-9][0-9]*[+-][1-9][0-9]*[ACGT]>[ACGT]".to_string(),
        ),
        ClassPattern::new(PatternClass::Rsid, r"rs[1-9][0-9]*".to_string()),
    ]
});

fn left_boundary_ok(text: &str, byte_start: usize) -> bool {
    match text[..byte_start].chars().next_back() {
        None => true,
        Some(c) => !(c.is_alphanumeric() || matches!(c, '.' | ':' | '_' | '-' | '+' | '>' | '*')),
    }
}

fn right_boundary_ok(text: &str, byte_end: usize) -> bool {
    match text[byte_end..].chars().next() {
        None => true,
        Some(c) => !c.is_alphanumeric(),
    }
}

/// Byte offset to character offset table for one text.
struct CharIndex {
    starts: Vec<usize>,
}

impl CharIndex {
    fn new(text: &str) -> Self {
        CharIndex {
            starts: text.char_indices().map(|(b, _)| b).collect(),
        }
    }

    fn char_at(&self, byte: usize) -> usize {
        self.starts.partition_point(|&b| b < byte)
    }
}

fn candidates(text: &str, pattern: &ClassPattern) -> Vec<(usize, usize)> {
    let mut found = Vec::new();
    let mut from = 0;
    while let Some(m) = pattern.regex.find_at(text, from) {
        if left_boundary_ok(text, m.start()) && right_boundary_ok(text, m.end()) {
            found.push((m.start(), m.end()));
        }
        let step = text[m.start()..].chars().next().map_or(1, char::len_utf8);
        from = m.start() + step;
        if from > text.len() {
            break;
        }
    }
    found
}

/// Keeps the longest of each overlapping group, earlier start on ties.
fn resolve_overlaps(mut spans: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    spans.sort_by(|a, b| (b.1 - b.0).cmp(&(a.1 - a.0)).then(a.0.cmp(&b.0)));
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for span in spans {
        if kept.iter().all(|k| span.1 <= k.0 || k.1 <= span.0) {
            kept.push(span);
        }
    }
    kept.sort();
    kept
}

pub fn extract_mentions(doc: &Document) -> Vec<Mention> {
    extract_from_text(doc.pmid, &doc.combined_text())
}

pub(crate) fn extract_from_text(pmid: u64, text: &str) -> Vec<Mention> {
    let index = CharIndex::new(text);
    let mut mentions = Vec::new();
    for pattern in PATTERNS.iter() {
        for (bs, be) in resolve_overlaps(candidates(text, pattern)) {
            let surface = &text[bs..be];
            mentions.push(Mention {
                pmid,
                start: index.char_at(bs),
                end: index.char_at(be),
                surface: surface.to_string(),
                pattern_class: pattern.class,
                ast: parse_loose(surface, None).ok(),
            });
        }
    }
    mentions.sort_by(|a, b| {
        (a.start, a.end, a.pattern_class).cmp(&(b.start, b.end, b.pattern_class))
    });
    mentions
}

/// Class whose pattern matches the whole of `surface`, if any.
pub fn classify_surface(surface: &str) -> Option<PatternClass> {
    PATTERNS
        .iter()
        .find(|p| p.full.is_match(surface))
        .map(|p| p.class)
}

fn distance(m: &Mention, g: &GeneMention) -> usize {
    if g.end <= m.start {
        m.start - g.end
    } else {
        g.start.saturating_sub(m.end)
    }
}

/// Pairs each variant mention with the nearest gene mention. Equal distances
/// go to the gene that starts first.
pub fn attach_gene_context(
    mentions: Vec<Mention>,
    genes: &[GeneMention],
) -> Vec<(Mention, Option<String>)> {
    mentions
        .into_iter()
        .map(|m| {
            let gene = genes
                .iter()
                .min_by_key(|g| (distance(&m, g), g.start))
                .map(|g| g.gene_id.clone());
            (m, gene)
        })
        .collect()
}
