//! Gene synonym dictionary, gene mention tagging and the species gate.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::extract::Document;

pub const HUMAN_TAXON: u32 = 9606;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneRecord {
    pub gene_id: String,
    pub primary_symbol: String,
    /// Always contains `primary_symbol`.
    pub synonyms: BTreeSet<String>,
    pub species_taxon: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneMention {
    pub pmid: u64,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub gene_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: synonym {synonym:?} already names {existing} in taxon {taxon}")]
    DuplicateSynonym {
        line: usize,
        synonym: String,
        taxon: u32,
        existing: String,
    },
}

fn fold(s: &str) -> String {
    s.trim().to_lowercase()
}

fn token_count(s: &str) -> usize {
    tokens(s).len()
}

fn words(s: &str) -> Vec<String> {
    tokens(s)
        .into_iter()
        .map(|(bs, be, _, _)| s[bs..be].to_string())
        .collect()
}

/// Maximal alphanumeric runs as (byte_start, byte_end, char_start, char_end).
fn tokens(text: &str) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut chars = 0;
    for (ci, (bi, c)) in text.char_indices().enumerate() {
        if c.is_alphanumeric() {
            current.get_or_insert((bi, ci));
        } else if let Some((bs, cs)) = current.take() {
            out.push((bs, bi, cs, ci));
        }
        chars = ci + 1;
    }
    if let Some((bs, cs)) = current {
        out.push((bs, text.len(), cs, chars));
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneDictionary {
    records: BTreeMap<String, GeneRecord>,
    /// folded synonym -> taxon -> gene_id
    lookup: BTreeMap<String, BTreeMap<u32, String>>,
    max_tokens: usize,
}

impl GeneDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &GeneRecord> {
        self.records.values()
    }

    pub fn record(&self, gene_id: &str) -> Option<&GeneRecord> {
        self.records.get(gene_id)
    }

    pub fn insert(&mut self, record: GeneRecord) -> Result<(), GeneError> {
        self.insert_at(record, 0)
    }

    fn insert_at(&mut self, mut record: GeneRecord, line: usize) -> Result<(), GeneError> {
        let format = |message: String| GeneError::Format { line, message };
        if record.gene_id.is_empty() || record.gene_id.contains(['|', '\t']) || record.gene_id == "*" {
            return Err(format(format!("invalid gene id {:?}", record.gene_id)));
        }
        if self.records.contains_key(&record.gene_id) {
            return Err(format(format!("gene id {} defined twice", record.gene_id)));
        }
        record.synonyms.insert(record.primary_symbol.clone());
        let folded: BTreeSet<String> = record.synonyms.iter().map(|s| fold(s)).collect();
        if folded.contains("") {
            return Err(format("empty synonym".into()));
        }
        for syn in &folded {
            if let Some(existing) = self.lookup.get(syn).and_then(|t| t.get(&record.species_taxon)) {
                return Err(GeneError::DuplicateSynonym {
                    line,
                    synonym: syn.clone(),
                    taxon: record.species_taxon,
                    existing: existing.clone(),
                });
            }
        }
        for syn in folded {
            self.max_tokens = self.max_tokens.max(token_count(&syn));
            self.lookup
                .entry(syn)
                .or_default()
                .insert(record.species_taxon, record.gene_id.clone());
        }
        self.records.insert(record.gene_id.clone(), record);
        Ok(())
    }

    /// Reads `gene_id<TAB>primary_symbol<TAB>syn|syn|...<TAB>taxon` rows.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, GeneError> {
        let mut dict = GeneDictionary::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let format = |message: String| GeneError::Format {
                line: line_no,
                message,
            };
            let line = line.map_err(|e| format(e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(format(format!(
                    "expected 4 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let primary = fields[1].trim();
            if primary.is_empty() {
                return Err(format("empty primary symbol".into()));
            }
            let species_taxon = fields[3]
                .trim()
                .parse()
                .map_err(|_| format(format!("invalid taxon {:?}", fields[3])))?;
            let synonyms = fields[2]
                .split('|')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            dict.insert_at(
                GeneRecord {
                    gene_id: fields[0].trim().to_string(),
                    primary_symbol: primary.to_string(),
                    synonyms,
                    species_taxon,
                },
                line_no,
            )?;
        }
        Ok(dict)
    }

    pub fn to_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for r in self.records.values() {
            let others: Vec<&str> = r
                .synonyms
                .iter()
                .filter(|s| **s != r.primary_symbol)
                .map(String::as_str)
                .collect();
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.gene_id,
                r.primary_symbol,
                others.join("|"),
                r.species_taxon
            )?;
        }
        Ok(())
    }

    /// Case-insensitive synonym lookup. When several species share the
    /// synonym, human wins, then the lowest taxon.
    pub fn normalize(&self, text: &str) -> Option<&str> {
        let by_taxon = self.lookup.get(&fold(text))?;
        by_taxon
            .get(&HUMAN_TAXON)
            .or_else(|| by_taxon.values().next())
            .map(String::as_str)
    }

    pub fn normalize_in(&self, text: &str, taxon: u32) -> Option<&str> {
        self.lookup
            .get(&fold(text))?
            .get(&taxon)
            .map(String::as_str)
    }

    pub fn taxon_of(&self, gene_id: &str) -> Option<u32> {
        self.records.get(gene_id).map(|r| r.species_taxon)
    }

    pub fn max_synonym_tokens(&self) -> usize {
        self.max_tokens
    }
}

pub fn load_gene_dictionary<R: BufRead>(reader: R) -> Result<GeneDictionary, GeneError> {
    GeneDictionary::from_tsv(reader)
}

pub fn normalize_gene<'d>(text: &str, dict: &'d GeneDictionary) -> Option<&'d str> {
    dict.normalize(text)
}

/// Token-aligned dictionary matches, longest first, left to right.
pub fn extract_gene_mentions(doc: &Document, dict: &GeneDictionary) -> Vec<GeneMention> {
    let text = doc.combined_text();
    let toks = tokens(&text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let longest = dict.max_synonym_tokens().min(toks.len() - i);
        let hit = (1..=longest).rev().find_map(|n| {
            let (bs, _, cs, _) = toks[i];
            let (_, be, _, ce) = toks[i + n - 1];
            let surface = &text[bs..be];
            dict.normalize(surface).map(|id| {
                let mention = GeneMention {
                    pmid: doc.pmid,
                    start: cs,
                    end: ce,
                    surface: surface.to_string(),
                    gene_id: id.to_string(),
                };
                (n, mention)
            })
        });
        match hit {
            Some((n, mention)) => {
                out.push(mention);
                i += n;
            }
            None => i += 1,
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum GateDecision {
    Keep,
    Drop { reason: String },
}

impl GateDecision {
    pub fn is_keep(&self) -> bool {
        matches!(self, GateDecision::Keep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("allowed taxa must not be empty")]
pub struct EmptyTaxa;

/// Keyword species detection with an allow list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesGate {
    /// keyword token sequence (folded) -> taxon
    keywords: BTreeMap<Vec<String>, u32>,
    allowed: BTreeSet<u32>,
}

const DEFAULT_KEYWORDS: [(&str, u32); 10] = [
    ("human", 9606),
    ("humans", 9606),
    ("homo sapiens", 9606),
    ("mouse", 10090),
    ("mice", 10090),
    ("murine", 10090),
    ("mus musculus", 10090),
    ("rat", 10116),
    ("rats", 10116),
    ("rattus norvegicus", 10116),
];

impl SpeciesGate {
    pub fn new(allowed: BTreeSet<u32>) -> Result<Self, EmptyTaxa> {
        if allowed.is_empty() {
            return Err(EmptyTaxa);
        }
        let mut gate = SpeciesGate {
            keywords: BTreeMap::new(),
            allowed,
        };
        for (phrase, taxon) in DEFAULT_KEYWORDS {
            gate.add_keyword(phrase, taxon);
        }
        Ok(gate)
    }

    pub fn human_only() -> Self {
        Self::new(BTreeSet::from([HUMAN_TAXON])).unwrap()
    }

    pub fn add_keyword(&mut self, phrase: &str, taxon: u32) {
        let key = words(&fold(phrase));
        if !key.is_empty() {
            self.keywords.insert(key, taxon);
        }
    }

    pub fn allowed(&self) -> &BTreeSet<u32> {
        &self.allowed
    }

    /// Taxa named anywhere in `text`.
    pub fn detect(&self, text: &str) -> BTreeSet<u32> {
        let words = words(&text.to_lowercase());
        let longest = self.keywords.keys().map(Vec::len).max().unwrap_or(0);
        let mut found = BTreeSet::new();
        for i in 0..words.len() {
            for n in 1..=longest.min(words.len() - i) {
                if let Some(&taxon) = self.keywords.get(&words[i..i + n]) {
                    found.insert(taxon);
                }
            }
        }
        found
    }

    pub fn decide(&self, doc: &Document) -> GateDecision {
        let found = self.detect(&doc.combined_text());
        if found.is_empty() || found.iter().any(|t| self.allowed.contains(t)) {
            GateDecision::Keep
        } else {
            let taxa: Vec<String> = found.iter().map(u32::to_string).collect();
            GateDecision::Drop {
                reason: format!("only non-allowed species mentioned (taxon {})", taxa.join(", ")),
            }
        }
    }
}

pub fn species_gate(doc: &Document, allowed_taxa: &BTreeSet<u32>) -> GateDecision {
    match SpeciesGate::new(allowed_taxa.clone()) {
        Ok(gate) => gate.decide(doc),
        Err(_) => SpeciesGate::human_only().decide(doc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "# id\tsymbol\tsynonyms\ttaxon\n\
HGNC:1101\tBRCA2\tFANCD1|BRCC2\t9606\n\
HGNC:3542\tF5\tfactor V|FVL\t9606\n\
MGI:109337\tBrca2\tFancd1\t10090\n";

    fn dict() -> GeneDictionary {
        GeneDictionary::from_tsv(FIXTURE.as_bytes()).unwrap()
    }

    #[test]
    fn lookups() {
        let d = dict();
        assert_eq!(normalize_gene("fancd1", &d), Some("HGNC:1101"));
        assert_eq!(normalize_gene("BRCA2", &d), Some("HGNC:1101"));
        assert_eq!(normalize_gene("brca2", &d), Some("HGNC:1101"));
        assert_eq!(d.normalize_in("brca2", 10090), Some("MGI:109337"));
        assert_eq!(normalize_gene("NOTAGENE", &d), None);
        assert!(GeneDictionary::from_tsv("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = "A:1\tABC\t\t9606\nA:2\tXYZ\tabc\t9606\n";
        assert!(matches!(
            GeneDictionary::from_tsv(dup.as_bytes()),
            Err(GeneError::DuplicateSynonym { line: 2, .. })
        ));
        let bad = "A:1\tABC\t\t9606\nA:2\tXYZ\n";
        assert!(matches!(
            GeneDictionary::from_tsv(bad.as_bytes()),
            Err(GeneError::Format { line: 2, .. })
        ));
    }

    #[test]
    fn tsv_round_trip() {
        let d = dict();
        let mut out = Vec::new();
        d.to_tsv(&mut out).unwrap();
        assert_eq!(GeneDictionary::from_tsv(out.as_slice()).unwrap(), d);
    }

    #[test]
    fn mentions_respect_word_boundaries() {
        let d = dict();
        let doc = Document::new(1001, "BRCA2 c.76A>T in breast cancer", "We report a rare variant.");
        let m = extract_gene_mentions(&doc, &d);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].start, m[0].end, m[0].gene_id.as_str()), (0, 5, "HGNC:1101"));
        assert!(extract_gene_mentions(&Document::new(1, "ABRCA2X", ""), &d).is_empty());
        assert_eq!(extract_gene_mentions(&Document::new(1, "BRCA2 and BRCA2", ""), &d).len(), 2);
        let multi = extract_gene_mentions(&Document::new(1, "the Factor V Leiden allele", ""), &d);
        assert_eq!(multi[0].surface, "Factor V");
        assert_eq!((multi[0].start, multi[0].end), (4, 12));
    }

    #[test]
    fn species_gate_rules() {
        let human = BTreeSet::from([9606]);
        let doc = |t: &str| Document::new(1, t, "");
        assert!(!species_gate(&doc("in murine models"), &human).is_keep());
        assert!(species_gate(&doc("no species words"), &human).is_keep());
        assert!(species_gate(&doc("human and mouse cells"), &human).is_keep());
        assert!(!species_gate(&doc("Rattus norvegicus"), &human).is_keep());
        assert!(species_gate(&doc("murine"), &BTreeSet::from([10090])).is_keep());
        assert!(SpeciesGate::new(BTreeSet::new()).is_err());
    }
}
