use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crate::extract::{attach_gene_context, classify_surface, extract_mentions, Document, Mention, PatternClass};
use crate::gene::{extract_gene_mentions, GateDecision, GeneMention};
use crate::hgvs::{parse_loose, VariantAst};

use super::canonical::{canonicalize, underivable_reason, Resources};
use super::key::CanonicalKey;
use super::pubtator::{Annotation, PubtatorRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceSource {
    Extracted,
    Imported,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Evidence {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub pattern_class: Option<PatternClass>,
    pub source: EvidenceSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionFailure {
    pub pmid: u64,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub documents_seen: usize,
    pub documents_indexed: usize,
    pub documents_dropped: Vec<(u64, String)>,
    pub mentions: usize,
    pub gene_mentions: usize,
    pub keys_emitted: usize,
    pub failures: Vec<MentionFailure>,
}

impl IngestReport {
    pub fn merge(&mut self, other: IngestReport) {
        self.documents_seen += other.documents_seen;
        self.documents_indexed += other.documents_indexed;
        self.documents_dropped.extend(other.documents_dropped);
        self.mentions += other.mentions;
        self.gene_mentions += other.gene_mentions;
        self.keys_emitted += other.keys_emitted;
        self.failures.extend(other.failures);
    }
}

/// Postings contributed by one document, computed without touching an index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentAnalysis {
    pub pmid: u64,
    pub decision: GateDecision,
    pub postings: BTreeMap<CanonicalKey, Vec<Evidence>>,
    pub report: IngestReport,
}

struct Candidate {
    mention: Mention,
    source: EvidenceSource,
    norm_id: Option<String>,
}

/// Reads a tmVar-style (`c|SUB|A|76|T`), HGVS or `RS#:` normalized id.
fn parse_norm_id(norm: &str) -> Option<VariantAst> {
    norm.split([';', ',']).find_map(|part| {
        let part = part.trim();
        let part = part
            .strip_prefix("tmVar:")
            .or_else(|| part.strip_prefix("HGVS:"))
            .unwrap_or(part);
        if let Some(n) = part.strip_prefix("RS#:") {
            return parse_loose(&format!("rs{n}"), None).ok();
        }
        if part.contains('|') {
            return tmvar_to_hgvs(part).and_then(|t| parse_loose(&t, None).ok());
        }
        parse_loose(part, None).ok()
    })
}

fn tmvar_to_hgvs(norm: &str) -> Option<String> {
    let f: Vec<&str> = norm.split('|').collect();
    let field = |i: usize| f.get(i).copied().unwrap_or("");
    let (mol, kind, reference, pos, alt) = (field(0), field(1), field(2), field(3), field(4));
    let protein = mol == "p";
    Some(match (kind, protein) {
        ("SUB", false) => format!("{mol}.{pos}{reference}>{alt}"),
        ("SUB", true) => format!("p.{reference}{pos}{alt}"),
        ("DEL", false) => format!("{mol}.{pos}del{reference}"),
        ("DEL", true) => format!("p.{reference}{pos}del"),
        ("DUP", false) => format!("{mol}.{pos}dup{reference}"),
        ("DUP", true) => format!("p.{reference}{pos}dup"),
        ("INS", false) => format!("{mol}.{pos}ins{alt}"),
        ("INDEL", false) => format!("{mol}.{pos}delins{alt}"),
        ("FS", true) => match field(5) {
            "" => format!("p.{reference}{pos}{alt}fs"),
            stop => format!("p.{reference}{pos}{alt}fs*{stop}"),
        },
        _ => return None,
    })
}

fn imported_candidates(annotations: &[Annotation], res: &Resources) -> (Vec<Candidate>, Vec<GeneMention>) {
    let mut variants = Vec::new();
    let mut genes = Vec::new();
    for a in annotations {
        if a.is_gene() {
            let gene_id = res
                .genes
                .normalize(&a.surface)
                .map(str::to_string)
                .or_else(|| a.norm_id.clone());
            if let Some(gene_id) = gene_id {
                genes.push(GeneMention {
                    pmid: a.pmid,
                    start: a.start,
                    end: a.end,
                    surface: a.surface.clone(),
                    gene_id,
                });
            }
        } else if a.is_variant() {
            variants.push(Candidate {
                mention: Mention {
                    pmid: a.pmid,
                    start: a.start,
                    end: a.end,
                    surface: a.surface.clone(),
                    pattern_class: classify_surface(&a.surface).unwrap_or(PatternClass::HgvsCanonical),
                    ast: None,
                },
                source: EvidenceSource::Imported,
                norm_id: a.norm_id.clone(),
            });
        }
    }
    (variants, genes)
}

/// Runs extraction, gene tagging, pairing and canonicalization for one
/// document. Per-mention problems go to the report.
pub fn analyze_document(doc: &Document, annotations: &[Annotation], res: &Resources) -> DocumentAnalysis {
    let mut report = IngestReport {
        documents_seen: 1,
        ..IngestReport::default()
    };
    let decision = res.species.decide(doc);
    if let GateDecision::Drop { reason } = &decision {
        report.documents_dropped.push((doc.pmid, reason.clone()));
        return DocumentAnalysis {
            pmid: doc.pmid,
            decision,
            postings: BTreeMap::new(),
            report,
        };
    }
    report.documents_indexed = 1;

    let (imported, imported_genes) = imported_candidates(annotations, res);
    let mut genes = extract_gene_mentions(doc, &res.genes);
    for g in imported_genes {
        if !genes.iter().any(|e| e.start == g.start && e.end == g.end) {
            genes.push(g);
        }
    }
    genes.sort_by_key(|g| (g.start, g.end));
    report.gene_mentions = genes.len();

    let mut candidates: Vec<Candidate> = extract_mentions(doc)
        .into_iter()
        .map(|mention| Candidate {
            mention,
            source: EvidenceSource::Extracted,
            norm_id: None,
        })
        .collect();
    candidates.extend(imported);
    report.mentions = candidates.len();

    let (mentions, extra): (Vec<Mention>, Vec<(EvidenceSource, Option<String>)>) = candidates
        .into_iter()
        .map(|c| (c.mention, (c.source, c.norm_id)))
        .unzip();
    let paired = attach_gene_context(mentions, &genes);

    let mut postings: BTreeMap<CanonicalKey, Vec<Evidence>> = BTreeMap::new();
    for ((mention, gene), (source, norm_id)) in paired.into_iter().zip(extra) {
        let fail = |reason: String| MentionFailure {
            pmid: doc.pmid,
            start: mention.start,
            end: mention.end,
            surface: mention.surface.clone(),
            reason,
        };
        let context = gene.as_deref().and_then(|g| res.transcripts.default_for_gene(g));
        let ast = match &mention.ast {
            Some(ast) => Ok(ast.clone()),
            None => parse_loose(&mention.surface, context)
                .or_else(|e| norm_id.as_deref().and_then(parse_norm_id).ok_or(e)),
        };
        let ast = match ast {
            Ok(ast) => ast,
            Err(e) => {
                report.failures.push(fail(e.to_string()));
                continue;
            }
        };
        let keys = canonicalize(&ast, gene.as_deref(), res);
        if keys.is_empty() {
            report.failures.push(fail(underivable_reason(&ast)));
            continue;
        }
        let evidence = Evidence {
            start: mention.start,
            end: mention.end,
            surface: mention.surface.clone(),
            pattern_class: if source == EvidenceSource::Extracted {
                Some(mention.pattern_class)
            } else {
                classify_surface(&mention.surface)
            },
            source,
        };
        for key in keys {
            postings.entry(key).or_default().push(evidence.clone());
        }
    }
    for ev in postings.values_mut() {
        ev.sort();
        ev.dedup();
    }
    report.keys_emitted = postings.len();
    DocumentAnalysis {
        pmid: doc.pmid,
        decision,
        postings,
        report,
    }
}

pub type PostingList = BTreeMap<u64, Vec<Evidence>>;

/// Borrowed view of one key's postings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting<'a> {
    pub key: &'a CanonicalKey,
    pub evidence: &'a PostingList,
}

impl Posting<'_> {
    /// Strictly ascending.
    pub fn pmids(&self) -> impl Iterator<Item = u64> + '_ {
        self.evidence.keys().copied()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LiteratureIndex {
    /// Indexed documents and the keys each one contributed.
    docs: BTreeMap<u64, BTreeSet<CanonicalKey>>,
    postings: BTreeMap<CanonicalKey, PostingList>,
}

impl LiteratureIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn from_parts(doc_ids: BTreeSet<u64>, postings: BTreeMap<CanonicalKey, PostingList>) -> Self {
        let mut docs: BTreeMap<u64, BTreeSet<CanonicalKey>> =
            doc_ids.into_iter().map(|p| (p, BTreeSet::new())).collect();
        for (key, list) in &postings {
            for pmid in list.keys() {
                docs.entry(*pmid).or_default().insert(key.clone());
            }
        }
        LiteratureIndex { docs, postings }
    }

    pub fn document_count(&self) -> usize {
        self.docs.len()
    }

    pub fn key_count(&self) -> usize {
        self.postings.len()
    }

    pub fn documents(&self) -> impl Iterator<Item = u64> + '_ {
        self.docs.keys().copied()
    }

    pub fn contains_document(&self, pmid: u64) -> bool {
        self.docs.contains_key(&pmid)
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.postings.keys()
    }

    pub fn postings(&self) -> impl Iterator<Item = Posting<'_>> {
        self.postings
            .iter()
            .map(|(key, evidence)| Posting { key, evidence })
    }

    pub fn posting(&self, key: &CanonicalKey) -> Option<Posting<'_>> {
        self.postings
            .get_key_value(key)
            .map(|(key, evidence)| Posting { key, evidence })
    }

    pub fn remove_document(&mut self, pmid: u64) {
        let Some(keys) = self.docs.remove(&pmid) else { return };
        for key in keys {
            if let Some(list) = self.postings.get_mut(&key) {
                list.remove(&pmid);
                if list.is_empty() {
                    self.postings.remove(&key);
                }
            }
        }
    }

    /// Replaces everything previously recorded for the document.
    pub fn apply(&mut self, analysis: DocumentAnalysis) -> IngestReport {
        self.remove_document(analysis.pmid);
        if analysis.decision.is_keep() {
            let keys = analysis.postings.keys().cloned().collect();
            self.docs.insert(analysis.pmid, keys);
            for (key, evidence) in analysis.postings {
                self.postings.entry(key).or_default().insert(analysis.pmid, evidence);
            }
        }
        analysis.report
    }

    pub fn ingest(&mut self, records: &[PubtatorRecord], res: &Resources) -> IngestReport {
        let mut report = IngestReport::default();
        for r in records {
            report.merge(index_document(self, &r.document, &r.annotations, res));
        }
        report
    }
}

pub fn index_document(
    index: &mut LiteratureIndex,
    doc: &Document,
    annotations: &[Annotation],
    res: &Resources,
) -> IngestReport {
    index.apply(analyze_document(doc, annotations, res))
}

/// Single-writer, many-reader handle. Readers clone the current snapshot;
/// writers build the next one off to the side and swap it in.
#[derive(Debug, Default)]
pub struct SharedIndex {
    current: RwLock<Option<Arc<LiteratureIndex>>>,
    writer: Mutex<()>,
}

impl SharedIndex {
    /// A handle with no snapshot yet.
    pub fn loading() -> Self {
        Self::default()
    }

    pub fn new(index: LiteratureIndex) -> Self {
        let shared = Self::default();
        shared.publish(index);
        shared
    }

    pub fn snapshot(&self) -> Option<Arc<LiteratureIndex>> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn is_ready(&self) -> bool {
        self.snapshot().is_some()
    }

    pub fn publish(&self, index: LiteratureIndex) {
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Some(Arc::new(index));
    }

    /// Applies `f` to a copy of the current snapshot and publishes the result.
    pub fn update<R>(&self, f: impl FnOnce(&mut LiteratureIndex) -> R) -> R {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let mut next = self.snapshot().map(|s| (*s).clone()).unwrap_or_default();
        let out = f(&mut next);
        self.publish(next);
        out
    }
}
