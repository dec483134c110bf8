//! Coordinate mapping between molecular levels and genome assemblies.
//!
//! Transcript coordinates count exonic bases 5'→3' from 1. Coding (`c.`)
//! coordinates count from the first CDS base, so `c = t - cds_start + 1`.
//! Genomic coordinates are 1-based inclusive on the contig's forward strand.

mod chain;
mod codon;
mod mapping;

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::hgvs::{EditKind, Molecule};

pub use chain::{liftover, ChainBlock, ChainError, ChainMap};
pub use codon::{reverse_complement, translate, translate_codon};
pub use mapping::{c_to_g, c_to_p, g_to_c, r_to_c};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strand {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strand::Plus => "+",
            Strand::Minus => "-",
        })
    }
}

/// Genomic interval, 1-based inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exon {
    pub start: u64,
    pub end: u64,
}

impl Exon {
    pub fn new(start: u64, end: u64) -> Self {
        Exon { start, end }
    }

    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: u64) -> bool {
        self.start <= pos && pos <= self.end
    }
}

/// Exon layout and coding bounds of one transcript.
///
/// Construct with [`TranscriptModel::new`], which enforces that exons are
/// sorted and disjoint and that the CDS fits inside the exonic sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptModel {
    pub transcript_id: String,
    pub gene_id: String,
    pub contig: String,
    pub strand: Strand,
    /// Sorted by genomic start regardless of strand.
    pub exons: Vec<Exon>,
    pub cds_start: u64,
    pub cds_end: u64,
    pub cds_sequence: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranscriptError {
    #[error("transcript has no exons")]
    NoExons,
    #[error("exon {start}-{end} is empty or inverted")]
    BadExon { start: u64, end: u64 },
    #[error("exons overlap or are out of genomic order")]
    UnsortedExons,
    #[error("CDS {cds_start}..{cds_end} does not fit in {exonic} exonic bases")]
    BadCds {
        cds_start: u64,
        cds_end: u64,
        exonic: u64,
    },
    #[error("CDS sequence has {found} bases, bounds imply {expected}")]
    SequenceLength { expected: u64, found: u64 },
    #[error("CDS sequence contains non-ACGT base {0:?}")]
    SequenceAlphabet(char),
}

impl TranscriptModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        transcript_id: impl Into<String>,
        gene_id: impl Into<String>,
        contig: impl Into<String>,
        strand: Strand,
        exons: Vec<Exon>,
        cds_start: u64,
        cds_end: u64,
        cds_sequence: Option<String>,
    ) -> Result<Self, TranscriptError> {
        if exons.is_empty() {
            return Err(TranscriptError::NoExons);
        }
        for e in &exons {
            if e.start == 0 || e.start > e.end {
                return Err(TranscriptError::BadExon {
                    start: e.start,
                    end: e.end,
                });
            }
        }
        if exons.windows(2).any(|w| w[0].end >= w[1].start) {
            return Err(TranscriptError::UnsortedExons);
        }
        let exonic: u64 = exons.iter().map(Exon::len).sum();
        if cds_start == 0 || cds_start > cds_end || cds_end > exonic {
            return Err(TranscriptError::BadCds {
                cds_start,
                cds_end,
                exonic,
            });
        }
        let cds_sequence = cds_sequence.map(|s| s.to_ascii_uppercase());
        if let Some(seq) = &cds_sequence {
            let expected = cds_end - cds_start + 1;
            if seq.len() as u64 != expected {
                return Err(TranscriptError::SequenceLength {
                    expected,
                    found: seq.len() as u64,
                });
            }
            if let Some(bad) = seq.chars().find(|c| !matches!(c, 'A' | 'C' | 'G' | 'T')) {
                return Err(TranscriptError::SequenceAlphabet(bad));
            }
        }
        Ok(TranscriptModel {
            transcript_id: transcript_id.into(),
            gene_id: gene_id.into(),
            contig: contig.into(),
            strand,
            exons,
            cds_start,
            cds_end,
            cds_sequence,
        })
    }

    /// Exons in 5'→3' transcript order.
    pub fn exons_in_transcript_order(&self) -> Box<dyn Iterator<Item = &Exon> + '_> {
        match self.strand {
            Strand::Plus => Box::new(self.exons.iter()),
            Strand::Minus => Box::new(self.exons.iter().rev()),
        }
    }

    pub fn exon_lengths(&self) -> Vec<u64> {
        self.exons_in_transcript_order().map(Exon::len).collect()
    }

    pub fn transcript_len(&self) -> u64 {
        self.exons.iter().map(Exon::len).sum()
    }

    pub fn cds_len(&self) -> u64 {
        self.cds_end - self.cds_start + 1
    }

    pub fn transcript_to_coding(&self, tx: u64) -> Option<u64> {
        (self.cds_start..=self.cds_end)
            .contains(&tx)
            .then(|| tx - self.cds_start + 1)
    }

    pub fn coding_to_transcript(&self, c: u64) -> Option<u64> {
        (1..=self.cds_len()).contains(&c).then(|| c + self.cds_start - 1)
    }

    pub fn transcript_to_genome(&self, tx: u64) -> Option<u64> {
        if tx == 0 {
            return None;
        }
        let mut remaining = tx;
        for exon in self.exons_in_transcript_order() {
            if remaining <= exon.len() {
                return Some(match self.strand {
                    Strand::Plus => exon.start + remaining - 1,
                    Strand::Minus => exon.end - (remaining - 1),
                });
            }
            remaining -= exon.len();
        }
        None
    }

    pub fn genome_to_transcript(&self, g: u64) -> Option<u64> {
        let mut before = 0;
        for exon in self.exons_in_transcript_order() {
            if exon.contains(g) {
                return Some(
                    before
                        + match self.strand {
                            Strand::Plus => g - exon.start + 1,
                            Strand::Minus => exon.end - g + 1,
                        },
                );
            }
            before += exon.len();
        }
        None
    }
}

/// Failure to map a variant between levels or assemblies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordError {
    #[error("position {position} is outside transcript {transcript}")]
    OutOfTranscript { transcript: String, position: String },
    #[error("{0} edits cannot be mapped at this level")]
    UnsupportedEdit(EditKind),
    #[error("expected a {expected}. variant, found {found}.")]
    WrongMolecule { expected: Molecule, found: Molecule },
    #[error("reference {stated} at c.{position} disagrees with CDS base {actual}")]
    RefMismatch {
        position: u64,
        stated: String,
        actual: char,
    },
    #[error("transcript {0} carries no CDS sequence")]
    MissingSequence(String),
    #[error("codon {0} is incomplete")]
    IncompleteCodon(u64),
    #[error("genomic variant names contig {found}, transcript lies on {expected}")]
    ContigMismatch { expected: String, found: String },
    #[error("genomic variant does not name its contig")]
    MissingContig,
    #[error("{contig}:{position} is not covered by any chain block")]
    UnmappedRegion { contig: String, position: u64 },
    #[error("rsID variants have no coordinates")]
    NoCoordinates,
}

/// Malformed row in a resource TSV.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}

impl TsvError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        TsvError {
            line,
            message: message.into(),
        }
    }
}

/// Transcript models keyed by transcript id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranscriptSet {
    by_id: BTreeMap<String, TranscriptModel>,
}

impl TranscriptSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: TranscriptModel) -> Option<TranscriptModel> {
        self.by_id.insert(t.transcript_id.clone(), t)
    }

    pub fn get(&self, transcript_id: &str) -> Option<&TranscriptModel> {
        self.by_id.get(transcript_id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TranscriptModel> {
        self.by_id.values()
    }

    /// Transcripts of `gene_id`, ordered by transcript id.
    pub fn for_gene<'a>(&'a self, gene_id: &'a str) -> impl Iterator<Item = &'a TranscriptModel> {
        self.by_id.values().filter(move |t| t.gene_id == gene_id)
    }

    /// Transcript used for a gene when a mention names no accession: the
    /// lowest transcript id.
    pub fn default_for_gene(&self, gene_id: &str) -> Option<&TranscriptModel> {
        self.by_id.values().find(|t| t.gene_id == gene_id)
    }

    /// Reads `transcript_id, gene_id, contig, strand, exons, cds_start,
    /// cds_end, cds_sequence` rows. Exons are `start-end[,start-end...]`; a
    /// `-` sequence means none. Blank lines and `#` comments are skipped.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, TsvError> {
        let mut set = TranscriptSet::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| TsvError::new(line_no, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 8 {
                return Err(TsvError::new(
                    line_no,
                    format!("expected 8 tab-separated fields, found {}", fields.len()),
                ));
            }
            let strand = match fields[3] {
                "+" => Strand::Plus,
                "-" | "−" => Strand::Minus,
                other => return Err(TsvError::new(line_no, format!("bad strand {other:?}"))),
            };
            let exons = fields[4]
                .split(',')
                .map(|span| {
                    let (s, e) = span
                        .split_once('-')
                        .ok_or_else(|| TsvError::new(line_no, format!("bad exon {span:?}")))?;
                    Ok(Exon::new(
                        parse_u64(s, line_no, "exon start")?,
                        parse_u64(e, line_no, "exon end")?,
                    ))
                })
                .collect::<Result<Vec<_>, TsvError>>()?;
            let cds_start = parse_u64(fields[5], line_no, "cds_start")?;
            let cds_end = parse_u64(fields[6], line_no, "cds_end")?;
            let sequence = match fields[7] {
                "-" | "" => None,
                s => Some(s.to_string()),
            };
            let t = TranscriptModel::new(
                fields[0], fields[1], fields[2], strand, exons, cds_start, cds_end, sequence,
            )
            .map_err(|e| TsvError::new(line_no, e.to_string()))?;
            if set.insert(t).is_some() {
                return Err(TsvError::new(
                    line_no,
                    format!("duplicate transcript {}", fields[0]),
                ));
            }
        }
        Ok(set)
    }
}

pub(crate) fn parse_u64(s: &str, line: usize, what: &str) -> Result<u64, TsvError> {
    s.trim()
        .parse()
        .map_err(|_| TsvError::new(line, format!("bad {what} {s:?}")))
}
