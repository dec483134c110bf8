//! PubTator corpus reader and writer.
//!
//! ```text
//! PMID|t|title
//! PMID|a|abstract
//! PMID<TAB>start<TAB>end<TAB>surface<TAB>type<TAB>norm_id
//! <blank line>
//! ```
//!
//! Offsets are 0-based character offsets into `title + " " + abstract`.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::extract::Document;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub pmid: u64,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub entity_type: String,
    pub norm_id: Option<String>,
}

impl Annotation {
    pub fn is_gene(&self) -> bool {
        self.entity_type.eq_ignore_ascii_case("gene")
    }

    pub fn is_variant(&self) -> bool {
        const VARIANT_TYPES: [&str; 8] = [
            "mutation",
            "dnamutation",
            "proteinmutation",
            "snp",
            "variant",
            "dnaallele",
            "proteinallele",
            "acidchange",
        ];
        let t = self.entity_type.to_ascii_lowercase();
        VARIANT_TYPES.contains(&t.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubtatorRecord {
    pub document: Document,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PubtatorError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(
        "line {line}: annotation {start}-{end} of {pmid} reads {expected:?} but the text there is {found:?}"
    )]
    SpanMismatch {
        line: usize,
        pmid: u64,
        start: usize,
        end: usize,
        expected: String,
        found: String,
    },
}

impl PubtatorError {
    pub fn line(&self) -> usize {
        match self {
            PubtatorError::Format { line, .. } | PubtatorError::SpanMismatch { line, .. } => *line,
        }
    }
}

fn format_err(line: usize, message: impl Into<String>) -> PubtatorError {
    PubtatorError::Format {
        line,
        message: message.into(),
    }
}

fn parse_pmid(s: &str, line: usize) -> Result<u64, PubtatorError> {
    match s.parse::<u64>() {
        Ok(p) if p >= 1 && !s.starts_with('+') => Ok(p),
        _ => Err(format_err(line, format!("invalid PMID {s:?}"))),
    }
}

/// Splits `PMID|<tag>|text`.
fn text_line<'a>(line: &'a str, tag: &str, line_no: usize) -> Result<(u64, &'a str), PubtatorError> {
    let mut parts = line.splitn(3, '|');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(pmid), Some(t), Some(text)) if t == tag => Ok((parse_pmid(pmid, line_no)?, text)),
        _ => Err(format_err(line_no, format!("expected `PMID|{tag}|text` line"))),
    }
}

fn annotation_line(
    line: &str,
    line_no: usize,
    doc: &Document,
    chars: &[char],
) -> Result<Annotation, PubtatorError> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 6 {
        return Err(format_err(
            line_no,
            format!("expected 6 tab-separated annotation fields, found {}", fields.len()),
        ));
    }
    let pmid = parse_pmid(fields[0], line_no)?;
    if pmid != doc.pmid {
        return Err(format_err(
            line_no,
            format!("annotation PMID {pmid} inside document {}", doc.pmid),
        ));
    }
    let offset = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| format_err(line_no, format!("invalid {what} offset {s:?}")))
    };
    let start = offset(fields[1], "start")?;
    let end = offset(fields[2], "end")?;
    if start >= end || end > chars.len() {
        return Err(format_err(
            line_no,
            format!("span {start}-{end} outside text of length {}", chars.len()),
        ));
    }
    let found: String = chars[start..end].iter().collect();
    if found != fields[3] {
        return Err(PubtatorError::SpanMismatch {
            line: line_no,
            pmid,
            start,
            end,
            expected: fields[3].to_string(),
            found,
        });
    }
    Ok(Annotation {
        pmid,
        start,
        end,
        surface: fields[3].to_string(),
        entity_type: fields[4].to_string(),
        norm_id: (fields[5] != "-" && !fields[5].is_empty()).then(|| fields[5].to_string()),
    })
}

pub fn ingest_pubtator<R: BufRead>(reader: R) -> Result<Vec<PubtatorRecord>, PubtatorError> {
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    let mut lines = reader.lines().enumerate().map(|(i, l)| {
        l.map(|l| (i + 1, l.trim_end_matches('\r').to_string()))
            .map_err(|e| format_err(i + 1, e.to_string()))
    });
    while let Some(next) = lines.next() {
        let (line_no, line) = next?;
        if line.is_empty() {
            continue;
        }
        let (pmid, title) = text_line(&line, "t", line_no)?;
        if !seen.insert(pmid) {
            return Err(format_err(line_no, format!("PMID {pmid} appears twice")));
        }
        let (abs_no, abs_line) = lines
            .next()
            .transpose()?
            .ok_or_else(|| format_err(line_no + 1, "missing abstract line"))?;
        let (abs_pmid, abstract_text) = text_line(&abs_line, "a", abs_no)?;
        if abs_pmid != pmid {
            return Err(format_err(
                abs_no,
                format!("abstract PMID {abs_pmid} does not match title PMID {pmid}"),
            ));
        }
        let document = Document::new(pmid, title, abstract_text);
        let chars: Vec<char> = document.combined_text().chars().collect();
        let mut annotations = Vec::new();
        for next in lines.by_ref() {
            let (ann_no, ann) = next?;
            if ann.is_empty() {
                break;
            }
            annotations.push(annotation_line(&ann, ann_no, &document, &chars)?);
        }
        records.push(PubtatorRecord {
            document,
            annotations,
        });
    }
    Ok(records)
}

pub fn write_pubtator<W: Write>(records: &[PubtatorRecord], mut out: W) -> io::Result<()> {
    for r in records {
        let d = &r.document;
        writeln!(out, "{}|t|{}", d.pmid, d.title)?;
        writeln!(out, "{}|a|{}", d.pmid, d.abstract_text)?;
        for a in &r.annotations {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                a.pmid,
                a.start,
                a.end,
                a.surface,
                a.entity_type,
                a.norm_id.as_deref().unwrap_or("-")
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
