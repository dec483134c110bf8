//! Binary segment file.
//!
//! All integers little-endian; strings are a `u32` byte length followed by
//! UTF-8 bytes.
//!
//! ```text
//! magic        4 bytes  "LVIX"
//! version      u32      FORMAT_VERSION
//! doc_count    u64
//! key_count    u64
//! pmids        doc_count x u64, ascending
//! keys         key_count x {
//!                key        string (rendered, ascending)
//!                pmid_count u32
//!                pmid_count x {
//!                  pmid     u64
//!                  ev_count u32
//!                  ev_count x { start u64, end u64, surface string,
//!                               class u8 (0 none, 1.. registry order),
//!                               source u8 (0 extracted, 1 imported) }
//!                }
//!              }
//! crc32        u32      over every preceding byte
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::extract::PatternClass;

use super::key::CanonicalKey;
use super::store::{Evidence, EvidenceSource, LiteratureIndex, PostingList};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"LVIX";

#[derive(Debug, thiserror::Error)]
pub enum SegmentError {
    #[error("segment i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("not an index segment")]
    BadMagic,
    #[error("unsupported segment format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("segment checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error("corrupt segment: {0}")]
    Corrupt(String),
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

fn class_code(c: Option<PatternClass>) -> u8 {
    match c {
        None => 0,
        Some(c) => 1 + PatternClass::ALL.iter().position(|x| *x == c).unwrap_or(0) as u8,
    }
}

pub fn encode_segment(index: &LiteratureIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(index.document_count() as u64).to_le_bytes());
    out.extend_from_slice(&(index.key_count() as u64).to_le_bytes());
    for pmid in index.documents() {
        out.extend_from_slice(&pmid.to_le_bytes());
    }
    for posting in index.postings() {
        put_str(&mut out, posting.key.render());
        out.extend_from_slice(&(posting.evidence.len() as u32).to_le_bytes());
        for (pmid, evidence) in posting.evidence {
            out.extend_from_slice(&pmid.to_le_bytes());
            out.extend_from_slice(&(evidence.len() as u32).to_le_bytes());
            for ev in evidence {
                out.extend_from_slice(&(ev.start as u64).to_le_bytes());
                out.extend_from_slice(&(ev.end as u64).to_le_bytes());
                put_str(&mut out, &ev.surface);
                out.push(class_code(ev.pattern_class));
                out.push(match ev.source {
                    EvidenceSource::Extracted => 0,
                    EvidenceSource::Imported => 1,
                });
            }
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SegmentError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| SegmentError::Corrupt(format!("unexpected end at byte {}", self.pos)))?;
        let bytes = &self.buf[self.pos..end];
        self.pos = end;
        Ok(bytes)
    }

    fn u8(&mut self) -> Result<u8, SegmentError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, SegmentError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, SegmentError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize, SegmentError> {
        usize::try_from(self.u64()?).map_err(|_| SegmentError::Corrupt("offset too large".into()))
    }

    fn string(&mut self) -> Result<String, SegmentError> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| SegmentError::Corrupt("invalid UTF-8".into()))
    }
}

pub fn decode_segment(bytes: &[u8]) -> Result<LiteratureIndex, SegmentError> {
    if bytes.len() >= 4 && &bytes[..4] != MAGIC {
        return Err(SegmentError::BadMagic);
    }
    if bytes.len() >= 8 {
        let found = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if found != FORMAT_VERSION {
            return Err(SegmentError::Version { found });
        }
    }
    if bytes.len() < 12 + 16 {
        return Err(SegmentError::Checksum);
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body) != u32::from_le_bytes(trailer.try_into().unwrap()) {
        return Err(SegmentError::Checksum);
    }
    let corrupt = |m: &str| SegmentError::Corrupt(m.to_string());
    let mut r = Reader { buf: body, pos: 8 };
    let doc_count = r.u64()?;
    let key_count = r.u64()?;
    let mut docs = BTreeSet::new();
    for _ in 0..doc_count {
        if !docs.insert(r.u64()?) {
            return Err(corrupt("duplicate document"));
        }
    }
    let mut postings: BTreeMap<CanonicalKey, PostingList> = BTreeMap::new();
    for _ in 0..key_count {
        let key = CanonicalKey::parse(&r.string()?).map_err(|e| SegmentError::Corrupt(e.to_string()))?;
        let mut list = PostingList::new();
        for _ in 0..r.u32()? {
            let pmid = r.u64()?;
            if !docs.contains(&pmid) {
                return Err(corrupt("posting for unlisted document"));
            }
            let mut evidence = Vec::new();
            for _ in 0..r.u32()? {
                let start = r.usize()?;
                let end = r.usize()?;
                let surface = r.string()?;
                let pattern_class = match r.u8()? {
                    0 => None,
                    n => Some(*PatternClass::ALL.get(n as usize - 1).ok_or_else(|| corrupt("unknown pattern class"))?),
                };
                let source = match r.u8()? {
                    0 => EvidenceSource::Extracted,
                    1 => EvidenceSource::Imported,
                    _ => return Err(corrupt("unknown evidence source")),
                };
                evidence.push(Evidence {
                    start,
                    end,
                    surface,
                    pattern_class,
                    source,
                });
            }
            if list.insert(pmid, evidence).is_some() {
                return Err(corrupt("duplicate pmid in posting"));
            }
        }
        if postings.insert(key, list).is_some() {
            return Err(corrupt("duplicate key"));
        }
    }
    if r.pos != body.len() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(LiteratureIndex::from_parts(docs, postings))
}

/// Writes to a temporary sibling and renames it into place.
pub fn save_segment(index: &LiteratureIndex, path: &Path) -> Result<(), SegmentError> {
    let tmp = path.with_extension("seg.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode_segment(index))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_segment(path: &Path) -> Result<LiteratureIndex, SegmentError> {
    decode_segment(&fs::read(path)?)
}
