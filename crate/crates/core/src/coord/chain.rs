//! Offset-constant liftover chains.

use std::collections::BTreeMap;
use std::io::BufRead;

use super::{parse_u64, CoordError, TsvError};
use crate::hgvs::{Molecule, SequenceVariant, VariantAst};

/// Source interval `[src_start, src_end]` (1-based inclusive) mapped onto
/// `[dst_start, dst_start + (src_end - src_start)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainBlock {
    pub src_start: u64,
    pub src_end: u64,
    pub dst_start: u64,
}

impl ChainBlock {
    pub fn new(src_start: u64, src_end: u64, dst_start: u64) -> Self {
        ChainBlock {
            src_start,
            src_end,
            dst_start,
        }
    }

    pub fn dst_end(&self) -> u64 {
        self.dst_start + (self.src_end - self.src_start)
    }

    pub fn contains(&self, pos: u64) -> bool {
        self.src_start <= pos && pos <= self.src_end
    }

    pub fn map(&self, pos: u64) -> Option<u64> {
        self.contains(pos).then(|| self.dst_start + (pos - self.src_start))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("block {src_start}-{src_end} on {contig} is inverted")]
    Inverted {
        contig: String,
        src_start: u64,
        src_end: u64,
    },
    #[error("blocks on {contig} overlap at {position}")]
    Overlap { contig: String, position: u64 },
    #[error(transparent)]
    Format(#[from] TsvError),
}

/// Per-contig blocks, sorted and disjoint in source coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMap {
    contigs: BTreeMap<String, Vec<ChainBlock>>,
}

impl ChainMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks<I, S>(blocks: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (S, ChainBlock)>,
        S: Into<String>,
    {
        let mut contigs: BTreeMap<String, Vec<ChainBlock>> = BTreeMap::new();
        for (contig, block) in blocks {
            let contig = contig.into();
            if block.src_start == 0 || block.src_start > block.src_end {
                return Err(ChainError::Inverted {
                    contig,
                    src_start: block.src_start,
                    src_end: block.src_end,
                });
            }
            contigs.entry(contig).or_default().push(block);
        }
        for (contig, blocks) in &mut contigs {
            blocks.sort_by_key(|b| b.src_start);
            if let Some(w) = blocks.windows(2).find(|w| w[0].src_end >= w[1].src_start) {
                return Err(ChainError::Overlap {
                    contig: contig.clone(),
                    position: w[1].src_start,
                });
            }
        }
        Ok(ChainMap { contigs })
    }

    /// Reads `contig<TAB>src_start<TAB>src_end<TAB>dst_start` rows.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self, ChainError> {
        let mut blocks = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| TsvError::new(line_no, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(TsvError::new(
                    line_no,
                    format!("expected 4 tab-separated fields, found {}", fields.len()),
                )
                .into());
            }
            blocks.push((
                fields[0].to_string(),
                ChainBlock::new(
                    parse_u64(fields[1], line_no, "src_start")?,
                    parse_u64(fields[2], line_no, "src_end")?,
                    parse_u64(fields[3], line_no, "dst_start")?,
                ),
            ));
        }
        Self::from_blocks(blocks)
    }

    pub fn covers_contig(&self, contig: &str) -> bool {
        self.contigs.contains_key(contig)
    }

    pub fn blocks(&self, contig: &str) -> &[ChainBlock] {
        self.contigs.get(contig).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn block_for(&self, contig: &str, pos: u64) -> Option<&ChainBlock> {
        let blocks = self.blocks(contig);
        let idx = blocks.partition_point(|b| b.src_end < pos);
        blocks.get(idx).filter(|b| b.contains(pos))
    }

    pub fn map_position(&self, contig: &str, pos: u64) -> Option<u64> {
        self.block_for(contig, pos).and_then(|b| b.map(pos))
    }
}

/// Lifts a genomic variant to the chain's destination assembly. Both ends of
/// a range must fall in the same block; alleles are unchanged.
pub fn liftover(ast: &VariantAst, chain: &ChainMap) -> Result<VariantAst, CoordError> {
    let v = ast.as_sequence().ok_or(CoordError::NoCoordinates)?;
    if v.molecule != Molecule::G {
        return Err(CoordError::WrongMolecule {
            expected: Molecule::G,
            found: v.molecule,
        });
    }
    let contig = v.reference_accession.as_deref().ok_or(CoordError::MissingContig)?;
    let unmapped = |position| CoordError::UnmappedRegion {
        contig: contig.to_string(),
        position,
    };
    let block = chain
        .block_for(contig, v.position.start)
        .ok_or_else(|| unmapped(v.position.start))?;
    let mut position = v.position.clone();
    position.start = block.map(v.position.start).ok_or_else(|| unmapped(v.position.start))?;
    if let Some(end) = v.position.end {
        position.end = Some(block.map(end).ok_or_else(|| unmapped(end))?);
    }
    Ok(VariantAst::Sequence(SequenceVariant {
        position,
        ..v.clone()
    }))
}
