use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::hgvs::parse_loose;

use super::canonical::{canonicalize, Resources};
use super::key::{CanonicalKey, KeyParseError};
use super::store::LiteratureIndex;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EvidenceSpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub pmid: u64,
    pub evidence: Vec<EvidenceSpan>,
}

/// Shared by the CLI's JSON output and the HTTP API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub variant: String,
    pub gene: Option<String>,
    pub keys: Vec<String>,
    pub hits: Vec<Hit>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("empty variant")]
    Empty,
    #[error("cannot parse {input:?}: {message}")]
    Parse { input: String, message: String },
    #[error(transparent)]
    Key(#[from] KeyParseError),
}

/// Keys consulted for a query and the resolved gene. Input containing `|`
/// is read as a rendered key; anything else as a variant description.
pub fn resolve_query(
    variant: &str,
    gene: Option<&str>,
    res: &Resources,
) -> Result<(Vec<CanonicalKey>, Option<String>), QueryError> {
    let variant = variant.trim();
    if variant.is_empty() {
        return Err(QueryError::Empty);
    }
    if variant.contains('|') {
        let key = CanonicalKey::parse(variant)?;
        let gene = key.gene_id().map(str::to_string);
        return Ok((vec![key], gene));
    }
    let gene = gene
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(|g| res.resolve_gene(g));
    let context = gene.as_deref().and_then(|g| res.transcripts.default_for_gene(g));
    let ast = parse_loose(variant, context).map_err(|e| QueryError::Parse {
        input: variant.to_string(),
        message: e.to_string(),
    })?;
    Ok((canonicalize(&ast, gene.as_deref(), res), gene))
}

/// Union of postings for `keys`, pmids ascending, evidence deduplicated on
/// span and surface.
pub fn lookup(index: &LiteratureIndex, keys: &[CanonicalKey]) -> Vec<Hit> {
    let mut merged: BTreeMap<u64, BTreeSet<EvidenceSpan>> = BTreeMap::new();
    for key in keys {
        let Some(posting) = index.posting(key) else { continue };
        for (pmid, evidence) in posting.evidence {
            merged.entry(*pmid).or_default().extend(evidence.iter().map(|e| EvidenceSpan {
                start: e.start,
                end: e.end,
                surface: e.surface.clone(),
            }));
        }
    }
    merged
        .into_iter()
        .map(|(pmid, evidence)| Hit {
            pmid,
            evidence: evidence.into_iter().collect(),
        })
        .collect()
}

pub fn query(
    index: &LiteratureIndex,
    variant: &str,
    gene: Option<&str>,
    res: &Resources,
) -> Result<QueryResponse, QueryError> {
    let (keys, gene) = resolve_query(variant, gene, res)?;
    Ok(QueryResponse {
        variant: variant.trim().to_string(),
        gene,
        hits: lookup(index, &keys),
        keys: keys.iter().map(|k| k.render().to_string()).collect(),
    })
}
