//! `ingest` and `query` subcommands.

use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use litvar_core::index::{
    ingest_pubtator, load_segment, query, save_segment, IngestReport, LiteratureIndex, PubtatorError, QueryError,
    QueryResponse, Resources, SegmentError,
};

use crate::config::Config;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: PubtatorError },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("{}: {source}", path.display())]
    Segment { path: PathBuf, source: SegmentError },
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format { .. } => 2,
            CliError::Query(_) => 3,
            CliError::Segment { .. } | CliError::Other(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Loads the index segment, or an empty index if none has been written.
pub fn open_index(path: &Path) -> Result<LiteratureIndex, CliError> {
    if !path.exists() {
        return Ok(LiteratureIndex::new());
    }
    load_segment(path).map_err(|source| CliError::Segment {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `corpus`, merges it into the on-disk index under an exclusive lock
/// on the index directory, and writes the segment back.
pub fn cmd_ingest(corpus: &Path, config: &Config, res: &Resources) -> Result<IngestReport, CliError> {
    let file = File::open(corpus).map_err(|e| anyhow::anyhow!("{}: {e}", corpus.display()))?;
    let records = ingest_pubtator(BufReader::new(file)).map_err(|source| CliError::Format {
        path: corpus.to_path_buf(),
        source,
    })?;
    std::fs::create_dir_all(&config.index_dir)
        .map_err(|e| anyhow::anyhow!("{}: {e}", config.index_dir.display()))?;
    let lock = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(config.lock_path())
        .map_err(|e| anyhow::anyhow!("{}: {e}", config.lock_path().display()))?;
    lock.lock().map_err(|e| anyhow::anyhow!("locking index: {e}"))?;
    let segment = config.segment_path();
    let mut index = open_index(&segment)?;
    let report = index.ingest(&records, res);
    save_segment(&index, &segment).map_err(|source| CliError::Segment { path: segment, source })?;
    Ok(report)
}

pub fn cmd_query(
    variant: &str,
    gene: Option<&str>,
    config: &Config,
    res: &Resources,
) -> Result<QueryResponse, CliError> {
    let index = open_index(&config.segment_path())?;
    Ok(query(&index, variant, gene, res)?)
}

/// One `PMID<TAB>surface<TAB>start-end` line per evidence span.
pub fn render_hits(response: &QueryResponse) -> String {
    let mut out = String::new();
    for hit in &response.hits {
        for e in &hit.evidence {
            let _ = writeln!(out, "{}\t{}\t{}-{}", hit.pmid, e.surface, e.start, e.end);
        }
    }
    out
}

pub fn render_report(report: &IngestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "documents\t{}", report.documents_seen);
    let _ = writeln!(out, "indexed\t{}", report.documents_indexed);
    let _ = writeln!(out, "dropped\t{}", report.documents_dropped.len());
    let _ = writeln!(out, "mentions\t{}", report.mentions);
    let _ = writeln!(out, "gene_mentions\t{}", report.gene_mentions);
    let _ = writeln!(out, "keys\t{}", report.keys_emitted);
    let _ = writeln!(out, "failures\t{}", report.failures.len());
    for (pmid, reason) in &report.documents_dropped {
        let _ = writeln!(out, "dropped\t{pmid}\t{reason}");
    }
    for f in &report.failures {
        let _ = writeln!(out, "failure\t{}\t{}\t{}-{}\t{}", f.pmid, f.surface, f.start, f.end, f.reason);
    }
    out
}
