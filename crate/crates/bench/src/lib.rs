//! Workloads shared by the pipeline benchmarks.

use litvar_core::index::{LiteratureIndex, PubtatorRecord, Resources};
use litvar_core::test_support::{fixtures, VariantGenerator};

pub const SEED: u64 = 42;

/// Canonical descriptions spanning every molecule and edit kind.
pub fn descriptions(n: usize) -> Vec<String> {
    VariantGenerator::new(SEED).canonical_corpus(n)
}

/// The fixture corpus followed by `extra` generated documents.
pub fn corpus(extra: usize) -> Vec<PubtatorRecord> {
    let mut records = fixtures::corpus();
    records.extend(VariantGenerator::new(SEED).pubtator_corpus(extra, 100_000));
    records
}

pub fn index(records: &[PubtatorRecord], res: &Resources) -> LiteratureIndex {
    let mut index = LiteratureIndex::new();
    index.ingest(records, res);
    index
}
