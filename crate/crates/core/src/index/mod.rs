//! Literature index: PubTator ingestion, canonical keys, postings and
//! on-disk segments.

mod canonical;
mod key;
mod pubtator;
mod query;
mod segment;
mod store;

pub use canonical::{canonicalize, underivable_reason, Resources};
pub use key::{CanonicalKey, KeyMolecule, KeyParseError, UNKNOWN_GENE};
pub use pubtator::{ingest_pubtator, write_pubtator, Annotation, PubtatorError, PubtatorRecord};
pub use query::{lookup, query, resolve_query, EvidenceSpan, Hit, QueryError, QueryResponse};
pub use segment::{decode_segment, encode_segment, load_segment, save_segment, SegmentError, FORMAT_VERSION};
pub use store::{
    analyze_document, index_document, DocumentAnalysis, Evidence, EvidenceSource, IngestReport,
    LiteratureIndex, MentionFailure, Posting, PostingList, SharedIndex,
};
