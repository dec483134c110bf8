//! Variant literature indexing: HGVS parsing and normalization, mention
//! extraction, gene normalization, coordinate mapping and a persistent
//! variant-to-article index.

pub mod coord;
pub mod extract;
pub mod gene;
pub mod hgvs;
pub mod index;
#[cfg(any(test, feature = "test-support"))]
pub mod test_support;

pub use coord::{
    c_to_g, c_to_p, g_to_c, liftover, r_to_c, ChainBlock, ChainMap, CoordError, Exon, Strand, TranscriptModel,
    TranscriptSet,
};
pub use extract::{attach_gene_context, extract_mentions, list_pattern_classes, Document, Mention, PatternClass};
pub use gene::{
    extract_gene_mentions, load_gene_dictionary, normalize_gene, species_gate, GateDecision, GeneDictionary,
    GeneMention, GeneRecord, SpeciesGate,
};
pub use hgvs::{
    format_canonical, normalize_ast, parse_canonical, parse_loose, Edit, EditKind, LooseError, Molecule,
    ParseError, PositionSpec, SequenceVariant, VariantAst,
};
pub use index::{
    canonicalize, ingest_pubtator, load_segment, query, save_segment, CanonicalKey, LiteratureIndex,
    QueryError, QueryResponse, Resources, SharedIndex,
};
