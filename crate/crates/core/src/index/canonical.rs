//! Reduction of a parsed variant to the index keys it should be found under.

use std::collections::BTreeSet;

use crate::coord::{c_to_g, c_to_p, g_to_c, liftover, r_to_c, ChainMap, CoordError, TranscriptModel, TranscriptSet};
use crate::gene::{GeneDictionary, SpeciesGate, HUMAN_TAXON};
use crate::hgvs::{format_with, FormatOptions, Molecule, SequenceVariant, VariantAst};

use super::key::{CanonicalKey, KeyMolecule};

/// Reference data shared by indexing and querying.
#[derive(Debug, Clone)]
pub struct Resources {
    pub genes: GeneDictionary,
    pub transcripts: TranscriptSet,
    /// Lifts genomic keys to the target assembly. Contigs the chain does not
    /// cover are taken to be identical in both assemblies.
    pub chains: Option<ChainMap>,
    pub species: SpeciesGate,
}

impl Resources {
    pub fn new(genes: GeneDictionary, transcripts: TranscriptSet, chains: Option<ChainMap>, species: SpeciesGate) -> Self {
        Resources {
            genes,
            transcripts,
            chains,
            species,
        }
    }

    /// Taxon for keys whose gene is unknown or not in the dictionary.
    pub fn default_taxon(&self) -> u32 {
        let allowed = self.species.allowed();
        if allowed.contains(&HUMAN_TAXON) {
            HUMAN_TAXON
        } else {
            allowed.iter().next().copied().unwrap_or(HUMAN_TAXON)
        }
    }

    pub fn taxon_for(&self, gene_id: Option<&str>) -> u32 {
        gene_id
            .and_then(|g| self.genes.taxon_of(g))
            .unwrap_or_else(|| self.default_taxon())
    }

    /// Transcript a coding mention is read against: the named accession when
    /// known, else the gene's default transcript.
    pub fn transcript_for(&self, accession: Option<&str>, gene_id: Option<&str>) -> Option<&TranscriptModel> {
        accession
            .and_then(|a| self.transcripts.get(a))
            .or_else(|| gene_id.and_then(|g| self.transcripts.default_for_gene(g)))
    }

    /// Gene identifier for a user- or text-supplied name: the dictionary
    /// entry when the name is a synonym, else the text itself.
    pub fn resolve_gene(&self, text: &str) -> String {
        let text = text.trim();
        self.genes
            .normalize(text)
            .map(str::to_string)
            .unwrap_or_else(|| text.to_string())
    }
}

const BARE: FormatOptions = FormatOptions {
    protein_style: crate::hgvs::ProteinStyle::OneLetter,
    omit_prefix: true,
    omit_molecule: true,
};

fn bare(ast: &VariantAst) -> String {
    format_with(ast, BARE)
}

fn genomic_repr(ast: &VariantAst) -> String {
    match ast.as_sequence().and_then(|v| v.reference_accession.as_deref()) {
        Some(contig) => format!("{contig}:{}", bare(ast)),
        None => bare(ast),
    }
}

/// Every key derivable for `ast` in the context of `gene_id`. Levels that
/// cannot be derived are left out; the result is sorted and deduplicated.
pub fn canonicalize(ast: &VariantAst, gene_id: Option<&str>, res: &Resources) -> Vec<CanonicalKey> {
    let mut keys = BTreeSet::new();
    match ast {
        VariantAst::Rsid { number } => {
            keys.insert(CanonicalKey::new(
                res.taxon_for(gene_id),
                None,
                KeyMolecule::Rsid,
                format!("rs{number}"),
            ));
        }
        VariantAst::Sequence(v) => {
            let gene = gene_id
                .map(str::to_string)
                .or_else(|| v.gene_symbol.as_deref().map(|g| res.resolve_gene(g)))
                .or_else(|| {
                    v.reference_accession
                        .as_deref()
                        .and_then(|a| res.transcripts.get(a))
                        .map(|t| t.gene_id.clone())
                });
            let mut sink = KeySink {
                taxon: res.taxon_for(gene.as_deref()),
                gene: gene.as_deref(),
                keys: &mut keys,
            };
            sequence_keys(ast, v, &mut sink, res);
        }
    }
    keys.into_iter().collect()
}

struct KeySink<'a> {
    taxon: u32,
    gene: Option<&'a str>,
    keys: &'a mut BTreeSet<CanonicalKey>,
}

impl KeySink<'_> {
    fn push(&mut self, molecule: KeyMolecule, edit: String) {
        self.keys.insert(CanonicalKey::new(self.taxon, self.gene, molecule, edit));
    }

    fn genomic(&mut self, g: &VariantAst, res: &Resources) {
        let contig = g.as_sequence().and_then(|v| v.reference_accession.as_deref());
        let lifted = match (&res.chains, contig) {
            (Some(chain), Some(c)) if chain.covers_contig(c) => match liftover(g, chain) {
                Ok(l) => l,
                Err(_) => return,
            },
            _ => g.clone(),
        };
        self.push(KeyMolecule::G, genomic_repr(&lifted));
    }

    fn coding(&mut self, c: &VariantAst, transcript: Option<&TranscriptModel>, res: &Resources) {
        self.push(KeyMolecule::C, bare(c));
        let Some(t) = transcript else { return };
        if let Ok(g) = c_to_g(c, t) {
            self.genomic(&g, res);
        }
        if let Ok(p) = c_to_p(c, t) {
            self.push(KeyMolecule::P, bare(&p));
        }
    }
}

fn sequence_keys(ast: &VariantAst, v: &SequenceVariant, sink: &mut KeySink<'_>, res: &Resources) {
    let accession = v.reference_accession.as_deref();
    match v.molecule {
        Molecule::P => sink.push(KeyMolecule::P, bare(ast)),
        Molecule::C => {
            let t = res.transcript_for(accession, sink.gene);
            sink.coding(ast, t, res);
        }
        Molecule::R => {
            if let Ok(c) = r_to_c(ast) {
                let t = res.transcript_for(accession, sink.gene);
                sink.coding(&c, t, res);
            }
        }
        Molecule::G => {
            sink.genomic(ast, res);
            if let Some(t) = genomic_transcript(accession, sink.gene, res) {
                if let Ok(c) = g_to_c(ast, t) {
                    sink.coding(&c, Some(t), res);
                }
            }
        }
        Molecule::M => {
            let mut mito = v.clone();
            mito.molecule = Molecule::G;
            mito.reference_accession = Some(accession.unwrap_or("chrM").to_string());
            mito.gene_symbol = None;
            sink.genomic(&VariantAst::Sequence(mito), res);
        }
        Molecule::N => {}
    }
}

/// The gene's lowest-id transcript on the mention's contig.
fn genomic_transcript<'r>(accession: Option<&str>, gene: Option<&str>, res: &'r Resources) -> Option<&'r TranscriptModel> {
    let (contig, gene) = (accession?, gene?);
    res.transcripts.iter().find(|t| t.gene_id == gene && t.contig == contig)
}

/// Why no key could be derived, for ingest reports.
pub fn underivable_reason(ast: &VariantAst) -> String {
    match ast.molecule() {
        Some(Molecule::N) => "non-coding transcript descriptions are not indexed".into(),
        Some(Molecule::R) => CoordError::UnsupportedEdit(ast.edit_kind()).to_string(),
        _ => "no index key derivable".into(),
    }
}
