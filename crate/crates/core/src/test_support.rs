//! Seeded generators for canonical variant corpora, fuzz inputs and
//! synthetic PubTator documents.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extract::Document;
use crate::hgvs::{format_canonical, Edit, EditKind, Molecule, PositionSpec, SequenceVariant, VariantAst};
use crate::index::PubtatorRecord;

const AMINO: &[u8] = b"ACDEFGHIKLMNPQRSTVWY";
const NUCLEOTIDE_KINDS: [EditKind; 6] = [
    EditKind::Substitution,
    EditKind::Deletion,
    EditKind::Duplication,
    EditKind::Insertion,
    EditKind::Delins,
    EditKind::Synonymous,
];
const PROTEIN_KINDS: [EditKind; 7] = [
    EditKind::Substitution,
    EditKind::Deletion,
    EditKind::Duplication,
    EditKind::Insertion,
    EditKind::Delins,
    EditKind::Frameshift,
    EditKind::Synonymous,
];

/// Every (molecule, edit kind) pair the grammar admits; `None` is rsid.
pub fn coverage_grid() -> Vec<Option<(Molecule, EditKind)>> {
    let mut grid = Vec::new();
    for mol in [Molecule::G, Molecule::C, Molecule::R, Molecule::M, Molecule::N] {
        grid.extend(NUCLEOTIDE_KINDS.iter().map(|k| Some((mol, *k))));
    }
    grid.extend(PROTEIN_KINDS.iter().map(|k| Some((Molecule::P, *k))));
    grid.push(None);
    grid
}

pub struct VariantGenerator {
    rng: ChaCha8Rng,
}

impl VariantGenerator {
    pub fn new(seed: u64) -> Self {
        VariantGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn base(&mut self, mol: Molecule) -> char {
        let alphabet: &[u8] = if mol.is_rna() { b"acgu" } else { b"ACGT" };
        *alphabet.choose(&mut self.rng).unwrap() as char
    }

    fn bases(&mut self, mol: Molecule) -> String {
        let n = self.rng.gen_range(1..=6);
        (0..n).map(|_| self.base(mol)).collect()
    }

    fn residue(&mut self) -> char {
        *AMINO.choose(&mut self.rng).unwrap() as char
    }

    fn residues(&mut self) -> String {
        let n = self.rng.gen_range(1..=4);
        (0..n).map(|_| self.residue()).collect()
    }

    fn offset(&mut self) -> Option<i64> {
        if self.rng.gen_bool(0.3) {
            let k = self.rng.gen_range(1..=200i64);
            Some(if self.rng.gen_bool(0.5) { k } else { -k })
        } else {
            None
        }
    }

    fn position(&mut self, mol: Molecule, range: bool) -> PositionSpec {
        let start = self.rng.gen_range(1..=100_000u64);
        let mut pos = PositionSpec::point(start);
        if range {
            pos.end = Some(start + self.rng.gen_range(1..=50));
        }
        if mol.allows_offsets() {
            pos.start_offset = self.offset();
            if range {
                pos.end_offset = self.offset();
            }
        }
        if mol.is_protein() {
            let end = range.then(|| self.residue());
            pos = pos.with_residues(self.residue(), end);
        }
        pos
    }

    fn accession(&mut self, mol: Molecule) -> (Option<String>, Option<String>) {
        let pool: &[&str] = match mol {
            Molecule::P => &["NP_000050.3", "NP_000121.2"],
            Molecule::G => &["NC_000013.11", "chrT"],
            Molecule::M => &["NC_012920.1"],
            _ => &["NM_000059.3", "NR_024540.1", "TOY1"],
        };
        match self.rng.gen_range(0..4) {
            0 | 1 => (None, None),
            2 => (Some(pool.choose(&mut self.rng).unwrap().to_string()), None),
            _ => {
                let gene = ["BRCA2", "F5", "TP53"].choose(&mut self.rng).unwrap().to_string();
                (Some(pool.choose(&mut self.rng).unwrap().to_string()), Some(gene))
            }
        }
    }

    /// A valid, normalized AST of the given shape.
    pub fn variant(&mut self, mol: Molecule, kind: EditKind) -> VariantAst {
        let protein = mol.is_protein();
        let range = match kind {
            EditKind::Insertion => true,
            EditKind::Substitution | EditKind::Frameshift | EditKind::Synonymous => false,
            _ => self.rng.gen_bool(0.5),
        };
        let position = self.position(mol, range);
        let maybe = |g: &mut Self, s: String| (!protein && g.rng.gen_bool(0.5)).then_some(s);
        let edit = match kind {
            EditKind::Substitution => {
                let (reference, mut alternate) = if protein {
                    (position.start_residue.unwrap(), self.residue())
                } else {
                    (self.base(mol), self.base(mol))
                };
                while alternate == reference {
                    alternate = if protein {
                        if self.rng.gen_bool(0.1) { '*' } else { self.residue() }
                    } else {
                        self.base(mol)
                    };
                }
                Edit::Substitution {
                    reference: reference.to_string(),
                    alternate: alternate.to_string(),
                }
            }
            EditKind::Deletion => {
                let s = self.bases(mol);
                Edit::Deletion { deleted: maybe(self, s) }
            }
            EditKind::Duplication => {
                let s = self.bases(mol);
                Edit::Duplication { duplicated: maybe(self, s) }
            }
            EditKind::Insertion => Edit::Insertion {
                inserted: if protein { self.residues() } else { self.bases(mol) },
            },
            EditKind::Delins => Edit::Delins {
                inserted: if protein { self.residues() } else { self.bases(mol) },
            },
            EditKind::Frameshift => Edit::Frameshift {
                alternate: self.rng.gen_bool(0.7).then(|| self.residue().to_string()),
                stop_after: self.rng.gen_bool(0.6).then(|| self.rng.gen_range(1..=300)),
            },
            EditKind::Synonymous => {
                let b = self.base(mol).to_string();
                Edit::Synonymous { reference: maybe(self, b) }
            }
            EditKind::Rsid => return self.rsid(),
        };
        let (reference_accession, gene_symbol) = self.accession(mol);
        VariantAst::Sequence(SequenceVariant {
            molecule: mol,
            reference_accession,
            gene_symbol,
            position,
            edit,
        })
    }

    pub fn rsid(&mut self) -> VariantAst {
        VariantAst::rsid(self.rng.gen_range(1..=999_999_999))
    }

    pub fn any_variant(&mut self) -> VariantAst {
        let grid = coverage_grid();
        match *grid.choose(&mut self.rng).unwrap() {
            Some((mol, kind)) => self.variant(mol, kind),
            None => self.rsid(),
        }
    }

    /// `n` canonical descriptions cycling through the whole coverage grid.
    pub fn canonical_corpus(&mut self, n: usize) -> Vec<String> {
        let grid = coverage_grid();
        (0..n)
            .map(|i| {
                let ast = match grid[i % grid.len()] {
                    Some((mol, kind)) => self.variant(mol, kind),
                    None => self.rsid(),
                };
                format_canonical(&ast)
            })
            .collect()
    }

    /// Arbitrary bytes, biased toward characters that occur in variant text.
    pub fn noise(&mut self, max_len: usize) -> Vec<u8> {
        const ALPHABET: &[u8] = b"cgpmnrsIVS.:_+-*>=()ACGTacgudelinsupfsTerXArgGln0123456789 |\t";
        let len = self.rng.gen_range(0..=max_len);
        (0..len)
            .map(|_| {
                if self.rng.gen_bool(0.5) {
                    *ALPHABET.choose(&mut self.rng).unwrap()
                } else {
                    self.rng.r#gen()
                }
            })
            .collect()
    }

    /// Documents that each mention a few generated variants next to a gene.
    pub fn pubtator_corpus(&mut self, docs: usize, first_pmid: u64) -> Vec<PubtatorRecord> {
        let genes = ["BRCA2", "F5", "TP53", "G1"];
        (0..docs as u64)
            .map(|i| {
                let gene = genes.choose(&mut self.rng).unwrap();
                let mut parts = Vec::new();
                for _ in 0..self.rng.gen_range(1..=4) {
                    let mol = *[Molecule::C, Molecule::P, Molecule::G].choose(&mut self.rng).unwrap();
                    let kind = if self.rng.gen_bool(0.7) { EditKind::Substitution } else { EditKind::Deletion };
                    let mut ast = self.variant(mol, kind);
                    if let VariantAst::Sequence(v) = &mut ast {
                        v.gene_symbol = None;
                        v.reference_accession = None;
                    }
                    parts.push(format_canonical(&ast));
                }
                PubtatorRecord {
                    document: Document::new(
                        first_pmid + i,
                        format!("{gene} variants in a clinical cohort"),
                        format!("Carriers of {} were identified in human subjects.", parts.join(" and ")),
                    ),
                    annotations: Vec::new(),
                }
            })
            .collect()
    }
}

/// Fixture files shipped with this crate.
pub mod fixtures {
    use std::collections::BTreeSet;
    use std::fs::File;
    use std::io::BufReader;
    use std::path::PathBuf;

    use crate::coord::{ChainMap, TranscriptSet};
    use crate::gene::{GeneDictionary, SpeciesGate};
    use crate::index::{ingest_pubtator, PubtatorRecord, Resources};

    pub fn path(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
    }

    fn open(name: &str) -> BufReader<File> {
        BufReader::new(File::open(path(name)).unwrap_or_else(|e| panic!("{name}: {e}")))
    }

    pub fn genes() -> GeneDictionary {
        GeneDictionary::from_tsv(open("genes.tsv")).unwrap()
    }

    pub fn transcripts() -> TranscriptSet {
        TranscriptSet::from_tsv(open("transcripts.tsv")).unwrap()
    }

    pub fn chains() -> ChainMap {
        ChainMap::from_tsv(open("chains.tsv")).unwrap()
    }

    pub fn two_block_chain() -> ChainMap {
        ChainMap::from_tsv(open("chain_two_block.tsv")).unwrap()
    }

    pub fn resources() -> Resources {
        Resources::new(
            genes(),
            transcripts(),
            Some(chains()),
            SpeciesGate::new(BTreeSet::from([9606])).unwrap(),
        )
    }

    pub fn corpus() -> Vec<PubtatorRecord> {
        ingest_pubtator(open("corpus.pubtator")).unwrap()
    }

    /// Labelled extraction corpus; each annotation's type is the expected
    /// pattern class.
    pub fn extraction_corpus() -> Vec<PubtatorRecord> {
        ingest_pubtator(open("extraction.pubtator")).unwrap()
    }

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct SurfaceGroup {
        pub name: String,
        pub gene: Option<String>,
        pub surfaces: Vec<String>,
    }

    /// Rows of `name<TAB>gene<TAB>surface`, grouped by name in file order.
    fn groups(name: &str) -> Vec<SurfaceGroup> {
        let text = std::fs::read_to_string(path(name)).unwrap();
        let mut out: Vec<SurfaceGroup> = Vec::new();
        for line in text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut f = line.splitn(3, '\t');
            let (class, gene, surface) = (f.next().unwrap(), f.next().unwrap(), f.next().unwrap());
            let gene = (gene != "-").then(|| gene.to_string());
            match out.last_mut() {
                Some(g) if g.name == class => g.surfaces.push(surface.to_string()),
                _ => out.push(SurfaceGroup {
                    name: class.to_string(),
                    gene,
                    surfaces: vec![surface.to_string()],
                }),
            }
        }
        out
    }

    pub fn equivalence_classes() -> Vec<SurfaceGroup> {
        groups("equivalence.tsv")
    }

    /// Query forms for each variant indexed from [`corpus`].
    pub fn corpus_queries() -> Vec<SurfaceGroup> {
        groups("corpus_queries.tsv")
    }
}
