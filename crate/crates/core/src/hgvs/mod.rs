//! Variant descriptions: the AST, the canonical and loose parsers, and the
//! canonical formatter.
//!
//! Every parser in this module returns normalized ASTs, so two surface forms
//! of the same change compare equal after parsing.

mod amino;
mod format;
mod loose;
mod normalize;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use amino::{is_one_letter, one_letter_to_three, three_letter_to_one};
pub use format::{format_canonical, format_with, FormatOptions, ProteinStyle};
pub use loose::{clean_surface, parse_loose, LooseError, LOOSE_FORMS};
pub use normalize::normalize_ast;
pub use parse::{parse_canonical, ParseError};

/// Molecule prefix of an HGVS description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Molecule {
    G,
    C,
    R,
    P,
    M,
    N,
}

impl Molecule {
    pub fn prefix(self) -> char {
        match self {
            Molecule::G => 'g',
            Molecule::C => 'c',
            Molecule::R => 'r',
            Molecule::P => 'p',
            Molecule::M => 'm',
            Molecule::N => 'n',
        }
    }

    pub fn from_prefix(c: u8) -> Option<Self> {
        Some(match c {
            b'g' => Molecule::G,
            b'c' => Molecule::C,
            b'r' => Molecule::R,
            b'p' => Molecule::P,
            b'm' => Molecule::M,
            b'n' => Molecule::N,
            _ => return None,
        })
    }

    /// Intronic `+n`/`-n` offsets are only meaningful on transcript coordinates.
    pub fn allows_offsets(self) -> bool {
        matches!(self, Molecule::C | Molecule::N | Molecule::R)
    }

    pub fn is_protein(self) -> bool {
        self == Molecule::P
    }

    pub fn is_rna(self) -> bool {
        self == Molecule::R
    }
}

impl fmt::Display for Molecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix())
    }
}

/// Location of an edit.
///
/// `end` is present exactly when the edit spans a range. Offsets are the
/// intronic `+n`/`-n` distances from an exon edge and are never zero.
/// For protein descriptions every endpoint also names its residue
/// (`start_residue`, `end_residue`), in one-letter code with `*` for stop.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PositionSpec {
    pub start: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_offset: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_offset: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_residue: Option<char>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_residue: Option<char>,
}

impl PositionSpec {
    pub fn point(start: u64) -> Self {
        PositionSpec {
            start,
            end: None,
            start_offset: None,
            end_offset: None,
            start_residue: None,
            end_residue: None,
        }
    }

    pub fn range(start: u64, end: u64) -> Self {
        PositionSpec {
            end: Some(end),
            ..PositionSpec::point(start)
        }
    }

    pub fn with_start_offset(mut self, offset: i64) -> Self {
        self.start_offset = Some(offset);
        self
    }

    pub fn with_end_offset(mut self, offset: i64) -> Self {
        self.end_offset = Some(offset);
        self
    }

    pub fn with_residues(mut self, start: char, end: Option<char>) -> Self {
        self.start_residue = Some(start);
        self.end_residue = end;
        self
    }

    pub fn is_range(&self) -> bool {
        self.end.is_some()
    }

    pub fn has_offsets(&self) -> bool {
        self.start_offset.is_some() || self.end_offset.is_some()
    }

    /// `(position, offset)` of the last base covered, which is the start for
    /// point positions.
    pub fn end_point(&self) -> (u64, i64) {
        match self.end {
            Some(end) => (end, self.end_offset.unwrap_or(0)),
            None => (self.start, self.start_offset.unwrap_or(0)),
        }
    }

    pub fn start_point(&self) -> (u64, i64) {
        (self.start, self.start_offset.unwrap_or(0))
    }
}

/// Discriminant of an [`Edit`], plus the dbSNP form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditKind {
    Substitution,
    Deletion,
    Duplication,
    Insertion,
    Delins,
    Frameshift,
    Synonymous,
    Rsid,
}

impl EditKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Substitution => "substitution",
            EditKind::Deletion => "deletion",
            EditKind::Duplication => "duplication",
            EditKind::Insertion => "insertion",
            EditKind::Delins => "delins",
            EditKind::Frameshift => "frameshift",
            EditKind::Synonymous => "synonymous",
            EditKind::Rsid => "rsid",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sequence change at a [`PositionSpec`].
///
/// Nucleotide alleles are `ACGT` (DNA) or `acgu` (RNA); protein alleles are
/// one-letter amino-acid codes with `*` for stop.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Edit {
    Substitution {
        reference: String,
        alternate: String,
    },
    Deletion {
        #[serde(skip_serializing_if = "Option::is_none")]
        deleted: Option<String>,
    },
    Duplication {
        #[serde(skip_serializing_if = "Option::is_none")]
        duplicated: Option<String>,
    },
    Insertion {
        inserted: String,
    },
    Delins {
        inserted: String,
    },
    /// Protein frameshift: `p.R97Pfs*23`.
    Frameshift {
        #[serde(skip_serializing_if = "Option::is_none")]
        alternate: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        stop_after: Option<u64>,
    },
    Synonymous {
        #[serde(skip_serializing_if = "Option::is_none")]
        reference: Option<String>,
    },
}

impl Edit {
    pub fn kind(&self) -> EditKind {
        match self {
            Edit::Substitution { .. } => EditKind::Substitution,
            Edit::Deletion { .. } => EditKind::Deletion,
            Edit::Duplication { .. } => EditKind::Duplication,
            Edit::Insertion { .. } => EditKind::Insertion,
            Edit::Delins { .. } => EditKind::Delins,
            Edit::Frameshift { .. } => EditKind::Frameshift,
            Edit::Synonymous { .. } => EditKind::Synonymous,
        }
    }

    pub fn ref_allele(&self) -> Option<&str> {
        match self {
            Edit::Substitution { reference, .. } => Some(reference),
            Edit::Deletion { deleted } => deleted.as_deref(),
            Edit::Duplication { duplicated } => duplicated.as_deref(),
            Edit::Synonymous { reference } => reference.as_deref(),
            Edit::Insertion { .. } | Edit::Delins { .. } | Edit::Frameshift { .. } => None,
        }
    }

    pub fn alt_allele(&self) -> Option<&str> {
        match self {
            Edit::Substitution { alternate, .. } => Some(alternate),
            Edit::Insertion { inserted } | Edit::Delins { inserted } => Some(inserted),
            Edit::Frameshift { alternate, .. } => alternate.as_deref(),
            Edit::Deletion { .. } | Edit::Duplication { .. } | Edit::Synonymous { .. } => None,
        }
    }
}

/// A sequence variant anchored on a molecule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SequenceVariant {
    pub molecule: Molecule,
    /// Reference sequence the description is relative to, e.g. `NM_000059.3`
    /// or a contig name for genomic descriptions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_accession: Option<String>,
    /// Gene symbol from an `ACC(GENE):` prefix; only present with an accession.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gene_symbol: Option<String>,
    pub position: PositionSpec,
    pub edit: Edit,
}

/// Parsed variant description.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VariantAst {
    Sequence(SequenceVariant),
    /// dbSNP reference SNP cluster, kept as an opaque number.
    Rsid { number: u64 },
}

impl VariantAst {
    pub fn sequence(
        molecule: Molecule,
        position: PositionSpec,
        edit: Edit,
    ) -> Self {
        VariantAst::Sequence(SequenceVariant {
            molecule,
            reference_accession: None,
            gene_symbol: None,
            position,
            edit,
        })
    }

    pub fn rsid(number: u64) -> Self {
        VariantAst::Rsid { number }
    }

    pub fn as_sequence(&self) -> Option<&SequenceVariant> {
        match self {
            VariantAst::Sequence(v) => Some(v),
            VariantAst::Rsid { .. } => None,
        }
    }

    pub fn molecule(&self) -> Option<Molecule> {
        self.as_sequence().map(|v| v.molecule)
    }

    pub fn edit_kind(&self) -> EditKind {
        match self {
            VariantAst::Sequence(v) => v.edit.kind(),
            VariantAst::Rsid { .. } => EditKind::Rsid,
        }
    }

    /// Checks the structural invariants every parser guarantees.
    pub fn validate(&self) -> Result<(), AstError> {
        match self {
            VariantAst::Rsid { .. } => Ok(()),
            VariantAst::Sequence(v) => v.validate(),
        }
    }
}

impl fmt::Display for VariantAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_canonical(self))
    }
}

/// Violated AST invariant.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AstError {
    #[error("position must be at least 1")]
    ZeroPosition,
    #[error("range end precedes its start")]
    InvertedRange,
    #[error("intronic offsets are not allowed on {0}. descriptions")]
    OffsetNotAllowed(Molecule),
    #[error("intronic offset must be nonzero")]
    ZeroOffset,
    #[error("end offset given without a range end")]
    DanglingEndOffset,
    #[error("{0} requires a range")]
    RangeRequired(EditKind),
    #[error("{0} requires a single position")]
    PointRequired(EditKind),
    #[error("invalid allele {allele:?} for {molecule}. description")]
    InvalidAllele { allele: String, molecule: Molecule },
    #[error("protein positions must name their residues")]
    MissingResidue,
    #[error("residues are only allowed on protein positions")]
    UnexpectedResidue,
    #[error("{0} is not valid on this molecule")]
    EditNotAllowed(EditKind),
    #[error("substitution reference does not match the residue at its position")]
    ResidueMismatch,
    #[error("gene symbol requires a reference accession")]
    GeneWithoutAccession,
}

impl SequenceVariant {
    pub fn validate(&self) -> Result<(), AstError> {
        let pos = &self.position;
        let mol = self.molecule;
        if pos.start == 0 || pos.end == Some(0) {
            return Err(AstError::ZeroPosition);
        }
        if pos.start_offset == Some(0) || pos.end_offset == Some(0) {
            return Err(AstError::ZeroOffset);
        }
        if pos.has_offsets() && !mol.allows_offsets() {
            return Err(AstError::OffsetNotAllowed(mol));
        }
        if pos.end.is_none() && (pos.end_offset.is_some() || pos.end_residue.is_some()) {
            return Err(AstError::DanglingEndOffset);
        }
        if pos.is_range() && pos.start_point() > pos.end_point() {
            return Err(AstError::InvertedRange);
        }
        if self.gene_symbol.is_some() && self.reference_accession.is_none() {
            return Err(AstError::GeneWithoutAccession);
        }
        if mol.is_protein() {
            if pos.start_residue.is_none() || (pos.is_range() && pos.end_residue.is_none()) {
                return Err(AstError::MissingResidue);
            }
            for r in pos.start_residue.iter().chain(pos.end_residue.iter()) {
                if !valid_protein_residue(*r) {
                    return Err(AstError::InvalidAllele {
                        allele: r.to_string(),
                        molecule: mol,
                    });
                }
            }
        } else if pos.start_residue.is_some() || pos.end_residue.is_some() {
            return Err(AstError::UnexpectedResidue);
        }
        self.validate_edit()
    }

    fn validate_edit(&self) -> Result<(), AstError> {
        let mol = self.molecule;
        let kind = self.edit.kind();
        let is_range = self.position.is_range();
        let check = |s: &str| -> Result<(), AstError> {
            if valid_sequence(s, mol) {
                Ok(())
            } else {
                Err(AstError::InvalidAllele {
                    allele: s.to_string(),
                    molecule: mol,
                })
            }
        };
        match &self.edit {
            Edit::Substitution { reference, alternate } => {
                if is_range {
                    return Err(AstError::PointRequired(kind));
                }
                check(reference)?;
                check(alternate)?;
                if reference.chars().count() != 1 || alternate.chars().count() != 1 {
                    return Err(AstError::InvalidAllele {
                        allele: format!("{reference}>{alternate}"),
                        molecule: mol,
                    });
                }
                if mol.is_protein() && self.position.start_residue != reference.chars().next() {
                    return Err(AstError::ResidueMismatch);
                }
            }
            Edit::Deletion { deleted } => {
                if let Some(s) = deleted {
                    if mol.is_protein() {
                        return Err(AstError::UnexpectedResidue);
                    }
                    check(s)?;
                }
            }
            Edit::Duplication { duplicated } => {
                if let Some(s) = duplicated {
                    if mol.is_protein() {
                        return Err(AstError::UnexpectedResidue);
                    }
                    check(s)?;
                }
            }
            Edit::Insertion { inserted } => {
                if !is_range {
                    return Err(AstError::RangeRequired(kind));
                }
                check(inserted)?;
            }
            Edit::Delins { inserted } => check(inserted)?,
            Edit::Frameshift { alternate, .. } => {
                if !mol.is_protein() {
                    return Err(AstError::EditNotAllowed(kind));
                }
                if is_range {
                    return Err(AstError::PointRequired(kind));
                }
                if let Some(a) = alternate {
                    check(a)?;
                    if a.chars().count() != 1 {
                        return Err(AstError::InvalidAllele {
                            allele: a.clone(),
                            molecule: mol,
                        });
                    }
                }
            }
            Edit::Synonymous { reference } => {
                if let Some(r) = reference {
                    if mol.is_protein() {
                        return Err(AstError::UnexpectedResidue);
                    }
                    check(r)?;
                }
            }
        }
        Ok(())
    }
}

fn valid_protein_residue(c: char) -> bool {
    c == '*' || is_one_letter(c)
}

/// Whether `s` is a non-empty allele in the alphabet of `molecule`.
pub(crate) fn valid_sequence(s: &str, molecule: Molecule) -> bool {
    !s.is_empty()
        && match molecule {
            Molecule::P => s.chars().all(valid_protein_residue),
            Molecule::R => s.chars().all(|c| matches!(c, 'a' | 'c' | 'g' | 'u')),
            _ => s.chars().all(|c| matches!(c, 'A' | 'C' | 'G' | 'T')),
        }
}
