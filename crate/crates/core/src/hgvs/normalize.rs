use super::amino::three_letter_to_one;
use super::{Edit, Molecule, SequenceVariant, VariantAst};

/// Collapses representation variance: three-letter and `X`/`Ter` stop codes
/// become one-letter and `*`, allele case follows the molecule alphabet,
/// identity substitutions become synonymous edits and stray whitespace in
/// prefixes is removed. Idempotent.
pub fn normalize_ast(ast: VariantAst) -> VariantAst {
    match ast {
        VariantAst::Rsid { .. } => ast,
        VariantAst::Sequence(v) => VariantAst::Sequence(normalize_sequence(v)),
    }
}

fn normalize_sequence(mut v: SequenceVariant) -> SequenceVariant {
    v.reference_accession = v.reference_accession.and_then(strip_whitespace);
    v.gene_symbol = v.gene_symbol.and_then(strip_whitespace);
    let mol = v.molecule;
    if mol.is_protein() {
        v.position.start_residue = v.position.start_residue.map(residue_char);
        v.position.end_residue = v.position.end_residue.map(residue_char);
    }
    let allele = |s: String| normalize_allele(&s, mol);
    v.edit = match v.edit {
        Edit::Substitution { reference, alternate } => {
            let reference = allele(reference);
            let alternate = allele(alternate);
            if reference == alternate {
                Edit::Synonymous {
                    reference: (!mol.is_protein()).then_some(reference),
                }
            } else {
                Edit::Substitution { reference, alternate }
            }
        }
        Edit::Deletion { deleted } => Edit::Deletion {
            deleted: deleted.filter(|_| !mol.is_protein()).map(allele),
        },
        Edit::Duplication { duplicated } => Edit::Duplication {
            duplicated: duplicated.filter(|_| !mol.is_protein()).map(allele),
        },
        Edit::Insertion { inserted } => Edit::Insertion {
            inserted: allele(inserted),
        },
        Edit::Delins { inserted } => Edit::Delins {
            inserted: allele(inserted),
        },
        Edit::Frameshift {
            alternate,
            stop_after,
        } => Edit::Frameshift {
            alternate: alternate.map(allele),
            stop_after,
        },
        Edit::Synonymous { reference } => Edit::Synonymous {
            reference: reference.filter(|_| !mol.is_protein()).map(allele),
        },
    };
    v
}

fn strip_whitespace(s: String) -> Option<String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    (!s.is_empty()).then_some(s)
}

fn residue_char(c: char) -> char {
    match c.to_ascii_uppercase() {
        'X' => '*',
        c => c,
    }
}

fn normalize_allele(s: &str, mol: Molecule) -> String {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match mol {
        Molecule::P => three_letter_run(&s).unwrap_or_else(|| s.chars().map(residue_char).collect()),
        Molecule::R => s.to_ascii_lowercase(),
        _ => s.to_ascii_uppercase(),
    }
}

/// `"ArgGln"` -> `"RQ"` when the whole string is three-letter codes.
fn three_letter_run(s: &str) -> Option<String> {
    if s.is_empty() || !s.len().is_multiple_of(3) || !s.is_ascii() {
        return None;
    }
    (0..s.len())
        .step_by(3)
        .map(|i| three_letter_to_one(&s[i..i + 3]))
        .collect()
}
