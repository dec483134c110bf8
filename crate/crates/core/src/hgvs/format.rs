use std::fmt::Write;

use super::amino::one_letter_to_three;
use super::{Edit, PositionSpec, SequenceVariant, VariantAst};

/// Residue rendering for protein descriptions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ProteinStyle {
    /// `p.W26*`; the canonical form.
    #[default]
    OneLetter,
    /// `p.Trp26Ter`.
    ThreeLetter,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormatOptions {
    pub protein_style: ProteinStyle,
    /// Render without the `ACCESSION:` prefix.
    pub omit_prefix: bool,
    /// Render without the `c.`/`p.`/... molecule prefix.
    pub omit_molecule: bool,
}

/// Canonical text: one-letter protein codes, `*` for stop.
pub fn format_canonical(ast: &VariantAst) -> String {
    format_with(ast, FormatOptions::default())
}

pub fn format_with(ast: &VariantAst, options: FormatOptions) -> String {
    match ast {
        VariantAst::Rsid { number } => format!("rs{number}"),
        VariantAst::Sequence(v) => format_sequence(v, options),
    }
}

fn format_sequence(v: &SequenceVariant, options: FormatOptions) -> String {
    let mut out = String::new();
    if !options.omit_prefix {
        if let Some(acc) = &v.reference_accession {
            out.push_str(acc);
            if let Some(gene) = &v.gene_symbol {
                let _ = write!(out, "({gene})");
            }
            out.push(':');
        }
    }
    if !options.omit_molecule {
        out.push(v.molecule.prefix());
        out.push('.');
    }
    if v.molecule.is_protein() {
        format_protein(&mut out, &v.position, &v.edit, options.protein_style);
    } else {
        format_nucleotide(&mut out, &v.position, &v.edit);
    }
    out
}

fn push_point(out: &mut String, pos: u64, offset: Option<i64>) {
    let _ = write!(out, "{pos}");
    match offset {
        Some(o) if o > 0 => {
            let _ = write!(out, "+{o}");
        }
        Some(o) => {
            let _ = write!(out, "{o}");
        }
        None => {}
    }
}

fn format_nucleotide(out: &mut String, pos: &PositionSpec, edit: &Edit) {
    let synonymous_ref = match edit {
        Edit::Synonymous { reference } => reference.as_deref(),
        _ => None,
    };
    push_point(out, pos.start, pos.start_offset);
    if let Some(end) = pos.end {
        out.push('_');
        push_point(out, end, pos.end_offset);
    }
    match edit {
        Edit::Substitution { reference, alternate } => {
            let _ = write!(out, "{reference}>{alternate}");
        }
        Edit::Deletion { deleted } => {
            out.push_str("del");
            out.push_str(deleted.as_deref().unwrap_or(""));
        }
        Edit::Duplication { duplicated } => {
            out.push_str("dup");
            out.push_str(duplicated.as_deref().unwrap_or(""));
        }
        Edit::Insertion { inserted } => {
            let _ = write!(out, "ins{inserted}");
        }
        Edit::Delins { inserted } => {
            let _ = write!(out, "delins{inserted}");
        }
        Edit::Synonymous { .. } => {
            out.push_str(synonymous_ref.unwrap_or(""));
            out.push('=');
        }
        // Not produced for nucleotide molecules; rendered so formatting stays total.
        Edit::Frameshift { .. } => out.push_str("fs"),
    }
}

fn residue(out: &mut String, r: char, style: ProteinStyle) {
    match style {
        ProteinStyle::OneLetter => out.push(r),
        ProteinStyle::ThreeLetter => match one_letter_to_three(r) {
            Some(three) => out.push_str(three),
            None => out.push(r),
        },
    }
}

fn residues(out: &mut String, seq: &str, style: ProteinStyle) {
    for r in seq.chars() {
        residue(out, r, style);
    }
}

fn format_protein(out: &mut String, pos: &PositionSpec, edit: &Edit, style: ProteinStyle) {
    residue(out, pos.start_residue.unwrap_or('?'), style);
    let _ = write!(out, "{}", pos.start);
    if let Some(end) = pos.end {
        out.push('_');
        residue(out, pos.end_residue.unwrap_or('?'), style);
        let _ = write!(out, "{end}");
    }
    match edit {
        Edit::Substitution { alternate, .. } => residues(out, alternate, style),
        Edit::Deletion { .. } => out.push_str("del"),
        Edit::Duplication { .. } => out.push_str("dup"),
        Edit::Insertion { inserted } => {
            out.push_str("ins");
            residues(out, inserted, style);
        }
        Edit::Delins { inserted } => {
            out.push_str("delins");
            residues(out, inserted, style);
        }
        Edit::Frameshift {
            alternate,
            stop_after,
        } => {
            if let Some(alt) = alternate {
                residues(out, alt, style);
            }
            out.push_str("fs");
            if let Some(n) = stop_after {
                residue(out, '*', style);
                let _ = write!(out, "{n}");
            }
        }
        Edit::Synonymous { .. } => out.push('='),
    }
}
