use super::codon::{reverse_complement, translate_codon};
use super::{CoordError, Exon, Strand, TranscriptModel};
use crate::hgvs::{Edit, EditKind, Molecule, PositionSpec, SequenceVariant, VariantAst};

fn sequence_of(ast: &VariantAst, expected: Molecule) -> Result<&SequenceVariant, CoordError> {
    let v = ast.as_sequence().ok_or(CoordError::NoCoordinates)?;
    if v.molecule != expected {
        return Err(CoordError::WrongMolecule {
            expected,
            found: v.molecule,
        });
    }
    Ok(v)
}

fn mappable(edit: &Edit) -> Result<(), CoordError> {
    match edit.kind() {
        EditKind::Substitution
        | EditKind::Deletion
        | EditKind::Duplication
        | EditKind::Insertion
        | EditKind::Delins => Ok(()),
        other => Err(CoordError::UnsupportedEdit(other)),
    }
}

fn out_of(t: &TranscriptModel, what: String) -> CoordError {
    CoordError::OutOfTranscript {
        transcript: t.transcript_id.clone(),
        position: what,
    }
}

fn describe_coding(c: u64, offset: i64) -> String {
    match offset {
        0 => format!("c.{c}"),
        o if o > 0 => format!("c.{c}+{o}"),
        o => format!("c.{c}{o}"),
    }
}

/// Length of the intron between two exons adjacent in transcript order.
fn intron_len(a: &Exon, b: &Exon) -> u64 {
    let (left, right) = if a.start < b.start { (a, b) } else { (b, a) };
    right.start - left.end - 1
}

fn coding_point_to_genome(t: &TranscriptModel, c: u64, offset: i64) -> Result<u64, CoordError> {
    let fail = || out_of(t, describe_coding(c, offset));
    let tx = t.coding_to_transcript(c).ok_or_else(fail)?;
    let base = t.transcript_to_genome(tx).ok_or_else(fail)?;
    if offset == 0 {
        return Ok(base);
    }
    let exons: Vec<&Exon> = t.exons_in_transcript_order().collect();
    let mut exon_start = 1;
    let mut intron = None;
    for (i, exon) in exons.iter().enumerate() {
        let exon_end = exon_start + exon.len() - 1;
        if offset > 0 && tx == exon_end && i + 1 < exons.len() {
            intron = Some(intron_len(exon, exons[i + 1]));
        }
        if offset < 0 && tx == exon_start && i > 0 {
            intron = Some(intron_len(exons[i - 1], exon));
        }
        exon_start = exon_end + 1;
    }
    let intron = intron.ok_or_else(fail)?;
    let k = offset.unsigned_abs();
    // Offsets count from the nearest exon edge; the middle base of an odd
    // intron belongs to the upstream edge.
    let nearest = if offset > 0 {
        2 * k <= intron + 1
    } else {
        2 * k < intron + 1
    };
    if !nearest {
        return Err(fail());
    }
    match t.strand {
        Strand::Plus => base.checked_add_signed(offset),
        Strand::Minus => base.checked_add_signed(-offset),
    }
    .ok_or_else(fail)
}

fn genome_point_to_coding(t: &TranscriptModel, g: u64) -> Result<(u64, i64), CoordError> {
    let fail = || out_of(t, format!("g.{g}"));
    if let Some(tx) = t.genome_to_transcript(g) {
        return Ok((t.transcript_to_coding(tx).ok_or_else(fail)?, 0));
    }
    let i = t
        .exons
        .windows(2)
        .position(|w| w[0].end < g && g < w[1].start)
        .ok_or_else(fail)?;
    let (left, right) = (&t.exons[i], &t.exons[i + 1]);
    let intron = right.start - left.end - 1;
    let (upstream_edge, downstream_edge, from_upstream) = match t.strand {
        Strand::Plus => (left.end, right.start, g - left.end),
        Strand::Minus => (right.start, left.end, right.start - g),
    };
    let (anchor, offset) = if 2 * from_upstream <= intron + 1 {
        (upstream_edge, from_upstream as i64)
    } else {
        (downstream_edge, -((intron + 1 - from_upstream) as i64))
    };
    let tx = t.genome_to_transcript(anchor).ok_or_else(fail)?;
    Ok((t.transcript_to_coding(tx).ok_or_else(fail)?, offset))
}

fn strand_edit(edit: &Edit, strand: Strand) -> Edit {
    if strand == Strand::Plus {
        return edit.clone();
    }
    let rc = |s: &String| reverse_complement(s);
    match edit {
        Edit::Substitution { reference, alternate } => Edit::Substitution {
            reference: rc(reference),
            alternate: rc(alternate),
        },
        Edit::Deletion { deleted } => Edit::Deletion {
            deleted: deleted.as_ref().map(rc),
        },
        Edit::Duplication { duplicated } => Edit::Duplication {
            duplicated: duplicated.as_ref().map(rc),
        },
        Edit::Insertion { inserted } => Edit::Insertion {
            inserted: rc(inserted),
        },
        Edit::Delins { inserted } => Edit::Delins {
            inserted: rc(inserted),
        },
        other => other.clone(),
    }
}

/// Maps a coding variant to the genome, reverse-complementing alleles on
/// the minus strand. The result names the transcript's contig.
pub fn c_to_g(ast: &VariantAst, t: &TranscriptModel) -> Result<VariantAst, CoordError> {
    let v = sequence_of(ast, Molecule::C)?;
    mappable(&v.edit)?;
    let (cs, os) = v.position.start_point();
    let start = coding_point_to_genome(t, cs, os)?;
    let position = match v.position.end {
        None => PositionSpec::point(start),
        Some(_) => {
            let (ce, oe) = v.position.end_point();
            let end = coding_point_to_genome(t, ce, oe)?;
            match t.strand {
                Strand::Plus => PositionSpec::range(start, end),
                Strand::Minus => PositionSpec::range(end, start),
            }
        }
    };
    Ok(VariantAst::Sequence(SequenceVariant {
        molecule: Molecule::G,
        reference_accession: Some(t.contig.clone()),
        gene_symbol: None,
        position,
        edit: strand_edit(&v.edit, t.strand),
    }))
}

/// Inverse of [`c_to_g`] for exonic bases and intronic bases described from
/// their nearest exon edge.
pub fn g_to_c(ast: &VariantAst, t: &TranscriptModel) -> Result<VariantAst, CoordError> {
    let v = sequence_of(ast, Molecule::G)?;
    if let Some(acc) = &v.reference_accession {
        if acc != &t.contig {
            return Err(CoordError::ContigMismatch {
                expected: t.contig.clone(),
                found: acc.clone(),
            });
        }
    }
    mappable(&v.edit)?;
    let first = genome_point_to_coding(t, v.position.start)?;
    let (start, end) = match v.position.end {
        None => (first, None),
        Some(g_end) => {
            let last = genome_point_to_coding(t, g_end)?;
            match t.strand {
                Strand::Plus => (first, Some(last)),
                Strand::Minus => (last, Some(first)),
            }
        }
    };
    let nonzero = |o: i64| (o != 0).then_some(o);
    let position = PositionSpec {
        start: start.0,
        start_offset: nonzero(start.1),
        end: end.map(|e| e.0),
        end_offset: end.and_then(|e| nonzero(e.1)),
        start_residue: None,
        end_residue: None,
    };
    Ok(VariantAst::sequence(
        Molecule::C,
        position,
        strand_edit(&v.edit, t.strand),
    ))
}

/// Protein consequence of a coding single-base substitution.
pub fn c_to_p(ast: &VariantAst, t: &TranscriptModel) -> Result<VariantAst, CoordError> {
    let v = sequence_of(ast, Molecule::C)?;
    let Edit::Substitution { reference, alternate } = &v.edit else {
        return Err(CoordError::UnsupportedEdit(v.edit.kind()));
    };
    let c = v.position.start;
    if v.position.has_offsets() {
        return Err(out_of(t, describe_coding(c, v.position.start_offset.unwrap_or(0))));
    }
    let seq = t
        .cds_sequence
        .as_deref()
        .ok_or_else(|| CoordError::MissingSequence(t.transcript_id.clone()))?;
    if c == 0 || c > t.cds_len() {
        return Err(out_of(t, describe_coding(c, 0)));
    }
    let idx = (c - 1) as usize;
    let actual = seq.as_bytes()[idx] as char;
    if reference.len() != 1 || !reference.starts_with(actual) {
        return Err(CoordError::RefMismatch {
            position: c,
            stated: reference.clone(),
            actual,
        });
    }
    let codon_no = (c - 1) / 3 + 1;
    let codon_start = idx - idx % 3;
    let Some(codon) = seq.as_bytes().get(codon_start..codon_start + 3) else {
        return Err(CoordError::IncompleteCodon(codon_no));
    };
    let mut mutated = [codon[0], codon[1], codon[2]];
    mutated[idx % 3] = alternate.as_bytes()[0];
    let (Some(before), Some(after)) = (translate_codon(codon), translate_codon(&mutated)) else {
        return Err(CoordError::UnsupportedEdit(EditKind::Substitution));
    };
    let position = PositionSpec::point(codon_no).with_residues(before, None);
    let edit = if before == after {
        Edit::Synonymous { reference: None }
    } else {
        Edit::Substitution {
            reference: before.to_string(),
            alternate: after.to_string(),
        }
    };
    Ok(VariantAst::sequence(Molecule::P, position, edit))
}

/// RNA substitution to its coding DNA equivalent (`u` -> `T`).
pub fn r_to_c(ast: &VariantAst) -> Result<VariantAst, CoordError> {
    let v = sequence_of(ast, Molecule::R)?;
    let Edit::Substitution { reference, alternate } = &v.edit else {
        return Err(CoordError::UnsupportedEdit(v.edit.kind()));
    };
    let to_dna = |s: &str| -> Result<String, CoordError> {
        s.chars()
            .map(|b| match b {
                'a' | 'c' | 'g' => Ok(b.to_ascii_uppercase()),
                'u' => Ok('T'),
                _ => Err(CoordError::UnsupportedEdit(EditKind::Substitution)),
            })
            .collect()
    };
    Ok(VariantAst::Sequence(SequenceVariant {
        molecule: Molecule::C,
        edit: Edit::Substitution {
            reference: to_dna(reference)?,
            alternate: to_dna(alternate)?,
        },
        ..v.clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgvs::parse_canonical;

    const TOY1_CDS: &str = "ATGTTTGCACTGGATCGCTACGGAAGCCCAGTTATCACGTGGCAGGAAAACTCTGGCCTC\
                            AAAGTGCCTTTCGAGATTCATACCTGCGCGAGATCAGGTCCCATGTATGTCCAAAAGTAA";

    fn toy1() -> TranscriptModel {
        TranscriptModel::new(
            "TOY1",
            "G1",
            "chrT",
            Strand::Plus,
            vec![Exon::new(1001, 1060), Exon::new(2001, 2060)],
            1,
            120,
            Some(TOY1_CDS.into()),
        )
        .unwrap()
    }

    fn toy2() -> TranscriptModel {
        TranscriptModel::new(
            "TOY2",
            "G2",
            "chrU",
            Strand::Minus,
            vec![Exon::new(5001, 5060)],
            1,
            60,
            None,
        )
        .unwrap()
    }

    fn p(s: &str) -> VariantAst {
        parse_canonical(s).unwrap()
    }

    fn g(s: &str, contig: &str) -> VariantAst {
        p(&format!("{contig}:{s}"))
    }

    #[test]
    fn coding_to_genome_examples() {
        let t = toy1();
        assert_eq!(c_to_g(&p("c.1A>G"), &t).unwrap(), g("g.1001A>G", "chrT"));
        assert_eq!(c_to_g(&p("c.61A>G"), &t).unwrap(), g("g.2001A>G", "chrT"));
        assert_eq!(c_to_g(&p("c.60+1G>A"), &t).unwrap(), g("g.1061G>A", "chrT"));
        assert_eq!(c_to_g(&p("c.61-2A>G"), &t).unwrap(), g("g.1999A>G", "chrT"));
        assert_eq!(c_to_g(&p("c.1A>G"), &toy2()).unwrap(), g("g.5060T>C", "chrU"));
    }

    #[test]
    fn minus_strand_ranges_swap_and_revcomp() {
        let t = toy2();
        assert_eq!(
            c_to_g(&p("c.1_3delATG"), &t).unwrap(),
            g("g.5058_5060delCAT", "chrU")
        );
        assert_eq!(
            c_to_g(&p("c.1_2insGA"), &t).unwrap(),
            g("g.5059_5060insTC", "chrU")
        );
        assert_eq!(g_to_c(&g("g.5058_5060delCAT", "chrU"), &t).unwrap(), p("c.1_3delATG"));
    }

    #[test]
    fn genome_to_coding_examples() {
        let t = toy1();
        assert_eq!(g_to_c(&p("g.1001A>G"), &t).unwrap(), p("c.1A>G"));
        assert!(matches!(
            g_to_c(&p("g.9999A>G"), &t),
            Err(CoordError::OutOfTranscript { .. })
        ));
        assert!(matches!(
            g_to_c(&g("g.1001A>G", "chrX"), &t),
            Err(CoordError::ContigMismatch { .. })
        ));
        // middle of the 940-base intron: 470 bases from each edge side
        assert_eq!(g_to_c(&p("g.1530A>G"), &t).unwrap(), p("c.60+470A>G"));
        assert_eq!(g_to_c(&p("g.1531A>G"), &t).unwrap(), p("c.61-470A>G"));
    }

    #[test]
    fn offsets_must_use_nearest_edge() {
        let t = toy1();
        assert!(c_to_g(&p("c.60+471A>G"), &t).is_err());
        assert!(c_to_g(&p("c.61-470A>G"), &t).is_ok());
        assert!(c_to_g(&p("c.61-471A>G"), &t).is_err());
        assert!(c_to_g(&p("c.120+1A>G"), &t).is_err());
        assert!(c_to_g(&p("c.1-1A>G"), &t).is_err());
        assert!(c_to_g(&p("c.30+1A>G"), &t).is_err());
    }

    #[test]
    fn unsupported_edits() {
        let t = toy1();
        assert_eq!(
            c_to_g(&p("c.76="), &t),
            Err(CoordError::UnsupportedEdit(EditKind::Synonymous))
        );
        assert!(matches!(
            c_to_g(&p("p.R5Q"), &t),
            Err(CoordError::WrongMolecule { .. })
        ));
        assert!(matches!(c_to_g(&p("c.121A>G"), &t), Err(CoordError::OutOfTranscript { .. })));
    }

    #[test]
    fn protein_consequence_examples() {
        let t = toy1();
        assert_eq!(c_to_p(&p("c.4T>C"), &t).unwrap(), p("p.F2L"));
        assert_eq!(c_to_p(&p("c.6T>C"), &t).unwrap(), p("p.F2="));
        assert!(matches!(
            c_to_p(&p("c.4A>C"), &t),
            Err(CoordError::RefMismatch { position: 4, .. })
        ));
        assert_eq!(c_to_p(&p("c.118T>C"), &t).unwrap(), p("p.*40Q"));
        assert_eq!(c_to_p(&p("c.119A>G"), &t).unwrap(), p("p.*40="));
        assert_eq!(
            c_to_p(&p("c.76_78del"), &t),
            Err(CoordError::UnsupportedEdit(EditKind::Deletion))
        );
        assert_eq!(
            c_to_p(&p("c.1A>G"), &toy2()),
            Err(CoordError::MissingSequence("TOY2".into()))
        );
    }

    #[test]
    fn rna_to_coding() {
        assert_eq!(r_to_c(&p("r.76a>u")).unwrap(), p("c.76A>T"));
        assert_eq!(r_to_c(&p("r.60+1g>a")).unwrap(), p("c.60+1G>A"));
        assert_eq!(
            r_to_c(&p("r.76_78del")),
            Err(CoordError::UnsupportedEdit(EditKind::Deletion))
        );
        assert!(matches!(r_to_c(&p("c.76A>T")), Err(CoordError::WrongMolecule { .. })));
    }
}
