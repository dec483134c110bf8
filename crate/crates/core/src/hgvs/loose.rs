//! Deprecated and informal surface forms.
//!
//! Each loose form is rewritten into the canonical grammar and parsed there,
//! so loose and canonical spellings of one change produce identical ASTs.

use std::sync::LazyLock;

use regex::Regex;

use super::{parse_canonical, Edit, Molecule, ParseError, PositionSpec, VariantAst};
use crate::coord::TranscriptModel;

/// Shipped loose forms, in the order they are tried.
pub const LOOSE_FORMS: [(&str, &str); 5] = [
    (
        "tolerant canonical",
        "canonical HGVS with embedded whitespace or arrows: c.76 A>T, c.76A→T",
    ),
    ("rsid", "dbSNP identifiers: rs80359550"),
    (
        "ivs",
        "intron-relative substitutions: IVS1+1G>A, IVS2-2A>G (needs a transcript)",
    ),
    (
        "protein shorthand",
        "one-letter protein changes without prefix: R506Q, W26X, F508del, R97fs",
    ),
    (
        "protein spelled",
        "three-letter protein changes without prefix: Arg506Gln, Trp26Ter, Phe508del",
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LooseError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("IVS notation {surface:?} needs a transcript to resolve")]
    MissingContext { surface: String },
    #[error("transcript {transcript} has no intron {intron}")]
    NoSuchIntron { transcript: String, intron: u64 },
    #[error("intron {intron} boundary of {transcript} lies outside the coding sequence")]
    OutsideCoding { transcript: String, intron: u64 },
}

static RSID: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(?i:rs)([1-9][0-9]*)$").unwrap());
static IVS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?i:ivs)([1-9][0-9]*)([+-])([1-9][0-9]*)([ACGTacgt])>([ACGTacgt])$").unwrap()
});
static PROTEIN_BARE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:[A-Z][a-z]{2}|[A-Z*])[1-9][0-9]*>?[A-Za-z*=_]").unwrap());

/// Strips whitespace and maps arrow spellings (`→`, `->`) to `>`.
pub fn clean_surface(text: &str) -> String {
    text.replace("->", ">")
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '→' | '⟶' | '⇒' | '＞' => '>',
            c => c,
        })
        .collect()
}

/// Parses canonical or loose text. IVS forms resolve against `context`;
/// without one they fail with [`LooseError::MissingContext`].
pub fn parse_loose(text: &str, context: Option<&TranscriptModel>) -> Result<VariantAst, LooseError> {
    let cleaned = clean_surface(text);
    let canonical_err = match parse_canonical(&cleaned) {
        Ok(ast) => return Ok(ast),
        Err(e) => e,
    };
    if let Some(caps) = RSID.captures(&cleaned) {
        if let Ok(number) = caps[1].parse() {
            return Ok(VariantAst::rsid(number));
        }
    }
    if let Some(caps) = IVS.captures(&cleaned) {
        let Some(transcript) = context else {
            return Err(LooseError::MissingContext {
                surface: text.to_string(),
            });
        };
        let intron: u64 = caps[1].parse().map_err(|_| canonical_err.clone())?;
        let distance: i64 = caps[3].parse().map_err(|_| canonical_err.clone())?;
        let upstream = &caps[2] == "+";
        let anchor = resolve_intron(transcript, intron, upstream)?;
        let offset = if upstream { distance } else { -distance };
        return Ok(VariantAst::sequence(
            Molecule::C,
            PositionSpec::point(anchor).with_start_offset(offset),
            Edit::Substitution {
                reference: caps[4].to_ascii_uppercase(),
                alternate: caps[5].to_ascii_uppercase(),
            },
        ));
    }
    let bare = cleaned.strip_prefix("p.").unwrap_or(&cleaned);
    if PROTEIN_BARE.is_match(bare) {
        if let Ok(ast) = parse_canonical(&format!("p.{}", bare.replacen('>', "", 1))) {
            return Ok(ast);
        }
    }
    Err(LooseError::Parse(canonical_err))
}

/// Coding position of the exon edge that anchors intron `intron`: the last
/// base of exon `intron` for `+n` forms, the first base of the next exon for
/// `-n` forms.
fn resolve_intron(t: &TranscriptModel, intron: u64, upstream: bool) -> Result<u64, LooseError> {
    let lengths = t.exon_lengths();
    let no_such = || LooseError::NoSuchIntron {
        transcript: t.transcript_id.clone(),
        intron,
    };
    let idx = usize::try_from(intron).map_err(|_| no_such())?;
    if idx == 0 || idx >= lengths.len() {
        return Err(no_such());
    }
    let exon_end: u64 = lengths[..idx].iter().sum();
    let tx_pos = if upstream { exon_end } else { exon_end + 1 };
    t.transcript_to_coding(tx_pos).ok_or(LooseError::OutsideCoding {
        transcript: t.transcript_id.clone(),
        intron,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::{Exon, Strand};

    fn toy1() -> TranscriptModel {
        TranscriptModel::new(
            "TOY1",
            "G1",
            "chrT",
            Strand::Plus,
            vec![Exon::new(1001, 1060), Exon::new(2001, 2060)],
            1,
            120,
            None,
        )
        .unwrap()
    }

    #[test]
    fn protein_shorthand_and_spelled_agree() {
        let short = parse_loose("R506Q", None).unwrap();
        assert_eq!(short, parse_canonical("p.R506Q").unwrap());
        assert_eq!(parse_loose("Arg506Gln", None).unwrap(), short);
        assert_eq!(parse_loose("p.Arg506Gln", None).unwrap(), short);
        assert_eq!(
            parse_loose("W26X", None).unwrap(),
            parse_canonical("p.Trp26Ter").unwrap()
        );
    }

    #[test]
    fn rsid_form() {
        assert_eq!(
            parse_loose("rs80359550", None).unwrap(),
            VariantAst::rsid(80359550)
        );
        assert_eq!(parse_loose("RS6025", None).unwrap(), VariantAst::rsid(6025));
    }

    #[test]
    fn ivs_resolves_against_exon_table() {
        let t = toy1();
        assert_eq!(
            parse_loose("IVS1+1G>A", Some(&t)).unwrap(),
            parse_canonical("c.60+1G>A").unwrap()
        );
        assert_eq!(
            parse_loose("IVS1-2A>G", Some(&t)).unwrap(),
            parse_canonical("c.61-2A>G").unwrap()
        );
        assert_eq!(
            parse_loose("IVS1+1G>A", None),
            Err(LooseError::MissingContext {
                surface: "IVS1+1G>A".into()
            })
        );
        assert!(matches!(
            parse_loose("IVS2+1G>A", Some(&t)),
            Err(LooseError::NoSuchIntron { intron: 2, .. })
        ));
    }

    #[test]
    fn whitespace_and_arrows_tolerated() {
        let want = parse_canonical("c.76A>T").unwrap();
        assert_eq!(parse_loose("c.76 A > T", None).unwrap(), want);
        assert_eq!(parse_loose("c.76A→T", None).unwrap(), want);
        assert_eq!(parse_loose("c.76A->T", None).unwrap(), want);
        assert_eq!(parse_loose("Arg 506 → Gln", None), parse_loose("R506Q", None));
    }

    #[test]
    fn nothing_matches() {
        assert!(matches!(parse_loose("banana", None), Err(LooseError::Parse(_))));
        assert!(matches!(parse_loose("", None), Err(LooseError::Parse(_))));
        assert!(matches!(parse_loose("BRCA2", None), Err(LooseError::Parse(_))));
    }
}
