use litvar_core::coord::{c_to_g, c_to_p, g_to_c, liftover, r_to_c, CoordError};
use litvar_core::hgvs::{format_canonical, parse_canonical};
use litvar_core::test_support::fixtures;
use proptest::prelude::*;

mod support;

use support::coord::{block_formula, check_exonic, check_intronic, check_liftover, check_protein, ExonWalk};

#[test]
fn toy1_exonic_and_intronic_agree_with_exon_walk() {
    let set = fixtures::transcripts();
    let toy1 = set.get("TOY1").unwrap();
    assert_eq!(check_exonic(toy1), (4 * 120, 0));
    assert_eq!(check_intronic(toy1, Some(2)), (4, 0));
    assert_eq!(check_intronic(toy1, None), (940, 0));
}

#[test]
fn minus_strand_transcripts_agree_with_exon_walk() {
    let set = fixtures::transcripts();
    assert_eq!(check_exonic(set.get("TOY2").unwrap()), (4 * 60, 0));
    let toy3 = set.get("TOY3").unwrap();
    assert_eq!(check_exonic(toy3), (4 * 84, 0));
    assert_eq!(check_intronic(toy3, None), (70, 0));
}

#[test]
fn intron_midpoint_takes_plus() {
    let set = fixtures::transcripts();
    let walk = ExonWalk::build(set.get("TOY3").unwrap());
    let plus = walk.intronic.values().filter(|(_, o)| *o > 0).count();
    let minus = walk.intronic.values().filter(|(_, o)| *o < 0).count();
    assert_eq!((plus, minus), (35, 35));
    let walk = ExonWalk::build(set.get("TOY1").unwrap());
    assert_eq!(walk.intronic[&1530], (60, 470));
    assert_eq!(walk.intronic[&1531], (61, -470));
}

#[test]
fn spec_coordinate_examples() {
    let set = fixtures::transcripts();
    let toy1 = set.get("TOY1").unwrap();
    let map = |s: &str| format_canonical(&c_to_g(&parse_canonical(s).unwrap(), toy1).unwrap());
    assert_eq!(map("c.1A>G"), "chrT:g.1001A>G");
    assert_eq!(map("c.61A>G"), "chrT:g.2001A>G");
    assert_eq!(map("c.60+1G>A"), "chrT:g.1061G>A");
    let toy2 = set.get("TOY2").unwrap();
    assert_eq!(
        format_canonical(&c_to_g(&parse_canonical("c.1A>G").unwrap(), toy2).unwrap()),
        "chrU:g.5060T>C"
    );
    assert!(matches!(
        g_to_c(&parse_canonical("chrT:g.9999A>G").unwrap(), toy1),
        Err(CoordError::OutOfTranscript { .. })
    ));
    assert!(matches!(
        c_to_g(&parse_canonical("c.121A>G").unwrap(), toy1),
        Err(CoordError::OutOfTranscript { .. })
    ));
}

#[test]
fn protein_consequence_matches_full_translation() {
    let set = fixtures::transcripts();
    let toy1 = set.get("TOY1").unwrap();
    assert_eq!(check_protein(toy1), (3 * 120, 0));
    assert_eq!(format_canonical(&c_to_p(&parse_canonical("c.4T>C").unwrap(), toy1).unwrap()), "p.F2L");
    assert_eq!(format_canonical(&c_to_p(&parse_canonical("c.6T>C").unwrap(), toy1).unwrap()), "p.F2=");
    assert!(matches!(
        c_to_p(&parse_canonical("c.4A>C").unwrap(), toy1),
        Err(CoordError::RefMismatch { .. })
    ));
    assert!(matches!(
        c_to_p(&parse_canonical("c.4del").unwrap(), toy1),
        Err(CoordError::UnsupportedEdit(_))
    ));
    assert!(matches!(
        c_to_p(&parse_canonical("c.10C>T").unwrap(), set.get("TOY3").unwrap()),
        Err(CoordError::MissingSequence(_))
    ));
}

#[test]
fn rna_maps_by_alphabet() {
    let bases = [('a', 'A'), ('c', 'C'), ('g', 'G'), ('u', 'T')];
    let mut seen = std::collections::BTreeSet::new();
    for (r, rc) in bases {
        for (a, ac) in bases {
            if r == a {
                continue;
            }
            let c = r_to_c(&parse_canonical(&format!("r.76{r}>{a}")).unwrap()).unwrap();
            assert_eq!(format_canonical(&c), format!("c.76{rc}>{ac}"));
            assert!(seen.insert(format_canonical(&c)));
        }
    }
    assert!(parse_canonical("r.76a>x").is_err());
    assert!(matches!(
        r_to_c(&parse_canonical("r.76del").unwrap()),
        Err(CoordError::UnsupportedEdit(_))
    ));
}

#[test]
fn liftover_matches_block_formula_everywhere() {
    assert_eq!(check_liftover(&fixtures::two_block_chain()), (7000, 0));
}

proptest! {
    #[test]
    fn liftover_monotone_within_block(a in 1000u64..=6000, b in 1000u64..=6000) {
        let chain = fixtures::two_block_chain();
        let (lo, hi) = (a.min(b), a.max(b));
        if let (Some(x), Some(y)) = (chain.map_position("chrS", lo), chain.map_position("chrS", hi)) {
            prop_assert!(lo == hi || x < y);
            prop_assert_eq!(Some(x), block_formula(lo));
        }
    }

    #[test]
    fn ranges_need_one_block(a in 900u64..=6100, len in 0u64..200) {
        let chain = fixtures::two_block_chain();
        let ast = parse_canonical(&format!("chrS:g.{}_{}del", a, a + len + 1)).unwrap();
        let same_block = block_formula(a).is_some()
            && block_formula(a + len + 1).is_some()
            && (a <= 3000) == (a + len < 3000);
        prop_assert_eq!(liftover(&ast, &chain).is_ok(), same_block);
    }
}
