//! Brute-force coordinate, translation and liftover oracles. Each check
//! returns `(cases, mismatches)`.

use std::collections::BTreeMap;

use litvar_core::coord::{c_to_g, c_to_p, g_to_c, liftover, ChainMap, CoordError, Strand, TranscriptModel};
use litvar_core::hgvs::{format_canonical, parse_canonical};

/// Standard code written per amino acid, independent of the library table.
const CODE: [(char, &str); 21] = [
    ('A', "GCT GCC GCA GCG"),
    ('C', "TGT TGC"),
    ('D', "GAT GAC"),
    ('E', "GAA GAG"),
    ('F', "TTT TTC"),
    ('G', "GGT GGC GGA GGG"),
    ('H', "CAT CAC"),
    ('I', "ATT ATC ATA"),
    ('K', "AAA AAG"),
    ('L', "TTA TTG CTT CTC CTA CTG"),
    ('M', "ATG"),
    ('N', "AAT AAC"),
    ('P', "CCT CCC CCA CCG"),
    ('Q', "CAA CAG"),
    ('R', "CGT CGC CGA CGG AGA AGG"),
    ('S', "TCT TCC TCA TCG AGT AGC"),
    ('T', "ACT ACC ACA ACG"),
    ('V', "GTT GTC GTA GTG"),
    ('W', "TGG"),
    ('Y', "TAT TAC"),
    ('*', "TAA TAG TGA"),
];

pub fn codon_table() -> BTreeMap<String, char> {
    let mut table = BTreeMap::new();
    for (aa, codons) in CODE {
        for c in codons.split(' ') {
            table.insert(c.to_string(), aa);
        }
    }
    assert_eq!(table.len(), 64);
    table
}

pub fn translate_all(seq: &str, table: &BTreeMap<String, char>) -> Vec<char> {
    seq.as_bytes()
        .chunks(3)
        .map(|c| table[std::str::from_utf8(c).unwrap()])
        .collect()
}

fn comp(b: char) -> char {
    match b {
        'A' => 'T',
        'C' => 'G',
        'G' => 'C',
        'T' => 'A',
        _ => unreachable!(),
    }
}

/// Per-base coordinate tables for one transcript, from a walk over exons.
pub struct ExonWalk {
    strand: Strand,
    /// coding position -> genomic position
    pub exonic: BTreeMap<i64, u64>,
    /// genomic intronic position -> (anchor coding position, offset)
    pub intronic: BTreeMap<u64, (i64, i64)>,
}

impl ExonWalk {
    pub fn build(t: &TranscriptModel) -> Self {
        let mut exons: Vec<(u64, u64)> = t.exons.iter().map(|e| (e.start, e.end)).collect();
        exons.sort();
        if t.strand == Strand::Minus {
            exons.reverse();
        }
        let cds_len = t.cds_len() as i64;
        let to_c = |tx: i64| tx - t.cds_start as i64 + 1;
        let mut tx = 0i64;
        let mut exonic = BTreeMap::new();
        let mut edges = Vec::new();
        for &(s, e) in &exons {
            let bases: Vec<u64> = match t.strand {
                Strand::Plus => (s..=e).collect(),
                Strand::Minus => (s..=e).rev().collect(),
            };
            edges.push((tx + 1, bases[0], tx + bases.len() as i64, bases[bases.len() - 1]));
            for g in bases {
                tx += 1;
                exonic.insert(to_c(tx), g);
            }
        }
        exonic.retain(|c, _| (1..=cds_len).contains(c));
        let mut intronic = BTreeMap::new();
        for pair in edges.windows(2) {
            let (_, _, up_tx, up_g) = pair[0];
            let (down_tx, down_g, _, _) = pair[1];
            for g in up_g.min(down_g) + 1..up_g.max(down_g) {
                let d_up = g.abs_diff(up_g) as i64;
                let d_down = g.abs_diff(down_g) as i64;
                let entry = if d_up <= d_down {
                    (to_c(up_tx), d_up)
                } else {
                    (to_c(down_tx), -d_down)
                };
                if (1..=cds_len).contains(&entry.0) {
                    intronic.insert(g, entry);
                }
            }
        }
        ExonWalk {
            strand: t.strand,
            exonic,
            intronic,
        }
    }

    fn allele(&self, b: char) -> char {
        match self.strand {
            Strand::Plus => b,
            Strand::Minus => comp(b),
        }
    }
}

fn round_trip(t: &TranscriptModel, walk: &ExonWalk, coding: &str, g: u64, r: char, a: char) -> bool {
    let Ok(ast) = parse_canonical(coding) else { return false };
    let want = format!("{}:g.{g}{}>{}", t.contig, walk.allele(r), walk.allele(a));
    match c_to_g(&ast, t) {
        Ok(genomic) => format_canonical(&genomic) == want && g_to_c(&genomic, t).ok() == Some(ast),
        Err(_) => false,
    }
}

/// Every coding base with every substitution, both directions.
pub fn check_exonic(t: &TranscriptModel) -> (usize, usize) {
    let walk = ExonWalk::build(t);
    let mut cases = 0;
    let mut bad = 0;
    for (&c, &g) in &walk.exonic {
        for (r, a) in [('A', 'G'), ('C', 'T'), ('G', 'A'), ('T', 'C')] {
            cases += 1;
            if !round_trip(t, &walk, &format!("c.{c}{r}>{a}"), g, r, a) {
                bad += 1;
            }
        }
    }
    if cases != 4 * t.cds_len() as usize {
        bad += 1;
    }
    (cases, bad)
}

/// Intronic bases within `max_offset` of an exon edge (all when `None`).
pub fn check_intronic(t: &TranscriptModel, max_offset: Option<i64>) -> (usize, usize) {
    let walk = ExonWalk::build(t);
    let mut cases = 0;
    let mut bad = 0;
    for (&g, &(anchor, offset)) in &walk.intronic {
        if max_offset.is_some_and(|m| offset.abs() > m) {
            continue;
        }
        cases += 1;
        if !round_trip(t, &walk, &format!("c.{anchor}{offset:+}G>A"), g, 'G', 'A') {
            bad += 1;
        }
    }
    (cases, bad)
}

/// All `3 * |CDS|` substitutions against a diff of full translations.
pub fn check_protein(t: &TranscriptModel) -> (usize, usize) {
    let table = codon_table();
    let cds = t.cds_sequence.clone().expect("transcript with sequence");
    let reference = translate_all(&cds, &table);
    let mut cases = 0;
    let mut bad = 0;
    for i in 0..cds.len() {
        let r = cds.as_bytes()[i] as char;
        for a in ['A', 'C', 'G', 'T'].into_iter().filter(|&a| a != r) {
            cases += 1;
            let mut mutated = cds.clone().into_bytes();
            mutated[i] = a as u8;
            let protein = translate_all(std::str::from_utf8(&mutated).unwrap(), &table);
            let diffs: Vec<usize> = (0..protein.len()).filter(|&k| protein[k] != reference[k]).collect();
            let codon = i / 3 + 1;
            let want = match diffs.as_slice() {
                [] => format!("p.{}{codon}=", reference[codon - 1]),
                [k] => format!("p.{}{}{}", reference[*k], k + 1, protein[*k]),
                _ => String::new(),
            };
            let got = parse_canonical(&format!("c.{}{r}>{a}", i + 1))
                .ok()
                .and_then(|ast| c_to_p(&ast, t).ok())
                .map(|p| format_canonical(&p));
            if got.as_deref() != Some(want.as_str()) {
                bad += 1;
            }
        }
    }
    (cases, bad)
}

/// Blocks of the two-block fixture chain on `chrS`.
pub const TWO_BLOCKS: [(u64, u64, u64); 2] = [(1000, 3000, 11000), (4000, 6000, 14000)];

pub fn block_formula(pos: u64) -> Option<u64> {
    TWO_BLOCKS
        .iter()
        .find(|(s, e, _)| (*s..=*e).contains(&pos))
        .map(|(s, _, d)| d + (pos - s))
}

/// Every position from 1 to 7000: mapped by the formula or unmapped.
pub fn check_liftover(chain: &ChainMap) -> (usize, usize) {
    let mut cases = 0;
    let mut bad = 0;
    for pos in 1..=7000u64 {
        cases += 1;
        let ast = parse_canonical(&format!("chrS:g.{pos}A>G")).unwrap();
        let ok = match (liftover(&ast, chain), block_formula(pos)) {
            (Ok(lifted), Some(want)) => format_canonical(&lifted) == format!("chrS:g.{want}A>G"),
            (Err(CoordError::UnmappedRegion { position, .. }), None) => position == pos,
            _ => false,
        };
        if !ok {
            bad += 1;
        }
    }
    (cases, bad)
}
