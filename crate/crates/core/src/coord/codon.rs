//! Standard genetic code.

/// Amino acids in TCAG codon order: index = 16*first + 4*second + third
/// with T=0, C=1, A=2, G=3.
const STANDARD: &[u8; 64] = b"FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

fn base_index(b: u8) -> Option<usize> {
    match b {
        b'T' | b't' => Some(0),
        b'C' | b'c' => Some(1),
        b'A' | b'a' => Some(2),
        b'G' | b'g' => Some(3),
        _ => None,
    }
}

/// One-letter amino acid (or `*`) for a DNA codon.
pub fn translate_codon(codon: &[u8]) -> Option<char> {
    if codon.len() != 3 {
        return None;
    }
    let i = base_index(codon[0])? * 16 + base_index(codon[1])? * 4 + base_index(codon[2])?;
    Some(STANDARD[i] as char)
}

/// Translates whole codons; a trailing partial codon is ignored.
pub fn translate(seq: &str) -> Option<String> {
    seq.as_bytes().chunks_exact(3).map(translate_codon).collect()
}

pub fn reverse_complement(seq: &str) -> String {
    seq.chars().rev().map(complement).collect()
}

pub(crate) fn complement(b: char) -> char {
    match b {
        'A' => 'T',
        'T' => 'A',
        'C' => 'G',
        'G' => 'C',
        'a' => 't',
        't' => 'a',
        'c' => 'g',
        'g' => 'c',
        other => other,
    }
}
