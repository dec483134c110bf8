//! Amino-acid code tables.

/// (three-letter, one-letter) pairs for the 20 standard residues and stop.
const CODES: [(&str, char); 21] = [
    ("Ala", 'A'),
    ("Arg", 'R'),
    ("Asn", 'N'),
    ("Asp", 'D'),
    ("Cys", 'C'),
    ("Gln", 'Q'),
    ("Glu", 'E'),
    ("Gly", 'G'),
    ("His", 'H'),
    ("Ile", 'I'),
    ("Leu", 'L'),
    ("Lys", 'K'),
    ("Met", 'M'),
    ("Phe", 'F'),
    ("Pro", 'P'),
    ("Ser", 'S'),
    ("Thr", 'T'),
    ("Trp", 'W'),
    ("Tyr", 'Y'),
    ("Val", 'V'),
    ("Ter", '*'),
];

/// One-letter code for a three-letter code, case-insensitively.
pub fn three_letter_to_one(code: &str) -> Option<char> {
    CODES
        .iter()
        .find(|(three, _)| three.eq_ignore_ascii_case(code))
        .map(|&(_, one)| one)
}

pub fn one_letter_to_three(code: char) -> Option<&'static str> {
    let code = if code == 'X' { '*' } else { code };
    CODES
        .iter()
        .find(|&&(_, one)| one == code)
        .map(|&(three, _)| three)
}

/// True for the 20 standard one-letter residue codes (not stop).
pub fn is_one_letter(c: char) -> bool {
    c != '*' && CODES.iter().any(|&(_, one)| one == c)
}
