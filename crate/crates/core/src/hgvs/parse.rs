//! Recursive-descent parser for canonical HGVS descriptions.
//!
//! Grammar (informal):
//!
//! ```text
//! variant  := rsid | [accession ['(' gene ')'] ':'] mol '.' body
//! mol      := g | c | r | m | n | p
//! body     := pos ['_' pos] na_edit            (nucleotide molecules)
//!           | res num ['_' res num] aa_edit     (protein)
//! pos      := num [('+' | '-') num]
//! na_edit  := base '>' base | [base] '=' | 'delins' seq | 'del' [seq]
//!           | 'dup' [seq] | 'ins' seq
//! aa_edit  := res | res 'fs' [stop num] | 'fs' [stop num] | '='
//!           | 'del' | 'dup' | 'ins' res+ | 'delins' res+
//! ```
//!
//! Mosaics, alleles, repeats and uncertain positions are not part of the
//! grammar and fail with a [`ParseError`].

use std::fmt;

use super::amino::three_letter_to_one;
use super::{normalize_ast, AstError, Edit, Molecule, PositionSpec, SequenceVariant, VariantAst};

/// Malformed description: byte offset of the failure and what would have
/// been accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}",
            self.offset,
            self.expected.join(" or ")
        )
    }
}

impl std::error::Error for ParseError {}

/// Parses a canonical description and returns its normalized AST.
pub fn parse_canonical(text: &str) -> Result<VariantAst, ParseError> {
    Parser::new(text).variant()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err(&self, expected: &[&'static str]) -> ParseError {
        self.err_at(self.pos, expected)
    }

    fn err_at(&self, offset: usize, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset,
            expected: expected.to_vec(),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    fn variant(&mut self) -> Result<VariantAst, ParseError> {
        if self.src.is_empty() {
            return Err(self.err(&["variant description"]));
        }
        if self.src.starts_with(b"rs") && self.peek_at(2).is_some_and(|b| b.is_ascii_digit()) {
            self.pos = 2;
            let number = self.number()?;
            self.expect_end()?;
            return Ok(VariantAst::rsid(number));
        }
        let (accession, gene) = if self.at_molecule() {
            (None, None)
        } else {
            self.prefix()?
        };
        let mol_at = self.pos;
        let molecule = self
            .peek()
            .and_then(Molecule::from_prefix)
            .filter(|_| self.peek_at(1) == Some(b'.'))
            .ok_or_else(|| self.err(&["molecule prefix (g. c. r. m. n. p.)"]))?;
        self.pos += 2;
        let (position, edit_at, edit) = if molecule.is_protein() {
            self.protein_body()?
        } else {
            self.nucleotide_body(molecule)?
        };
        self.expect_end()?;
        let ast = normalize_ast(VariantAst::Sequence(SequenceVariant {
            molecule,
            reference_accession: accession,
            gene_symbol: gene,
            position,
            edit,
        }));
        ast.validate()
            .map_err(|e| self.semantic_error(e, mol_at, edit_at))?;
        Ok(ast)
    }

    fn semantic_error(&self, e: AstError, mol_at: usize, edit_at: usize) -> ParseError {
        let (offset, expected): (usize, &'static str) = match e {
            AstError::ZeroPosition => (mol_at + 2, "position of at least 1"),
            AstError::InvertedRange => (mol_at + 2, "range with start before end"),
            AstError::ZeroOffset => (mol_at + 2, "nonzero intronic offset"),
            AstError::OffsetNotAllowed(_) => (mol_at + 2, "position without intronic offset"),
            AstError::RangeRequired(_) => (mol_at + 2, "range position"),
            AstError::PointRequired(_) => (mol_at + 2, "single position"),
            _ => (edit_at, "edit valid at this position"),
        };
        self.err_at(offset, &[expected])
    }

    fn at_molecule(&self) -> bool {
        self.peek().and_then(Molecule::from_prefix).is_some() && self.peek_at(1) == Some(b'.')
    }

    fn prefix(&mut self) -> Result<(Option<String>, Option<String>), ParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            return Err(self.err(&["molecule prefix (g. c. r. m. n. p.)", "reference accession"]));
        }
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
        {
            self.pos += 1;
        }
        let accession = ascii(&self.src[start..self.pos]);
        let mut gene = None;
        if self.eat(b'(') {
            let gene_start = self.pos;
            while self
                .peek()
                .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
            {
                self.pos += 1;
            }
            if self.pos == gene_start {
                return Err(self.err(&["gene symbol"]));
            }
            gene = Some(ascii(&self.src[gene_start..self.pos]));
            if !self.eat(b')') {
                return Err(self.err(&["')'"]));
            }
        }
        if !self.eat(b':') {
            return Err(if gene.is_some() {
                self.err(&["':'"])
            } else {
                self.err(&["':'", "'('"])
            });
        }
        Ok((Some(accession), gene))
    }

    /// Decimal number without leading zeros.
    fn number(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b'1'..=b'9') => {}
            Some(b'0') => return Err(self.err(&["nonzero leading digit"])),
            _ => return Err(self.err(&["digit"])),
        }
        let mut value: u64 = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or_else(|| self.err_at(start, &["number that fits in 64 bits"]))?;
            self.pos += 1;
        }
        Ok(value)
    }

    fn offset(&mut self) -> Result<Option<i64>, ParseError> {
        let sign = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Ok(None),
        };
        self.pos += 1;
        let at = self.pos;
        let n = self.number()?;
        let n = i64::try_from(n).map_err(|_| self.err_at(at, &["smaller intronic offset"]))?;
        Ok(Some(sign * n))
    }

    fn nucleotide_body(
        &mut self,
        molecule: Molecule,
    ) -> Result<(PositionSpec, usize, Edit), ParseError> {
        let mut position = PositionSpec::point(self.number()?);
        position.start_offset = self.offset()?;
        if self.eat(b'_') {
            position.end = Some(self.number()?);
            position.end_offset = self.offset()?;
        }
        let edit_at = self.pos;
        let edit = if self.eat_str("delins") {
            Edit::Delins {
                inserted: self.bases(molecule, true)?.unwrap_or_default(),
            }
        } else if self.eat_str("del") {
            Edit::Deletion {
                deleted: self.bases(molecule, false)?,
            }
        } else if self.eat_str("dup") {
            Edit::Duplication {
                duplicated: self.bases(molecule, false)?,
            }
        } else if self.eat_str("ins") {
            Edit::Insertion {
                inserted: self.bases(molecule, true)?.unwrap_or_default(),
            }
        } else if self.eat(b'=') {
            Edit::Synonymous { reference: None }
        } else if let Some(reference) = self.base(molecule) {
            if self.eat(b'>') {
                let alternate = self
                    .base(molecule)
                    .ok_or_else(|| self.err(&["nucleotide"]))?;
                Edit::Substitution {
                    reference: reference.to_string(),
                    alternate: alternate.to_string(),
                }
            } else if self.eat(b'=') {
                Edit::Synonymous {
                    reference: Some(reference.to_string()),
                }
            } else {
                return Err(self.err(&["'>'", "'='"]));
            }
        } else {
            return Err(self.err(&[
                "substitution",
                "'del'",
                "'dup'",
                "'ins'",
                "'delins'",
                "'='",
            ]));
        };
        Ok((position, edit_at, edit))
    }

    fn base(&mut self, molecule: Molecule) -> Option<char> {
        let b = self.peek()?;
        let ok = if molecule.is_rna() {
            matches!(b.to_ascii_lowercase(), b'a' | b'c' | b'g' | b'u')
        } else {
            matches!(b.to_ascii_uppercase(), b'A' | b'C' | b'G' | b'T')
        };
        if ok {
            self.pos += 1;
            Some(b as char)
        } else {
            None
        }
    }

    fn bases(&mut self, molecule: Molecule, required: bool) -> Result<Option<String>, ParseError> {
        let mut seq = String::new();
        while let Some(b) = self.base(molecule) {
            seq.push(b);
        }
        if seq.is_empty() {
            if required {
                return Err(self.err(&["nucleotide sequence"]));
            }
            return Ok(None);
        }
        Ok(Some(seq))
    }

    /// Three-letter code, one-letter code, `*` or `X`.
    fn residue(&mut self) -> Option<char> {
        if let Some(three) = self.src.get(self.pos..self.pos + 3) {
            if three.iter().all(u8::is_ascii_alphabetic) {
                if let Some(one) = three_letter_to_one(&ascii(three)) {
                    self.pos += 3;
                    return Some(one);
                }
            }
        }
        match self.peek()? {
            b'*' | b'X' => {
                self.pos += 1;
                Some('*')
            }
            b if super::is_one_letter(b as char) => {
                self.pos += 1;
                Some(b as char)
            }
            _ => None,
        }
    }

    fn protein_body(&mut self) -> Result<(PositionSpec, usize, Edit), ParseError> {
        let first = self.residue().ok_or_else(|| self.err(&["amino acid"]))?;
        let mut position = PositionSpec::point(self.number()?).with_residues(first, None);
        if self.eat(b'_') {
            position.end_residue = Some(self.residue().ok_or_else(|| self.err(&["amino acid"]))?);
            position.end = Some(self.number()?);
        }
        let edit_at = self.pos;
        let edit = if self.eat_str("delins") {
            Edit::Delins {
                inserted: self.residues()?,
            }
        } else if self.eat_str("del") {
            Edit::Deletion { deleted: None }
        } else if self.eat_str("dup") {
            Edit::Duplication { duplicated: None }
        } else if self.eat_str("ins") {
            Edit::Insertion {
                inserted: self.residues()?,
            }
        } else if self.eat(b'=') {
            Edit::Synonymous { reference: None }
        } else if self.eat_str("fs") {
            Edit::Frameshift {
                alternate: None,
                stop_after: self.frameshift_stop()?,
            }
        } else if let Some(alt) = self.residue() {
            if self.eat_str("fs") {
                Edit::Frameshift {
                    alternate: Some(alt.to_string()),
                    stop_after: self.frameshift_stop()?,
                }
            } else {
                Edit::Substitution {
                    reference: first.to_string(),
                    alternate: alt.to_string(),
                }
            }
        } else {
            return Err(self.err(&[
                "amino acid",
                "'fs'",
                "'del'",
                "'dup'",
                "'ins'",
                "'delins'",
                "'='",
            ]));
        };
        Ok((position, edit_at, edit))
    }

    fn residues(&mut self) -> Result<String, ParseError> {
        let mut seq = String::new();
        while let Some(r) = self.residue() {
            seq.push(r);
        }
        if seq.is_empty() {
            return Err(self.err(&["amino acid"]));
        }
        Ok(seq)
    }

    fn frameshift_stop(&mut self) -> Result<Option<u64>, ParseError> {
        if self.eat(b'*') || self.eat_str("Ter") || self.eat(b'X') {
            Ok(Some(self.number()?))
        } else {
            Ok(None)
        }
    }
}

/// Only called on slices already checked to be ASCII.
fn ascii(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| b as char).collect()
}
