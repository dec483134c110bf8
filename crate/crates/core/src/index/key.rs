use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const UNKNOWN_GENE: &str = "*";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyMolecule {
    G,
    C,
    P,
    Rsid,
}

impl KeyMolecule {
    pub fn as_str(self) -> &'static str {
        match self {
            KeyMolecule::G => "g",
            KeyMolecule::C => "c",
            KeyMolecule::P => "p",
            KeyMolecule::Rsid => "rsid",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "g" => KeyMolecule::G,
            "c" => KeyMolecule::C,
            "p" => KeyMolecule::P,
            "rsid" => KeyMolecule::Rsid,
            _ => return None,
        })
    }
}

impl fmt::Display for KeyMolecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index key rendered as `taxon|gene|molecule|edit`. Equality, hashing and
/// ordering all go through the rendered bytes.
#[derive(Debug, Clone)]
pub struct CanonicalKey {
    species_taxon: u32,
    gene_id: String,
    molecule: KeyMolecule,
    edit_repr: String,
    rendered: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid key {input:?}: {reason}")]
pub struct KeyParseError {
    pub input: String,
    pub reason: &'static str,
}

impl CanonicalKey {
    pub fn new(
        species_taxon: u32,
        gene_id: Option<&str>,
        molecule: KeyMolecule,
        edit_repr: impl Into<String>,
    ) -> Self {
        let gene_id = gene_id.unwrap_or(UNKNOWN_GENE).to_string();
        let edit_repr = edit_repr.into();
        let rendered = format!("{species_taxon}|{gene_id}|{molecule}|{edit_repr}");
        CanonicalKey {
            species_taxon,
            gene_id,
            molecule,
            edit_repr,
            rendered,
        }
    }

    pub fn species_taxon(&self) -> u32 {
        self.species_taxon
    }

    pub fn gene_id(&self) -> Option<&str> {
        (self.gene_id != UNKNOWN_GENE).then_some(self.gene_id.as_str())
    }

    pub fn molecule(&self) -> KeyMolecule {
        self.molecule
    }

    pub fn edit_repr(&self) -> &str {
        &self.edit_repr
    }

    pub fn render(&self) -> &str {
        &self.rendered
    }

    pub fn parse(input: &str) -> Result<Self, KeyParseError> {
        let fail = |reason| KeyParseError {
            input: input.to_string(),
            reason,
        };
        let mut parts = input.splitn(4, '|');
        let (Some(taxon), Some(gene), Some(mol), Some(edit)) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(fail("expected taxon|gene|molecule|edit"));
        };
        if taxon.starts_with('+') || (taxon.len() > 1 && taxon.starts_with('0')) {
            return Err(fail("taxon must be a plain decimal number"));
        }
        let taxon: u32 = taxon.parse().map_err(|_| fail("taxon must be a number"))?;
        if gene.is_empty() {
            return Err(fail("empty gene field"));
        }
        let molecule = KeyMolecule::parse(mol).ok_or_else(|| fail("molecule must be g, c, p or rsid"))?;
        if edit.is_empty() || edit.contains('|') || edit.chars().any(char::is_whitespace) {
            return Err(fail("malformed edit field"));
        }
        let gene = (gene != UNKNOWN_GENE).then_some(gene);
        Ok(CanonicalKey::new(taxon, gene, molecule, edit))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

impl FromStr for CanonicalKey {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CanonicalKey::parse(s)
    }
}

impl PartialEq for CanonicalKey {
    fn eq(&self, other: &Self) -> bool {
        self.rendered == other.rendered
    }
}

impl Eq for CanonicalKey {}

impl Hash for CanonicalKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rendered.hash(state);
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rendered.as_bytes().cmp(other.rendered.as_bytes())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.rendered)
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalKey::parse(&s).map_err(serde::de::Error::custom)
    }
}
