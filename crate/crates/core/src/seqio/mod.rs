//! Sequence types, FASTA/GenBank parsing, strand operations and record fetching.

mod fasta;
mod fetch;
mod genbank;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fasta::{parse_fasta, write_fasta, FASTA_LINE_WIDTH};
pub use fetch::{fetch_record, resolve_endpoint, FetchError, FetchOptions, DEFAULT_ENDPOINT, ENDPOINT_ENV};
pub use genbank::{parse_genbank, GenBankRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("no '>' header found in input")]
    EmptyInput,
    #[error("invalid character {:?} (byte 0x{byte:02x}) at residue position {position} (line {line})", *byte as char)]
    InvalidCharacter { position: usize, line: usize, byte: u8 },
    #[error("record '{id}' has a header but no sequence lines")]
    EmptyRecord { id: String },
    #[error("sequence data on line {line} precedes the first header")]
    OrphanSequence { line: usize },
    #[error("identifier {0:?} contains whitespace")]
    InvalidId(String),
    #[error("missing {0} section")]
    MissingSection(&'static str),
    #[error("LOCUS declares {declared} bases but ORIGIN holds {parsed}")]
    LengthMismatch { declared: usize, parsed: usize },
    #[error("malformed LOCUS line: {0:?}")]
    MalformedLocus(String),
    #[error("more than one record in GenBank input (second record starts on line {line})")]
    MultipleRecords { line: usize },
    #[error("coordinate {coordinate} out of bounds for sequence of length {length}")]
    OutOfBounds { coordinate: usize, length: usize },
    #[error("inverted range: start {start} > end {end}")]
    InvertedRange { start: usize, end: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    A,
    C,
    G,
    T,
    N,
}

impl Base {
    /// The four unambiguous bases in analysis order.
    pub const ATGC: [Base; 4] = [Base::A, Base::T, Base::G, Base::C];

    pub fn from_byte(b: u8) -> Option<Base> {
        match b {
            b'A' | b'a' => Some(Base::A),
            b'C' | b'c' => Some(Base::C),
            b'G' | b'g' => Some(Base::G),
            b'T' | b't' => Some(Base::T),
            b'N' | b'n' => Some(Base::N),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::T => 'T',
            Base::N => 'N',
        }
    }

    pub fn complement(self) -> Base {
        match self {
            Base::A => Base::T,
            Base::T => Base::A,
            Base::G => Base::C,
            Base::C => Base::G,
            Base::N => Base::N,
        }
    }

    /// Position in the A, T, G, C order; `None` for N.
    pub fn atgc_index(self) -> Option<usize> {
        match self {
            Base::A => Some(0),
            Base::T => Some(1),
            Base::G => Some(2),
            Base::C => Some(3),
            Base::N => None,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strand {
    Plus,
    Minus,
    #[default]
    Unspecified,
}

impl Strand {
    pub fn flipped(self) -> Strand {
        match self {
            Strand::Plus => Strand::Minus,
            Strand::Minus => Strand::Plus,
            Strand::Unspecified => Strand::Unspecified,
        }
    }
}

/// Which strand a region is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Plus,
    Minus,
}

impl From<Orientation> for Strand {
    fn from(o: Orientation) -> Strand {
        match o {
            Orientation::Plus => Strand::Plus,
            Orientation::Minus => Strand::Minus,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Orientation::Plus),
            "minus" | "-" => Ok(Orientation::Minus),
            other => Err(format!("unknown strand {other:?} (expected plus or minus)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: String,
    description: String,
    residues: Vec<Base>,
    strand: Strand,
}

impl Sequence {
    pub fn new(
        id: impl Into<String>,
        description: impl Into<String>,
        residues: Vec<Base>,
        strand: Strand,
    ) -> Result<Sequence, SeqError> {
        let id = id.into();
        if id.chars().any(char::is_whitespace) {
            return Err(SeqError::InvalidId(id));
        }
        Ok(Sequence { id, description: description.into(), residues, strand })
    }

    /// Parses a bare residue string (no header) into an unstranded sequence.
    pub fn from_residues(id: impl Into<String>, text: &str) -> Result<Sequence, SeqError> {
        let residues = text
            .bytes()
            .enumerate()
            .map(|(i, b)| Base::from_byte(b).ok_or(SeqError::InvalidCharacter { position: i + 1, line: 1, byte: b }))
            .collect::<Result<Vec<_>, _>>()?;
        Sequence::new(id, "", residues, Strand::Unspecified)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn residues(&self) -> &[Base] {
        &self.residues
    }

    pub fn strand(&self) -> Strand {
        self.strand
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn to_string_residues(&self) -> String {
        self.residues.iter().map(|b| b.to_char()).collect()
    }

    pub(crate) fn with_residues(&self, residues: Vec<Base>) -> Sequence {
        Sequence { id: self.id.clone(), description: self.description.clone(), residues, strand: self.strand }
    }
}

pub fn reverse_complement(seq: &Sequence) -> Sequence {
    let residues = seq.residues.iter().rev().map(|b| b.complement()).collect();
    Sequence { id: seq.id.clone(), description: seq.description.clone(), residues, strand: seq.strand.flipped() }
}

/// Extracts the 1-based inclusive slice `start..=end`. On the minus strand the
/// slice is reverse-complemented so the result reads 5'→3'.
pub fn extract_region(
    seq: &Sequence,
    start: usize,
    end: usize,
    orientation: Orientation,
) -> Result<Sequence, SeqError> {
    let length = seq.len();
    if start > end {
        return Err(SeqError::InvertedRange { start, end });
    }
    if start < 1 || start > length {
        return Err(SeqError::OutOfBounds { coordinate: start, length });
    }
    if end > length {
        return Err(SeqError::OutOfBounds { coordinate: end, length });
    }
    let slice = &seq.residues[start - 1..end];
    let residues: Vec<Base> = match orientation {
        Orientation::Plus => slice.to_vec(),
        Orientation::Minus => slice.iter().rev().map(|b| b.complement()).collect(),
    };
    let suffix = match orientation {
        Orientation::Plus => "+",
        Orientation::Minus => "-",
    };
    Ok(Sequence {
        id: format!("{}:{}-{}({})", seq.id, start, end, suffix),
        description: seq.description.clone(),
        residues,
        strand: orientation.into(),
    })
}

/// A region request with an optional declared length.
///
/// When `length` is set it replaces the coordinate span: the segment keeps
/// `length` bases measured from the 5' end of the requested strand (the
/// `start` coordinate on plus, the `end` coordinate on minus). Shorter values
/// truncate the span, longer ones extend it past the 3' coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub start: usize,
    pub end: usize,
    pub orientation: Orientation,
    pub length: Option<usize>,
}

impl Region {
    pub fn span(&self) -> usize {
        self.end.saturating_sub(self.start) + 1
    }

    /// Coordinates actually read once the length override is applied.
    pub fn effective_bounds(&self) -> Result<(usize, usize), SeqError> {
        if self.start > self.end {
            return Err(SeqError::InvertedRange { start: self.start, end: self.end });
        }
        let Some(length) = self.length else {
            return Ok((self.start, self.end));
        };
        match self.orientation {
            Orientation::Plus => Ok((self.start, self.start + length.max(1) - 1)),
            Orientation::Minus => {
                let start = (self.end + 1)
                    .checked_sub(length.max(1))
                    .filter(|&s| s >= 1)
                    .ok_or(SeqError::OutOfBounds { coordinate: 0, length: self.end })?;
                Ok((start, self.end))
            }
        }
    }

    pub fn apply(&self, seq: &Sequence) -> Result<Sequence, SeqError> {
        let (start, end) = self.effective_bounds()?;
        extract_region(seq, start, end, self.orientation)
    }
}
