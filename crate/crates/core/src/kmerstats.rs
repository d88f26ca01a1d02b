//! Base-deletion reductions and per-window doublet/base occurrence counts.
//!
//! Windows are consecutive and non-overlapping; a trailing partial window is
//! discarded. Pairs or positions containing `N` count toward no symbol, which
//! only shrinks that window's total.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::seqio::{Base, Sequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmerError {
    #[error("sequence of length {length} too short: need at least {needed} bases")]
    TooShort { length: usize, needed: usize },
    #[error("reading frame must be 0, 1 or 2 (got {0})")]
    InvalidFrame(usize),
    #[error("doublet stream has odd length {0}")]
    OddLength(usize),
    #[error("sequence of length {length} shorter than one window of {window}")]
    SequenceTooShort { length: usize, window: usize },
    #[error("doublet window length must be even and at least 2 (got {0})")]
    OddWindow(usize),
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("{0:?} is not a doublet of A, T, G, C")]
    InvalidDoublet(String),
}

/// Ordered pair of unambiguous bases. Canonical order is first-base-major over
/// A, T, G, C: AA, AT, AG, AC, TA, ... CC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Doublet(u8);

impl Doublet {
    pub const COUNT: usize = 16;

    pub fn new(first: Base, second: Base) -> Option<Doublet> {
        Some(Doublet((first.atgc_index()? * 4 + second.atgc_index()?) as u8))
    }

    pub fn from_index(index: usize) -> Option<Doublet> {
        (index < Self::COUNT).then_some(Doublet(index as u8))
    }

    /// All sixteen doublets in canonical order.
    pub fn all() -> impl Iterator<Item = Doublet> {
        (0..Self::COUNT as u8).map(Doublet)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn first(self) -> Base {
        Base::ATGC[self.index() / 4]
    }

    pub fn second(self) -> Base {
        Base::ATGC[self.index() % 4]
    }
}

impl fmt::Display for Doublet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first(), self.second())
    }
}

impl Serialize for Doublet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Doublet {
    type Err = KmerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        let bad = || KmerError::InvalidDoublet(s.to_string());
        if b.len() != 2 {
            return Err(bad());
        }
        let first = Base::from_byte(b[0]).ok_or_else(bad)?;
        let second = Base::from_byte(b[1]).ok_or_else(bad)?;
        Doublet::new(first, second).ok_or_else(bad)
    }
}

/// What a count series or bit-string is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Doublet(Doublet),
    Base(Base),
}

impl Symbol {
    /// Export order: canonical doublets, then A, T, G, C.
    pub fn sort_key(self) -> usize {
        match self {
            Symbol::Doublet(d) => d.index(),
            Symbol::Base(b) => Doublet::COUNT + b.atgc_index().unwrap_or(4),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Doublet(d) => d.fmt(f),
            Symbol::Base(b) => b.fmt(f),
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tiling {
    /// Adjacent non-overlapping pairs: window/2 pairs per window.
    #[default]
    Disjoint,
    /// Sliding pairs: window-1 pairs per window.
    Overlapping,
}

impl FromStr for Tiling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "disjoint" => Ok(Tiling::Disjoint),
            "overlapping" => Ok(Tiling::Overlapping),
            other => Err(format!("unknown tiling {other:?} (expected disjoint or overlapping)")),
        }
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tiling::Disjoint => "disjoint",
            Tiling::Overlapping => "overlapping",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub symbol: Symbol,
    pub counts: Vec<u32>,
    pub window_length: usize,
    pub tiling: Tiling,
    pub source_id: String,
}

impl CountSeries {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Largest count any single window can hold for this series.
    pub fn max_per_window(&self) -> usize {
        match (self.symbol, self.tiling) {
            (Symbol::Base(_), _) => self.window_length,
            (Symbol::Doublet(_), Tiling::Disjoint) => self.window_length / 2,
            (Symbol::Doublet(_), Tiling::Overlapping) => self.window_length.saturating_sub(1),
        }
    }
}

/// Reads codons from `frame` and keeps their first two bases. A trailing
/// partial codon is kept verbatim; bases before the frame offset are dropped.
pub fn drop_third_base(seq: &Sequence, frame: usize) -> Result<Sequence, KmerError> {
    if frame > 2 {
        return Err(KmerError::InvalidFrame(frame));
    }
    let residues = seq.residues();
    if residues.len() < frame + 3 {
        return Err(KmerError::TooShort { length: residues.len(), needed: frame + 3 });
    }
    let body = &residues[frame..];
    let mut out = Vec::with_capacity(body.len() * 2 / 3 + 2);
    let mut codons = body.chunks_exact(3);
    for codon in &mut codons {
        out.extend_from_slice(&codon[..2]);
    }
    out.extend_from_slice(codons.remainder());
    Ok(seq.with_residues(out))
}

/// Keeps the first base of every consecutive pair.
pub fn drop_second_base(seq: &Sequence) -> Result<Sequence, KmerError> {
    let residues = seq.residues();
    if !residues.len().is_multiple_of(2) {
        return Err(KmerError::OddLength(residues.len()));
    }
    Ok(seq.with_residues(residues.iter().step_by(2).copied().collect()))
}

fn tally_doublets(window: &[Base], tiling: Tiling) -> [u32; Doublet::COUNT] {
    let mut tally = [0u32; Doublet::COUNT];
    let mut bump = |a: Base, b: Base| {
        if let Some(d) = Doublet::new(a, b) {
            tally[d.index()] += 1;
        }
    };
    match tiling {
        Tiling::Disjoint => window.chunks_exact(2).for_each(|p| bump(p[0], p[1])),
        Tiling::Overlapping => window.windows(2).for_each(|p| bump(p[0], p[1])),
    }
    tally
}

/// Sixteen series, one per doublet in canonical order, each holding one count
/// per window.
pub fn window_doublet_counts(
    seq: &Sequence,
    window_length: usize,
    tiling: Tiling,
) -> Result<Vec<CountSeries>, KmerError> {
    if window_length < 2 || !window_length.is_multiple_of(2) {
        return Err(KmerError::OddWindow(window_length));
    }
    if seq.len() < window_length {
        return Err(KmerError::SequenceTooShort { length: seq.len(), window: window_length });
    }
    let per_window: Vec<[u32; Doublet::COUNT]> =
        seq.residues().par_chunks_exact(window_length).map(|w| tally_doublets(w, tiling)).collect();
    Ok(Doublet::all()
        .map(|d| CountSeries {
            symbol: Symbol::Doublet(d),
            counts: per_window.iter().map(|t| t[d.index()]).collect(),
            window_length,
            tiling,
            source_id: seq.id().to_string(),
        })
        .collect())
}

/// Four series for A, T, G, C, one count per window.
pub fn window_base_counts(seq: &Sequence, window_length: usize) -> Result<Vec<CountSeries>, KmerError> {
    if window_length == 0 {
        return Err(KmerError::ZeroWindow);
    }
    if seq.len() < window_length {
        return Err(KmerError::SequenceTooShort { length: seq.len(), window: window_length });
    }
    let per_window: Vec<[u32; 4]> = seq
        .residues()
        .par_chunks_exact(window_length)
        .map(|w| {
            let mut tally = [0u32; 4];
            for i in w.iter().filter_map(|b| b.atgc_index()) {
                tally[i] += 1;
            }
            tally
        })
        .collect();
    Ok(Base::ATGC
        .iter()
        .enumerate()
        .map(|(i, &b)| CountSeries {
            symbol: Symbol::Base(b),
            counts: per_window.iter().map(|t| t[i]).collect(),
            window_length,
            tiling: Tiling::Disjoint,
            source_id: seq.id().to_string(),
        })
        .collect())
}

/// 1-based indices of complete windows that contain at least one `N`.
pub fn ambiguous_windows(seq: &Sequence, window_length: usize) -> Vec<usize> {
    if window_length == 0 {
        return Vec::new();
    }
    seq.residues()
        .chunks_exact(window_length)
        .enumerate()
        .filter(|(_, w)| w.contains(&Base::N))
        .map(|(i, _)| i + 1)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub a: usize,
    pub t: usize,
    pub g: usize,
    pub c: usize,
    pub n: usize,
    pub a_plus_g: usize,
    pub t_plus_c: usize,
    /// (A+G) - (T+C)
    pub deviation: i64,
}

pub fn chargaff_report(seq: &Sequence) -> Composition {
    let mut tally = [0usize; 5];
    for b in seq.residues() {
        tally[b.atgc_index().unwrap_or(4)] += 1;
    }
    let [a, t, g, c, n] = tally;
    Composition { a, t, g, c, n, a_plus_g: a + g, t_plus_c: t + c, deviation: (a + g) as i64 - (t + c) as i64 }
}

/// `symbol,window_index,count` rows sorted by symbol then window.
pub fn counts_to_csv(series: &[CountSeries]) -> String {
    let mut sorted: Vec<&CountSeries> = series.iter().collect();
    sorted.sort_by_key(|s| s.symbol.sort_key());
    let mut out = String::from("symbol,window_index,count\n");
    for s in sorted {
        for (i, c) in s.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", s.symbol, i + 1, c));
        }
    }
    out
}
