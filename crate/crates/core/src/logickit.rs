//! Truth tables over the four base bit-strings and disjunction validity reports.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::binarizer::BitString;
use crate::seqio::Base;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("bit-strings differ in length (A={0}, T={1}, G={2}, C={3})", .lengths[0], .lengths[1], .lengths[2], .lengths[3])]
    LengthMismatch { lengths: [usize; 4] },
    #[error("bit-strings are empty")]
    EmptyInput,
    #[error("disjunction needs at least one of A, T, G, C")]
    EmptyDisjunction,
    #[error("cannot parse disjunction {0:?}")]
    BadDisjunction(String),
    #[error("range [{start},{end}] outside lines 1..={lines}")]
    RangeOutOfBounds { start: usize, end: usize, lines: usize },
}

/// OR over a nonempty subset of {A, T, G, C}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disjunction(u8);

impl Disjunction {
    pub fn new(atoms: &[Base]) -> Result<Disjunction, LogicError> {
        let mut mask = 0u8;
        for b in atoms {
            let i = b.atgc_index().ok_or(LogicError::EmptyDisjunction)?;
            mask |= 1 << i;
        }
        if mask == 0 {
            return Err(LogicError::EmptyDisjunction);
        }
        Ok(Disjunction(mask))
    }

    pub fn all_bases() -> Disjunction {
        Disjunction(0b1111)
    }

    /// A∨T, T∨G, G∨C, A∨C, A∨T∨G∨C
    pub fn default_columns() -> Vec<Disjunction> {
        [0b0011, 0b0110, 0b1100, 0b1001, 0b1111].into_iter().map(Disjunction).collect()
    }

    pub fn atoms(self) -> impl Iterator<Item = Base> {
        Base::ATGC.into_iter().enumerate().filter(move |(i, _)| self.0 & (1 << i) != 0).map(|(_, b)| b)
    }

    pub fn contains(self, base: Base) -> bool {
        base.atgc_index().is_some_and(|i| self.0 & (1 << i) != 0)
    }

    pub fn is_subset_of(self, other: Disjunction) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Display for Disjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.atoms().map(|b| b.to_string()).collect();
        f.write_str(&names.join("∨"))
    }
}

impl Serialize for Disjunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts atom letters joined by `∨`, `|`, `+`, `v` or nothing: "A∨T", "A|T", "AT".
impl FromStr for Disjunction {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut atoms = Vec::new();
        for ch in s.chars() {
            match ch {
                '∨' | '|' | '+' | 'v' | ' ' => continue,
                'A' | 'T' | 'G' | 'C' => atoms.push(Base::from_byte(ch as u8).unwrap()),
                _ => return Err(LogicError::BadDisjunction(s.to_string())),
            }
        }
        Disjunction::new(&atoms).map_err(|_| LogicError::BadDisjunction(s.to_string()))
    }
}

/// Atom values in A, T, G, C order.
pub type Atoms = [bool; 4];

pub fn eval_disjunction(atoms: Atoms, d: Disjunction) -> bool {
    (0..4).any(|i| d.0 & (1 << i) != 0 && atoms[i])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub line: usize,
    pub atoms: Atoms,
    pub derived: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub columns: Vec<Disjunction>,
    pub rows: Vec<TruthRow>,
}

fn tf(v: bool) -> &'static str {
    if v {
        "T"
    } else {
        "F"
    }
}

impl TruthTable {
    pub fn from_atom_rows(atom_rows: impl IntoIterator<Item = Atoms>, columns: &[Disjunction]) -> TruthTable {
        let rows = atom_rows
            .into_iter()
            .enumerate()
            .map(|(k, atoms)| TruthRow {
                line: k + 1,
                atoms,
                derived: columns.iter().map(|&d| eval_disjunction(atoms, d)).collect(),
            })
            .collect();
        TruthTable { columns: columns.to_vec(), rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn header(&self, sep: &str) -> String {
        let mut cols = vec!["line".to_string(), "A".into(), "T".into(), "G".into(), "C".into()];
        cols.extend(self.columns.iter().map(|d| d.to_string()));
        cols.join(sep)
    }

    fn row_cells(row: &TruthRow) -> Vec<String> {
        let mut cells = vec![row.line.to_string()];
        cells.extend(row.atoms.iter().chain(&row.derived).map(|&v| tf(v).to_string()));
        cells
    }

    /// `line,A,T,G,C,<disjunctions>` with T/F values.
    pub fn to_csv(&self) -> String {
        let mut out = self.header(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&Self::row_cells(row).join(","));
            out.push('\n');
        }
        out
    }

    /// Tab-separated display split into consecutive tables of `height` rows.
    /// Line numbers stay global across tables.
    pub fn render_tables(&self, height: usize) -> String {
        let height = height.max(1);
        let mut out = String::new();
        for (k, chunk) in self.rows.chunks(height).enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&format!("Table {}\n{}\n", k + 1, self.header("\t")));
            for row in chunk {
                out.push_str(&Self::row_cells(row).join("\t"));
                out.push('\n');
            }
        }
        out
    }
}

pub fn build_truth_table(
    bits_a: &BitString,
    bits_t: &BitString,
    bits_g: &BitString,
    bits_c: &BitString,
    columns: &[Disjunction],
) -> Result<TruthTable, LogicError> {
    let strings = [bits_a, bits_t, bits_g, bits_c];
    let lengths = strings.map(|b| b.len());
    if lengths.iter().any(|&l| l != lengths[0]) {
        return Err(LogicError::LengthMismatch { lengths });
    }
    if lengths[0] == 0 {
        return Err(LogicError::EmptyInput);
    }
    let atom_rows = (0..lengths[0]).map(|k| strings.map(|b| b.bits[k] == 1));
    Ok(TruthTable::from_atom_rows(atom_rows, columns))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeVerdict {
    pub range: [usize; 2],
    pub valid: bool,
    pub false_lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalVerdict {
    pub valid: bool,
    /// First line where the disjunction is false.
    pub counterexample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub disjunction: Disjunction,
    pub lines: usize,
    /// Maximal runs of consecutive true lines, inclusive.
    pub true_runs: Vec<[usize; 2]>,
    pub false_lines: Vec<usize>,
    pub verdicts: Vec<RangeVerdict>,
    /// Present only when no ranges were queried.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalVerdict>,
}

impl fmt::Display for RangeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.range;
        if self.valid {
            write!(f, "valid over [{a},{b}]")
        } else {
            write!(f, "not valid over [{a},{b}] (false on lines {:?})", self.false_lines)
        }
    }
}

pub fn validity_report(
    table: &TruthTable,
    d: Disjunction,
    ranges: &[(usize, usize)],
) -> Result<ValidityReport, LogicError> {
    let lines = table.len();
    for &(start, end) in ranges {
        if start < 1 || start > end || end > lines {
            return Err(LogicError::RangeOutOfBounds { start, end, lines });
        }
    }
    let values: Vec<bool> = table.rows.iter().map(|r| eval_disjunction(r.atoms, d)).collect();

    let mut true_runs = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        let line = i + 1;
        match (v, run_start) {
            (true, None) => run_start = Some(line),
            (false, Some(s)) => {
                true_runs.push([s, line - 1]);
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        true_runs.push([s, lines]);
    }
    let false_lines: Vec<usize> = values.iter().enumerate().filter(|(_, v)| !**v).map(|(i, _)| i + 1).collect();

    let verdicts = ranges
        .iter()
        .map(|&(a, b)| {
            let false_in: Vec<usize> = false_lines.iter().copied().filter(|&l| l >= a && l <= b).collect();
            RangeVerdict { range: [a, b], valid: false_in.is_empty(), false_lines: false_in }
        })
        .collect();
    let global = ranges
        .is_empty()
        .then(|| GlobalVerdict { valid: false_lines.is_empty(), counterexample: false_lines.first().copied() });

    Ok(ValidityReport { disjunction: d, lines, true_runs, false_lines, verdicts, global })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarizer::CorrelationPolicy;
    use crate::kmerstats::Symbol;

    fn bits(base: Base, bits: Vec<u8>) -> BitString {
        let n = bits.len();
        BitString {
            symbol: Symbol::Base(base),
            bits,
            zero_variance: vec![false; n],
            correlations: vec![None; n],
            policy: CorrelationPolicy::default(),
            source_series_length: 0,
        }
    }

    const F: bool = false;
    const T: bool = true;

    #[test]
    fn disjunction_rendering_and_parsing() {
        let names: Vec<String> = Disjunction::default_columns().iter().map(|d| d.to_string()).collect();
        assert_eq!(names, ["A∨T", "T∨G", "G∨C", "A∨C", "A∨T∨G∨C"]);
        assert_eq!("C|A".parse::<Disjunction>().unwrap().to_string(), "A∨C");
        assert_eq!("ATGC".parse::<Disjunction>().unwrap(), Disjunction::all_bases());
        assert_eq!("TvG".parse::<Disjunction>().unwrap().to_string(), "T∨G");
        assert!("".parse::<Disjunction>().is_err());
        assert!("AX".parse::<Disjunction>().is_err());
        assert_eq!(Disjunction::new(&[]), Err(LogicError::EmptyDisjunction));
    }

    #[test]
    fn eval_examples() {
        assert!(!eval_disjunction([F, F, F, F], Disjunction::all_bases()));
        assert!(eval_disjunction([F, F, F, T], "G∨C".parse().unwrap()));
        assert!(!eval_disjunction([T, F, F, F], "T∨G".parse().unwrap()));
    }

    #[test]
    fn table_rows_match_printed_lines() {
        let t = build_truth_table(
            &bits(Base::A, vec![0, 0]),
            &bits(Base::T, vec![0, 1]),
            &bits(Base::G, vec![0, 0]),
            &bits(Base::C, vec![0, 0]),
            &Disjunction::default_columns(),
        )
        .unwrap();
        assert_eq!(t.rows[0].derived, vec![F, F, F, F, F]);
        assert_eq!(t.rows[1].derived, vec![T, T, F, F, T]);
        assert_eq!(t.rows[1].line, 2);
        assert_eq!(t.to_csv().lines().next(), Some("line,A,T,G,C,A∨T,T∨G,G∨C,A∨C,A∨T∨G∨C"));
        assert_eq!(t.to_csv().lines().nth(2), Some("2,F,T,F,F,T,T,F,F,T"));
    }

    #[test]
    fn length_mismatch() {
        let three = |b| bits(b, vec![0, 1, 0]);
        assert_eq!(
            build_truth_table(&three(Base::A), &three(Base::T), &three(Base::G), &bits(Base::C, vec![0; 4]), &[]),
            Err(LogicError::LengthMismatch { lengths: [3, 3, 3, 4] })
        );
        let empty = |b| bits(b, vec![]);
        assert_eq!(
            build_truth_table(&empty(Base::A), &empty(Base::T), &empty(Base::G), &empty(Base::C), &[]),
            Err(LogicError::EmptyInput)
        );
    }

    fn table_true_on(lines: usize, true_lines: impl Fn(usize) -> bool) -> TruthTable {
        TruthTable::from_atom_rows((1..=lines).map(|l| [true_lines(l), F, F, F]), &[Disjunction::all_bases()])
    }

    #[test]
    fn range_verdicts() {
        let t = table_true_on(16, |l| l >= 9);
        let r = validity_report(&t, Disjunction::all_bases(), &[(9, 16), (8, 16)]).unwrap();
        assert_eq!(r.true_runs, vec![[9, 16]]);
        assert_eq!(r.false_lines, (1..=8).collect::<Vec<_>>());
        assert!(r.verdicts[0].valid);
        assert_eq!(r.verdicts[0].to_string(), "valid over [9,16]");
        assert!(!r.verdicts[1].valid);
        assert_eq!(r.verdicts[1].false_lines, vec![8]);
        assert!(r.global.is_none());
    }

    #[test]
    fn global_verdict_and_runs() {
        let t = table_true_on(10, |l| l != 1 && l != 5);
        let r = validity_report(&t, Disjunction::all_bases(), &[]).unwrap();
        assert_eq!(r.true_runs, vec![[2, 4], [6, 10]]);
        assert_eq!(r.global, Some(GlobalVerdict { valid: false, counterexample: Some(1) }));
        let all = validity_report(&table_true_on(3, |_| true), Disjunction::all_bases(), &[]).unwrap();
        assert_eq!(all.global, Some(GlobalVerdict { valid: true, counterexample: None }));
    }

    #[test]
    fn range_bounds() {
        let t = table_true_on(10, |_| true);
        assert_eq!(
            validity_report(&t, Disjunction::all_bases(), &[(0, 5)]),
            Err(LogicError::RangeOutOfBounds { start: 0, end: 5, lines: 10 })
        );
        assert!(validity_report(&t, Disjunction::all_bases(), &[(3, 11)]).is_err());
        assert!(validity_report(&t, Disjunction::all_bases(), &[(5, 3)]).is_err());
    }

    #[test]
    fn split_display() {
        let t = table_true_on(20, |_| true);
        let text = t.render_tables(16);
        assert!(text.contains("Table 1\n"));
        assert!(text.contains("Table 2\nline\tA"));
        assert!(text.contains("\n17\tT"));
    }
}
