//! Directed 0/1 adjacency matrices built from doublet bit-strings, and the
//! Hamiltonian path machinery that runs on them.
//!
//! Vertices are 1-based in every public interface. `M[i][j] = 1` is an edge
//! from row vertex `i` to column vertex `j`. Self-loops are stored but never
//! used by path algorithms.

mod adleman;
mod hamilton;

use serde::Serialize;
use thiserror::Error;

use crate::binarizer::BitString;
use crate::kmerstats::{Doublet, Symbol};

pub use adleman::{adleman_simulate, SimulationConfig, SimulationReport, Stage, MAX_REPORTED_SURVIVORS};
pub use hamilton::{count_hamiltonian_paths, enumerate_hamiltonian_paths, EnumerateOptions, Enumeration};

pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..=16")]
    InvalidSize(usize),
    #[error("matrix entry at ({row}, {col}) is {value}, expected 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u8 },
    #[error("expected {expected} matrix entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("need {needed} bit-strings, got {got}")]
    NotEnoughBitstrings { needed: usize, got: usize },
    #[error("bit-string {symbol} has {len} bits, need {needed}")]
    BitstringTooShort { symbol: String, len: usize, needed: usize },
    #[error("bit-string {0} is not a doublet series")]
    NotADoublet(String),
    #[error("column labels must be distinct and in canonical doublet order")]
    LabelOrder,
    #[error("vertex {vertex} outside 1..={n}")]
    IndexOutOfRange { vertex: usize, n: usize },
    #[error("path is empty")]
    EmptyPath,
    #[error("population must be at least 1")]
    InvalidPopulation,
    #[error("malformed matrix CSV: {0}")]
    MalformedCsv(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
    column_labels: Vec<Doublet>,
}

impl AdjacencyMatrix {
    /// Builds from row-major entries; columns are labelled with the first `n`
    /// canonical doublets.
    pub fn new(n: usize, entries: Vec<u8>) -> Result<AdjacencyMatrix, GraphError> {
        let labels = Doublet::all().take(n).collect();
        AdjacencyMatrix::with_labels(n, entries, labels)
    }

    pub fn with_labels(n: usize, entries: Vec<u8>, column_labels: Vec<Doublet>) -> Result<AdjacencyMatrix, GraphError> {
        if !(1..=MAX_VERTICES).contains(&n) {
            return Err(GraphError::InvalidSize(n));
        }
        if entries.len() != n * n {
            return Err(GraphError::ShapeMismatch { expected: n * n, got: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|&v| v > 1) {
            return Err(GraphError::InvalidEntry { row: pos / n + 1, col: pos % n + 1, value: entries[pos] });
        }
        if column_labels.len() != n || column_labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::LabelOrder);
        }
        Ok(AdjacencyMatrix { n, entries, column_labels })
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<AdjacencyMatrix, GraphError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(GraphError::ShapeMismatch { expected: n, got: bad.len() });
        }
        AdjacencyMatrix::new(n, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn column_labels(&self) -> &[Doublet] {
        &self.column_labels
    }

    /// Entry for 1-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[(row - 1) * self.n + (col - 1)]
    }

    /// True when there is a usable (non-self-loop) edge `from → to`, 1-based.
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from != to && self.get(from, to) == 1
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks_exact(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v == 1).count()
    }

    pub fn transposed(&self) -> AdjacencyMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n]).collect();
        AdjacencyMatrix { n, entries, column_labels: self.column_labels.clone() }
    }

    /// 0-based successor bitmasks, self-loops removed.
    pub(crate) fn out_masks(&self) -> Vec<u32> {
        self.rows()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().filter(|&(j, &v)| v == 1 && j != i).fold(0u32, |acc, (j, _)| acc | (1 << j))
            })
            .collect()
    }

    /// `n` on the first line, then one comma-separated 0/1 row per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<AdjacencyMatrix, GraphError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| GraphError::MalformedCsv("first line must be the vertex count".into()))?;
        let mut entries = Vec::with_capacity(n * n);
        for line in lines {
            for cell in line.split(',') {
                let v =
                    cell.trim().parse::<u8>().map_err(|_| GraphError::MalformedCsv(format!("bad cell {cell:?}")))?;
                entries.push(v);
            }
        }
        AdjacencyMatrix::new(n, entries)
    }
}

/// Column `j` is the first `n` bits of the `j`-th bit-string.
pub fn build_adjacency(bitstrings: &[BitString], n: usize) -> Result<AdjacencyMatrix, GraphError> {
    if !(1..=MAX_VERTICES).contains(&n) {
        return Err(GraphError::InvalidSize(n));
    }
    if bitstrings.len() < n {
        return Err(GraphError::NotEnoughBitstrings { needed: n, got: bitstrings.len() });
    }
    let used = &bitstrings[..n];
    let mut labels = Vec::with_capacity(n);
    for b in used {
        match b.symbol {
            Symbol::Doublet(d) => labels.push(d),
            other => return Err(GraphError::NotADoublet(other.to_string())),
        }
        if b.bits.len() < n {
            return Err(GraphError::BitstringTooShort { symbol: b.symbol.to_string(), len: b.bits.len(), needed: n });
        }
    }
    let mut entries = vec![0u8; n * n];
    for (col, b) in used.iter().enumerate() {
        for (row, &bit) in b.bits[..n].iter().enumerate() {
            entries[row * n + col] = bit;
        }
    }
    AdjacencyMatrix::with_labels(n, entries, labels)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" - "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathVerdict {
    Hamiltonian,
    NotAPath,
    NotHamiltonian,
}

pub fn verify_path(m: &AdjacencyMatrix, path: &Path) -> Result<PathVerdict, GraphError> {
    let v = path.vertices();
    if v.is_empty() {
        return Err(GraphError::EmptyPath);
    }
    if let Some(&bad) = v.iter().find(|&&x| x < 1 || x > m.n()) {
        return Err(GraphError::IndexOutOfRange { vertex: bad, n: m.n() });
    }
    if v.windows(2).any(|e| !m.has_edge(e[0], e[1])) {
        return Ok(PathVerdict::NotAPath);
    }
    let seen = v.iter().fold(0u32, |acc, &x| acc | (1 << (x - 1)));
    if v.len() == m.n() && seen.count_ones() as usize == m.n() {
        Ok(PathVerdict::Hamiltonian)
    } else {
        Ok(PathVerdict::NotHamiltonian)
    }
}

/// Graphviz digraph: every vertex, then every 1-entry (self-loops included),
/// both in ascending index order.
pub fn to_dot(m: &AdjacencyMatrix) -> String {
    let mut out = String::from("digraph adjacency {\n");
    for v in 1..=m.n() {
        out.push_str(&format!("  {v} [label=\"{v}\"];\n"));
    }
    for i in 1..=m.n() {
        for j in 1..=m.n() {
            if m.get(i, j) == 1 {
                out.push_str(&format!("  {i} -> {j};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarizer::CorrelationPolicy;
    use crate::golden::{REFERENCE_PATH, REFERENCE_ROWS};

    fn fig1() -> AdjacencyMatrix {
        let rows: Vec<&[u8]> = REFERENCE_ROWS.iter().map(|r| &r[..]).collect();
        AdjacencyMatrix::from_rows(&rows).unwrap()
    }

    fn bitstring(d: usize, bits: Vec<u8>) -> BitString {
        let len = bits.len();
        BitString {
            symbol: Symbol::Doublet(Doublet::from_index(d).unwrap()),
            zero_variance: vec![false; len],
            correlations: vec![None; len],
            bits,
            policy: CorrelationPolicy::default(),
            source_series_length: 175,
        }
    }

    #[test]
    fn build_reproduces_columns() {
        let m = fig1();
        let strings: Vec<BitString> = (0..7)
            .map(|j| {
                let mut col: Vec<u8> = (1..=7).map(|i| m.get(i, j + 1)).collect();
                col.extend([1, 0, 1]);
                bitstring(j, col)
            })
            .collect();
        let built = build_adjacency(&strings, 7).unwrap();
        assert_eq!(built, m);
        assert_eq!(
            built.column_labels().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            ["AA", "AT", "AG", "AC", "TA", "TT", "TG"]
        );
    }

    #[test]
    fn build_edge_cases() {
        let one = build_adjacency(&[bitstring(0, vec![1, 0, 0])], 1).unwrap();
        assert_eq!(one.to_csv(), "1\n1\n");
        let short: Vec<BitString> = (0..3).map(|j| bitstring(j, vec![1, 0])).collect();
        assert!(matches!(build_adjacency(&short, 3), Err(GraphError::BitstringTooShort { len: 2, needed: 3, .. })));
        assert_eq!(build_adjacency(&short, 4), Err(GraphError::NotEnoughBitstrings { needed: 4, got: 3 }));
        assert_eq!(build_adjacency(&short, 0), Err(GraphError::InvalidSize(0)));
        let unordered = vec![bitstring(1, vec![1, 1]), bitstring(0, vec![1, 1])];
        assert_eq!(build_adjacency(&unordered, 2), Err(GraphError::LabelOrder));
    }

    #[test]
    fn verify_examples() {
        let m = fig1();
        assert_eq!(verify_path(&m, &Path(REFERENCE_PATH.to_vec())).unwrap(), PathVerdict::Hamiltonian);
        assert_eq!(verify_path(&m, &Path(vec![3, 6, 5, 2, 4, 1, 7])).unwrap(), PathVerdict::NotAPath);
        assert_eq!(verify_path(&m, &Path(vec![7, 1, 4, 2, 5, 6])).unwrap(), PathVerdict::NotHamiltonian);
        assert_eq!(verify_path(&m, &Path(vec![])), Err(GraphError::EmptyPath));
        assert_eq!(verify_path(&m, &Path(vec![1, 8])), Err(GraphError::IndexOutOfRange { vertex: 8, n: 7 }));
        // M[2][2] = 1 but self-loops are not edges
        assert_eq!(verify_path(&m, &Path(vec![2, 2])).unwrap(), PathVerdict::NotAPath);
    }

    #[test]
    fn revisiting_path_is_not_hamiltonian() {
        let m = AdjacencyMatrix::from_rows(&[&[0, 1, 0], &[1, 0, 1], &[0, 0, 0]]).unwrap();
        assert_eq!(verify_path(&m, &Path(vec![1, 2, 1])).unwrap(), PathVerdict::NotHamiltonian);
    }

    #[test]
    fn dot_output() {
        assert_eq!(to_dot(&AdjacencyMatrix::new(1, vec![0]).unwrap()), "digraph adjacency {\n  1 [label=\"1\"];\n}\n");
        let two = AdjacencyMatrix::new(2, vec![0, 1, 0, 0]).unwrap();
        assert_eq!(to_dot(&two).matches("->").count(), 1);
        assert!(to_dot(&two).contains("  1 -> 2;\n"));
        let dot = to_dot(&fig1());
        assert_eq!(dot.matches("label=").count(), 7);
        assert_eq!(dot.matches("->").count(), 23);
    }

    #[test]
    fn matrix_validation_and_csv() {
        assert!(matches!(
            AdjacencyMatrix::new(2, vec![0, 2, 0, 0]),
            Err(GraphError::InvalidEntry { row: 1, col: 2, value: 2 })
        ));
        assert!(matches!(AdjacencyMatrix::new(17, vec![0; 289]), Err(GraphError::InvalidSize(17))));
        assert!(matches!(AdjacencyMatrix::new(2, vec![0; 3]), Err(GraphError::ShapeMismatch { .. })));
        let m = fig1();
        assert_eq!(AdjacencyMatrix::from_csv(&m.to_csv()).unwrap(), m);
        assert!(m.to_csv().starts_with("7\n1,0,0,1,0,0,0\n"));
    }

    #[test]
    fn transpose_swaps_edges() {
        let m = fig1();
        let t = m.transposed();
        assert_eq!(m.get(7, 1), 1);
        assert_eq!(t.get(1, 7), 1);
        assert_eq!(t.get(7, 1), m.get(1, 7));
    }
}
