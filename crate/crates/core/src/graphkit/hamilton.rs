use serde::Serialize;

use super::{AdjacencyMatrix, Path};

/// Exact number of directed Hamiltonian paths, any start and any end.
///
/// `ways[mask][v]` counts simple paths that visit exactly the vertices in
/// `mask` and end at `v`. O(2^n · n²) time, 2^n · n words of memory.
pub fn count_hamiltonian_paths(m: &AdjacencyMatrix) -> u64 {
    let n = m.n();
    let succ = m.out_masks();
    let full = (1usize << n) - 1;
    let mut ways = vec![0u64; (1 << n) * n];
    for v in 0..n {
        ways[(1 << v) * n + v] = 1;
    }
    for mask in 1..=full {
        let row = mask * n;
        for v in 0..n {
            let w = ways[row + v];
            if w == 0 {
                continue;
            }
            let mut next = succ[v] as usize & !mask;
            while next != 0 {
                let u = next.trailing_zeros() as usize;
                next &= next - 1;
                ways[(mask | (1 << u)) * n + u] += w;
            }
        }
    }
    ways[full * n..].iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub limit: usize,
    /// 1-based required first vertex.
    pub start: Option<usize>,
    /// 1-based required last vertex.
    pub end: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { limit: usize::MAX, start: None, end: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub paths: Vec<Path>,
    /// Set when more paths exist beyond `limit`.
    pub truncated: bool,
}

struct Search<'a> {
    n: usize,
    succ: &'a [u32],
    end: Option<usize>,
    limit: usize,
    stack: Vec<usize>,
    found: Vec<Path>,
    truncated: bool,
}

impl Search<'_> {
    // Returns false once the search should stop.
    fn extend(&mut self, visited: u32) -> bool {
        let last = *self.stack.last().expect("stack seeded with a start vertex");
        if self.stack.len() == self.n {
            if self.end.is_some_and(|e| e != last) {
                return true;
            }
            if self.found.len() == self.limit {
                self.truncated = true;
                return false;
            }
            self.found.push(Path(self.stack.iter().map(|v| v + 1).collect()));
            return true;
        }
        let mut next = self.succ[last] & !visited;
        if let Some(e) = self.end {
            // the required end vertex may only be placed last
            if self.stack.len() + 1 < self.n {
                next &= !(1 << e);
            }
        }
        while next != 0 {
            let u = next.trailing_zeros() as usize;
            next &= next - 1;
            self.stack.push(u);
            let keep_going = self.extend(visited | (1 << u));
            self.stack.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Backtracking enumeration in lexicographic order of vertex sequences.
pub fn enumerate_hamiltonian_paths(m: &AdjacencyMatrix, options: &EnumerateOptions) -> Enumeration {
    let n = m.n();
    let succ = m.out_masks();
    let in_range = |v: usize| (1..=n).contains(&v);
    let empty = Enumeration { paths: Vec::new(), truncated: false };
    if options.start.is_some_and(|s| !in_range(s)) || options.end.is_some_and(|e| !in_range(e)) {
        return empty;
    }
    let mut search = Search {
        n,
        succ: &succ,
        end: options.end.map(|e| e - 1),
        limit: options.limit,
        stack: Vec::with_capacity(n),
        found: Vec::new(),
        truncated: false,
    };
    let starts: Vec<usize> = match options.start {
        Some(s) => vec![s - 1],
        None => (0..n).collect(),
    };
    for s in starts {
        if n > 1 && search.end == Some(s) {
            continue;
        }
        search.stack.push(s);
        let keep_going = search.extend(1 << s);
        search.stack.pop();
        if !keep_going {
            break;
        }
    }
    Enumeration { paths: search.found, truncated: search.truncated }
}
