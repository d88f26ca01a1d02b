//! Embedded golden checks run by `helix selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binarizer::{
    block_binarize, pearson_counts, threshold_bit, BitString, CorrelationPolicy, DEFAULT_THRESHOLD,
};
use crate::golden::{engineered_sequence, reference_matrix, REFERENCE_PATH, REFERENCE_ROWS};
use crate::graphkit::{
    adleman_simulate, build_adjacency, count_hamiltonian_paths, enumerate_hamiltonian_paths, to_dot, verify_path,
    AdjacencyMatrix, EnumerateOptions, Path, PathVerdict, SimulationConfig,
};
use crate::kmerstats::{window_doublet_counts, Doublet, Symbol, Tiling};

/// Knobs that let the checks be run against a deliberately altered build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub threshold: f64,
    /// Read bit-strings as rows instead of columns.
    pub transpose: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { threshold: DEFAULT_THRESHOLD, transpose: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, passed, detail: detail.into() }
}

fn reference_bitstrings() -> Vec<BitString> {
    (0..7)
        .map(|col| {
            let mut bits: Vec<u8> = REFERENCE_ROWS.iter().map(|row| row[col]).collect();
            bits.resize(35, 0);
            BitString {
                symbol: Symbol::Doublet(Doublet::from_index(col).unwrap()),
                zero_variance: vec![false; bits.len()],
                correlations: vec![None; bits.len()],
                bits,
                policy: CorrelationPolicy::default(),
                source_series_length: 175,
            }
        })
        .collect()
}

fn random_digraph(rng: &mut ChaCha8Rng, n: usize) -> AdjacencyMatrix {
    let density = rng.random_range(0.2..0.9);
    let entries = (0..n * n).map(|_| u8::from(rng.random_bool(density))).collect();
    AdjacencyMatrix::new(n, entries).unwrap()
}

pub fn run_selftest(options: &SelftestOptions) -> Vec<CheckResult> {
    let mut results = Vec::new();
    let reference = reference_matrix();
    let policy = CorrelationPolicy { threshold: options.threshold, ..CorrelationPolicy::default() };

    let built = match build_adjacency(&reference_bitstrings(), 7) {
        Ok(m) if options.transpose => Some(m.transposed()),
        Ok(m) => Some(m),
        Err(_) => None,
    };
    results.push(check(
        "reference-matrix-build",
        built.as_ref() == Some(&reference),
        "7 reference bit-strings assemble into the 7x7 reference matrix",
    ));

    let path = Path(REFERENCE_PATH.to_vec());
    let verdict = built.as_ref().map(|m| verify_path(m, &path));
    results.push(check(
        "reference-path",
        matches!(verdict, Some(Ok(PathVerdict::Hamiltonian))),
        format!("path {path} on the built matrix: {verdict:?}"),
    ));

    let listed = built
        .as_ref()
        .map(|m| enumerate_hamiltonian_paths(m, &EnumerateOptions { limit: 100, start: Some(7), end: Some(3) }));
    results.push(check(
        "reference-path-enumeration",
        listed.as_ref().is_some_and(|e| e.paths.contains(&path)),
        format!("paths 7 -> 3 listed: {}", listed.as_ref().map_or(0, |e| e.paths.len())),
    ));

    let edges = to_dot(&reference).matches("->").count();
    results.push(check("reference-dot-edges", edges == 23, format!("{edges} edges exported")));

    let half = pearson_counts(&[1, 2, 3], &[1, 3, 2]);
    let threshold_ok = half == Ok(0.5)
        && threshold_bit(0.5, &policy) == 1
        && threshold_bit(-0.5, &policy) == 1
        && threshold_bit(0.49, &policy) == 0;
    results.push(check(
        "threshold-golden",
        threshold_ok,
        format!("r = 0.50 -> 1, r = -0.50 -> 1, r = 0.49 -> 0 at threshold {}", options.threshold),
    ));

    let pipeline_bits = window_doublet_counts(&engineered_sequence(), 20, Tiling::Disjoint)
        .ok()
        .and_then(|counts| counts.iter().map(|s| block_binarize(s, &policy).ok()).collect::<Option<Vec<_>>>())
        .and_then(|bits| build_adjacency(&bits, 7).ok());
    results.push(check(
        "engineered-pipeline-bits",
        pipeline_bits.as_ref() == Some(&reference),
        "engineered sequence -> counts -> bits -> reference matrix",
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    let mut graphs = 0;
    for n in 1..=6 {
        for _ in 0..20 {
            let m = random_digraph(&mut rng, n);
            let listed = enumerate_hamiltonian_paths(&m, &EnumerateOptions::default());
            if count_hamiltonian_paths(&m) != listed.paths.len() as u64 {
                mismatches += 1;
            }
            graphs += 1;
        }
    }
    results.push(check(
        "hamiltonian-oracle",
        mismatches == 0,
        format!("DP count vs enumeration on {graphs} random digraphs: {mismatches} mismatches"),
    ));

    let complete = AdjacencyMatrix::new(6, (0..36).map(|k| u8::from(k / 6 != k % 6)).collect()).unwrap();
    let k6 = count_hamiltonian_paths(&complete);
    results.push(check("complete-digraph", k6 == 720, format!("K6 paths = {k6} (6! = 720)")));

    let sim_cfg = SimulationConfig { start: 7, end: 3, population: 20_000, seed: 42 };
    let first = adleman_simulate(&reference, &sim_cfg);
    let second = adleman_simulate(&reference, &sim_cfg);
    let sim_ok = match (&first, &second) {
        (Ok(a), Ok(b)) => {
            a == b
                && a.final_survivors() > 0
                && a.survivor_paths.iter().all(|p| verify_path(&reference, p) == Ok(PathVerdict::Hamiltonian))
        }
        _ => false,
    };
    results.push(check(
        "simulation-determinism",
        sim_ok,
        format!("seed 42 survivors: {}", first.as_ref().map_or(0, |r| r.final_survivors())),
    ));

    results
}
