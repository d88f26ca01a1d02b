use helix_core::golden::{reference_matrix, REFERENCE_PATH};
use helix_core::graphkit::{
    adleman_simulate, count_hamiltonian_paths, enumerate_hamiltonian_paths, to_dot, verify_path, AdjacencyMatrix,
    EnumerateOptions, Path, PathVerdict, SimulationConfig,
};
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = AdjacencyMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.5), n * n)
            .prop_map(move |e| AdjacencyMatrix::new(n, e.into_iter().map(u8::from).collect()).unwrap())
    })
}

fn entries(m: &AdjacencyMatrix) -> Vec<u8> {
    m.rows().flatten().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn dp_count_equals_enumeration(m in digraph(8)) {
        let listed = enumerate_hamiltonian_paths(&m, &EnumerateOptions::default());
        prop_assert!(!listed.truncated);
        prop_assert_eq!(count_hamiltonian_paths(&m), listed.paths.len() as u64);
        for p in &listed.paths {
            prop_assert_eq!(verify_path(&m, p).unwrap(), PathVerdict::Hamiltonian);
        }
        let mut sorted = listed.paths.clone();
        sorted.sort();
        prop_assert_eq!(sorted, listed.paths);
    }

    #[test]
    fn count_is_invariant_under_relabeling(m in digraph(8), seed in any::<u64>()) {
        let n = m.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let e = entries(&m);
        let mut relabeled = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                relabeled[perm[r] * n + perm[c]] = e[r * n + c];
            }
        }
        let p = AdjacencyMatrix::new(n, relabeled).unwrap();
        prop_assert_eq!(count_hamiltonian_paths(&m), count_hamiltonian_paths(&p));
    }

    #[test]
    fn self_loops_never_matter(m in digraph(7), loops in prop::collection::vec(any::<bool>(), 7)) {
        let n = m.n();
        let mut e = entries(&m);
        for v in 0..n {
            e[v * n + v] = u8::from(loops[v]);
        }
        let toggled = AdjacencyMatrix::new(n, e).unwrap();
        prop_assert_eq!(count_hamiltonian_paths(&m), count_hamiltonian_paths(&toggled));
        let opts = EnumerateOptions::default();
        prop_assert_eq!(enumerate_hamiltonian_paths(&m, &opts), enumerate_hamiltonian_paths(&toggled, &opts));
    }

    #[test]
    fn enumeration_respects_limit_and_endpoints(m in digraph(6), limit in 1usize..20, s in 1usize..7, t in 1usize..7) {
        let n = m.n();
        prop_assume!(s <= n && t <= n);
        let all = enumerate_hamiltonian_paths(&m, &EnumerateOptions { limit: usize::MAX, start: Some(s), end: Some(t) });
        prop_assert!(all.paths.iter().all(|p| p.0[0] == s && p.0[n - 1] == t));
        let some = enumerate_hamiltonian_paths(&m, &EnumerateOptions { limit, start: Some(s), end: Some(t) });
        prop_assert_eq!(some.paths.len(), all.paths.len().min(limit));
        prop_assert_eq!(some.truncated, all.paths.len() > limit);
        prop_assert_eq!(&some.paths[..], &all.paths[..some.paths.len()]);
    }

    #[test]
    fn simulation_invariants(m in digraph(6), population in 1usize..3000, seed in any::<u64>(), s in 1usize..7, t in 1usize..7) {
        prop_assume!(s <= m.n() && t <= m.n());
        let report = adleman_simulate(&m, &SimulationConfig { start: s, end: t, population, seed }).unwrap();
        prop_assert_eq!(report.stages[0].survivors, population);
        prop_assert!(report.stages.windows(2).all(|w| w[1].survivors <= w[0].survivors));
        prop_assert!(report.distinct_survivors <= report.final_survivors());
        for p in &report.survivor_paths {
            prop_assert_eq!(verify_path(&m, p).unwrap(), PathVerdict::Hamiltonian);
            prop_assert_eq!((p.0[0], *p.0.last().unwrap()), (s, t));
        }
        if report.final_survivors() > 0 {
            let exhaustive = enumerate_hamiltonian_paths(&m, &EnumerateOptions { limit: usize::MAX, start: Some(s), end: Some(t) });
            prop_assert!(report.distinct_survivors <= exhaustive.paths.len());
        }
    }

    #[test]
    fn matrix_csv_round_trips(m in digraph(16)) {
        prop_assert_eq!(AdjacencyMatrix::from_csv(&m.to_csv()).unwrap(), m);
    }
}

#[test]
fn reference_matrix_has_the_reference_path() {
    let m = reference_matrix();
    assert_eq!(verify_path(&m, &Path(REFERENCE_PATH.to_vec())).unwrap(), PathVerdict::Hamiltonian);
    let reversed: Vec<usize> = REFERENCE_PATH.iter().rev().copied().collect();
    assert_ne!(verify_path(&m, &Path(reversed)).unwrap(), PathVerdict::Hamiltonian);
    assert_ne!(verify_path(&m.transposed(), &Path(REFERENCE_PATH.to_vec())).unwrap(), PathVerdict::Hamiltonian);
}

#[test]
fn dot_lists_every_edge_once() {
    let m = reference_matrix();
    let dot = to_dot(&m);
    for r in 1..=7 {
        for c in 1..=7 {
            let line = format!("  {r} -> {c};");
            assert_eq!(dot.lines().filter(|l| *l == line).count(), usize::from(m.get(r, c) == 1), "{line}");
        }
    }
}

#[test]
fn complete_digraphs_count_factorial() {
    let mut factorial = 1u64;
    for n in 1..=10usize {
        factorial *= n as u64;
        let m = AdjacencyMatrix::new(n, (0..n * n).map(|k| u8::from(k / n != k % n)).collect()).unwrap();
        assert_eq!(count_hamiltonian_paths(&m), factorial, "n = {n}");
    }
}
