//! Bulk random-walk generation followed by Adleman's filter stages.
//!
//! Each walk starts at a uniformly chosen vertex and takes up to `n - 1`
//! steps, sampling uniformly among the current vertex's out-edges (self-loops
//! excluded). A walk that reaches a vertex with no out-edges dies and leaves
//! the pool. Survivors are then filtered by start vertex, end vertex, length
//! and full vertex coverage.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AdjacencyMatrix, GraphError, Path};

pub const MAX_REPORTED_SURVIVORS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    /// 1-based.
    pub start: usize,
    /// 1-based.
    pub end: usize,
    pub population: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub survivors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub n: usize,
    pub walk_model: &'static str,
    pub stages: Vec<Stage>,
    pub distinct_survivors: usize,
    /// Up to [`MAX_REPORTED_SURVIVORS`] distinct final paths, lexicographic.
    pub survivor_paths: Vec<Path>,
    pub warnings: Vec<String>,
}

impl SimulationReport {
    pub fn final_survivors(&self) -> usize {
        self.stages.last().map_or(0, |s| s.survivors)
    }
}

pub fn adleman_simulate(m: &AdjacencyMatrix, config: &SimulationConfig) -> Result<SimulationReport, GraphError> {
    let n = m.n();
    for v in [config.start, config.end] {
        if !(1..=n).contains(&v) {
            return Err(GraphError::IndexOutOfRange { vertex: v, n });
        }
    }
    if config.population == 0 {
        return Err(GraphError::InvalidPopulation);
    }

    let succ: Vec<Vec<u8>> =
        m.out_masks().into_iter().map(|mask| (0..n as u8).filter(|&j| mask & (1 << j) != 0).collect()).collect();
    let mut warnings = Vec::new();
    if n > 1 && succ[config.start - 1].is_empty() {
        warnings.push(format!("NoOutEdges: start vertex {} has no out-edges; every walk from it dies", config.start));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pool: Vec<Vec<u8>> = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let mut walk = Vec::with_capacity(n);
        walk.push(rng.random_range(0..n) as u8);
        let mut alive = true;
        while walk.len() < n {
            let options = &succ[*walk.last().unwrap() as usize];
            if options.is_empty() {
                alive = false;
                break;
            }
            walk.push(options[rng.random_range(0..options.len())]);
        }
        if alive {
            pool.push(walk);
        }
    }

    let mut stages = vec![
        Stage { name: "generated", survivors: config.population },
        Stage { name: "survived_ligation", survivors: pool.len() },
    ];
    let (start, end) = ((config.start - 1) as u8, (config.end - 1) as u8);
    let mut filter = |name: &'static str, keep: &dyn Fn(&[u8]) -> bool| {
        pool.retain(|w| keep(w));
        stages.push(Stage { name, survivors: pool.len() });
    };
    filter("starts_at_start", &|w| w.first() == Some(&start));
    filter("ends_at_end", &|w| w.last() == Some(&end));
    filter("length_n", &|w| w.len() == n);
    filter("visits_every_vertex", &|w| w.iter().fold(0u32, |acc, &v| acc | (1 << v)).count_ones() as usize == n);

    let distinct: BTreeSet<&Vec<u8>> = pool.iter().collect();
    let survivor_paths = distinct
        .iter()
        .take(MAX_REPORTED_SURVIVORS)
        .map(|w| Path(w.iter().map(|&v| v as usize + 1).collect()))
        .collect();

    Ok(SimulationReport {
        config: *config,
        n,
        walk_model: "uniform-start uniform-out-edge; dead ends discarded",
        stages,
        distinct_survivors: distinct.len(),
        survivor_paths,
        warnings,
    })
}
