use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use super::output::{input_digest, ArtifactEntry, ArtifactWriter};
use super::{at_stage, Format, PipelineError, PipelineKind, RunConfig};
use crate::binarizer::{bits_to_csv, block_binarize, BitString};
use crate::graphkit::{
    adleman_simulate, build_adjacency, count_hamiltonian_paths, enumerate_hamiltonian_paths, to_dot, verify_path,
    EnumerateOptions, PathVerdict, SimulationConfig,
};
use crate::kmerstats::{
    ambiguous_windows, chargaff_report, counts_to_csv, drop_second_base, drop_third_base, window_base_counts,
    window_doublet_counts, CountSeries,
};
use crate::logickit::{build_truth_table, validity_report, Disjunction};
use crate::seqio::{
    fetch_record, parse_fasta, parse_genbank, resolve_endpoint, write_fasta, FetchOptions, Orientation, Region,
    Sequence, FASTA_LINE_WIDTH,
};

/// Regions with a documented length: (name, start, end, stated length).
pub const REFERENCE_REGIONS: [(&str, usize, usize, usize); 2] =
    [("t4-algorithms", 165_400, 168_900, 3500), ("t4-logic", 167_101, 168_900, 4050)];

#[derive(Debug, Error)]
enum InputError {
    #[error("input is neither GenBank (LOCUS ...) nor FASTA (>...)")]
    UnknownFormat,
    #[error("input is not valid UTF-8 text")]
    NotText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub source: String,
    pub format: &'static str,
    pub accession: Option<String>,
    pub record_id: String,
    pub record_length: usize,
    pub requested_start: usize,
    pub requested_end: usize,
    pub strand: Orientation,
    pub length_override: Option<usize>,
    pub effective_start: usize,
    pub effective_end: usize,
    pub length: usize,
    pub input_digest: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedRegion {
    pub sequence: Sequence,
    pub provenance: Provenance,
}

fn read_source(cfg: &RunConfig) -> Result<(Vec<u8>, String), PipelineError> {
    if let Some(path) = &cfg.input {
        let bytes = std::fs::read(path).map_err(|e| PipelineError::Config(format!("cannot read input {path}: {e}")))?;
        return Ok((bytes, format!("file:{path}")));
    }
    let accession = cfg.accession.as_deref().ok_or_else(|| PipelineError::Config("no input source".into()))?;
    let endpoint = resolve_endpoint(cfg.endpoint.as_deref());
    let options = FetchOptions { timeout: std::time::Duration::from_secs(cfg.timeout_secs) };
    let bytes = fetch_record(accession, &endpoint, &options).map_err(at_stage("fetch"))?;
    Ok((bytes, format!("accession:{accession}")))
}

/// Reads the configured input and cuts out the configured region.
pub fn load_region(cfg: &RunConfig) -> Result<LoadedRegion, PipelineError> {
    let (bytes, source) = read_source(cfg)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| at_stage("parse")(InputError::NotText))?;
    let head = text.trim_start();
    let mut warnings = Vec::new();
    let (record, format, accession) = if head.starts_with("LOCUS") {
        let rec = parse_genbank(text).map_err(at_stage("parse"))?;
        (rec.sequence, "genbank", Some(rec.accession))
    } else if head.starts_with('>') {
        let mut records = parse_fasta(text).map_err(at_stage("parse"))?;
        if records.len() > 1 {
            warnings.push(format!("FASTA input holds {} records; only the first is analyzed", records.len()));
        }
        (records.swap_remove(0), "fasta", None)
    } else {
        return Err(at_stage("parse")(InputError::UnknownFormat));
    };

    let region = Region {
        start: cfg.region.start.unwrap_or(1),
        end: cfg.region.end.unwrap_or(record.len()),
        orientation: cfg.region.strand,
        length: cfg.region.length,
    };
    let (effective_start, effective_end) = region.effective_bounds().map_err(at_stage("region"))?;
    let sequence = region.apply(&record).map_err(at_stage("region"))?;

    if let Some(length) = region.length {
        if length != region.span() {
            warnings.push(format!(
                "coordinates {}-{} span {} bases; declared length {} applied from the 5' end (effective {}-{})",
                region.start,
                region.end,
                region.span(),
                length,
                effective_start,
                effective_end
            ));
        }
    }
    for (name, start, end, stated) in REFERENCE_REGIONS {
        if region.start == start && region.end == end && sequence.len() != stated {
            warnings.push(format!(
                "region {start}-{end} yields {} bases but reference region {name} is documented as {stated} bases",
                sequence.len()
            ));
        }
    }

    let provenance = Provenance {
        source,
        format,
        accession,
        record_id: record.id().to_string(),
        record_length: record.len(),
        requested_start: region.start,
        requested_end: region.end,
        strand: region.orientation,
        length_override: region.length,
        effective_start,
        effective_end,
        length: sequence.len(),
        input_digest: input_digest(&sequence),
        warnings,
    };
    Ok(LoadedRegion { sequence, provenance })
}

#[derive(Debug, Clone)]
pub struct IngestOutcome {
    pub sequence: Sequence,
    pub provenance: Provenance,
    pub artifacts: Vec<ArtifactEntry>,
}

/// Writes the extracted region as `region.fa` plus `provenance.json`.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<IngestOutcome, PipelineError> {
    let loaded = load_region(cfg)?;
    let mut writer = ArtifactWriter::create(&cfg.out)?;
    writer.write("region.fa", write_fasta(std::slice::from_ref(&loaded.sequence), FASTA_LINE_WIDTH).as_bytes())?;
    writer.write_enveloped("provenance.json", cfg, &loaded.provenance.input_digest, &loaded.provenance)?;
    Ok(IngestOutcome { sequence: loaded.sequence, provenance: loaded.provenance, artifacts: writer.entries })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub stage: &'static str,
    pub summary: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub pipeline: PipelineKind,
    pub config: RunConfig,
    pub input: Provenance,
    pub stages: Vec<StageSummary>,
    pub warnings: Vec<String>,
    pub artifacts: Vec<ArtifactEntry>,
}

impl RunReport {
    fn new(cfg: &RunConfig, input: Provenance) -> RunReport {
        let mut warnings = cfg.preset_warnings.clone();
        warnings.extend(input.warnings.iter().cloned());
        RunReport {
            tool: "helix",
            version: env!("CARGO_PKG_VERSION"),
            pipeline: cfg.pipeline,
            config: cfg.clone(),
            input,
            stages: Vec::new(),
            warnings,
            artifacts: Vec::new(),
        }
    }

    fn stage(&mut self, stage: &'static str, summary: serde_json::Value) {
        self.stages.push(StageSummary { stage, summary });
    }

    pub fn summary(&self, stage: &str) -> Option<&serde_json::Value> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| &s.summary)
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T, PipelineError> {
    if threads == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PipelineError::Config(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(job))
}

fn binarize_all(series: &[CountSeries], cfg: &RunConfig) -> Result<Vec<BitString>, PipelineError> {
    series
        .par_iter()
        .map(|s| block_binarize(s, &cfg.policy))
        .collect::<Result<Vec<_>, _>>()
        .map_err(at_stage("binarize"))
}

fn count_warnings(report: &mut RunReport, seq: &Sequence, window: usize, bits: &[BitString]) {
    let ambiguous = ambiguous_windows(seq, window);
    if !ambiguous.is_empty() {
        report.warnings.push(format!("{} windows contain N: {:?}", ambiguous.len(), ambiguous));
    }
    for b in bits {
        let zv = b.zero_variance_positions();
        if !zv.is_empty() {
            report.warnings.push(format!("{}: zero-variance blocks emitted as 0 at bits {:?}", b.symbol, zv));
        }
    }
}

fn write_counts_and_bits(
    writer: &mut ArtifactWriter,
    cfg: &RunConfig,
    digest: &str,
    counts: &[CountSeries],
    bits: &[BitString],
) -> Result<(), PipelineError> {
    if cfg.wants(Format::Csv) {
        writer.write("counts.csv", counts_to_csv(counts).as_bytes())?;
        writer.write("bits.csv", bits_to_csv(bits).as_bytes())?;
    }
    if cfg.wants(Format::Json) {
        writer.write_enveloped("bits.json", cfg, digest, &bits)?;
    }
    Ok(())
}

fn finish(mut writer: ArtifactWriter, mut report: RunReport) -> Result<RunReport, PipelineError> {
    report.artifacts = writer.entries.clone();
    writer.write_json("run_report.json", &report)?;
    Ok(report)
}

/// counts → bits → adjacency → Hamiltonian paths (→ optional simulation).
pub fn cmd_algorithms(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    if cfg.pipeline != PipelineKind::Algorithms {
        return Err(PipelineError::Config("cmd_algorithms needs an algorithms config".into()));
    }
    in_pool(cfg.threads, || run_algorithms(cfg))?
}

fn run_algorithms(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    let loaded = load_region(cfg)?;
    let digest = loaded.provenance.input_digest.clone();
    let mut report = RunReport::new(cfg, loaded.provenance);
    report.stage("composition", serde_json::to_value(chargaff_report(&loaded.sequence)).unwrap());

    let seq = if cfg.codon_thin {
        let thinned = drop_third_base(&loaded.sequence, 0).map_err(at_stage("codon-thin"))?;
        report.stage(
            "codon-thin",
            json!({ "frame": 0, "input_length": loaded.sequence.len(), "output_length": thinned.len() }),
        );
        thinned
    } else {
        loaded.sequence
    };

    let counts = window_doublet_counts(&seq, cfg.window, cfg.tiling).map_err(at_stage("count"))?;
    report.stage(
        "count",
        json!({ "series": counts.len(), "windows": counts[0].len(), "window_length": cfg.window, "tiling": cfg.tiling }),
    );
    let bits = binarize_all(&counts, cfg)?;
    report.stage(
        "binarize",
        json!({
            "bits_per_series": bits[0].len(),
            "blocks": counts[0].len() / cfg.policy.block_length,
            "pairing": cfg.policy.pairing,
            "threshold": cfg.policy.threshold,
            "zero_variance_bits": bits.iter().map(|b| b.zero_variance_positions().len()).sum::<usize>(),
        }),
    );
    count_warnings(&mut report, &seq, cfg.window, &bits);

    let matrix = build_adjacency(&bits, cfg.n).map_err(at_stage("adjacency"))?;
    report.stage(
        "adjacency",
        json!({ "n": matrix.n(), "edges": matrix.edge_count(), "columns": matrix.column_labels() }),
    );

    let count = count_hamiltonian_paths(&matrix);
    let options = EnumerateOptions { limit: cfg.path_limit, start: cfg.path_start, end: cfg.path_end };
    let listed = enumerate_hamiltonian_paths(&matrix, &options);
    let all_verified = listed.paths.iter().all(|p| matches!(verify_path(&matrix, p), Ok(PathVerdict::Hamiltonian)));
    let paths_data = json!({
        "n": matrix.n(),
        "hamiltonian_path_count": count,
        "start": cfg.path_start,
        "end": cfg.path_end,
        "limit": cfg.path_limit,
        "listed": listed.paths.len(),
        "truncated": listed.truncated,
        "all_verified": all_verified,
        "paths": listed.paths,
    });
    report.stage(
        "paths",
        json!({ "hamiltonian_path_count": count, "listed": listed.paths.len(), "truncated": listed.truncated }),
    );

    let simulation = if cfg.population > 0 {
        let sim_cfg = SimulationConfig {
            start: cfg.path_start.unwrap_or(1),
            end: cfg.path_end.unwrap_or(matrix.n()),
            population: cfg.population,
            seed: cfg.seed,
        };
        let sim = adleman_simulate(&matrix, &sim_cfg).map_err(at_stage("simulate"))?;
        report.stage(
            "simulate",
            json!({ "stages": sim.stages, "distinct_survivors": sim.distinct_survivors, "seed": cfg.seed }),
        );
        report.warnings.extend(sim.warnings.iter().cloned());
        Some(sim)
    } else {
        None
    };

    let mut writer = ArtifactWriter::create(&cfg.out)?;
    write_counts_and_bits(&mut writer, cfg, &digest, &counts, &bits)?;
    if cfg.wants(Format::Csv) {
        writer.write("matrix.csv", matrix.to_csv().as_bytes())?;
    }
    if cfg.wants(Format::Dot) {
        let config_line = serde_json::to_string(cfg).expect("config serializes");
        let dot = format!("// input_digest: {digest}\n// config: {config_line}\n{}", to_dot(&matrix));
        writer.write("graph.dot", dot.as_bytes())?;
    }
    if cfg.wants(Format::Json) {
        writer.write_enveloped("paths.json", cfg, &digest, &paths_data)?;
        if let Some(sim) = &simulation {
            writer.write_enveloped("simulation.json", cfg, &digest, sim)?;
        }
    }
    finish(writer, report)
}

/// counts → bits → truth table → validity reports.
pub fn cmd_logic(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    if cfg.pipeline != PipelineKind::Logic {
        return Err(PipelineError::Config("cmd_logic needs a logic config".into()));
    }
    in_pool(cfg.threads, || run_logic(cfg))?
}

fn run_logic(cfg: &RunConfig) -> Result<RunReport, PipelineError> {
    let loaded = load_region(cfg)?;
    let digest = loaded.provenance.input_digest.clone();
    let mut report = RunReport::new(cfg, loaded.provenance);
    report.stage("composition", serde_json::to_value(chargaff_report(&loaded.sequence)).unwrap());

    let seq = if cfg.codon_thin {
        let doublets = drop_third_base(&loaded.sequence, 0).map_err(at_stage("codon-thin"))?;
        let even = doublets.len() - doublets.len() % 2;
        if even != doublets.len() {
            report
                .warnings
                .push("codon-thinned stream has odd length; trailing base dropped before pair reduction".into());
        }
        let trimmed = doublets.with_residues(doublets.residues()[..even].to_vec());
        let bases = drop_second_base(&trimmed).map_err(at_stage("codon-thin"))?;
        report.stage(
            "codon-thin",
            json!({ "frame": 0, "input_length": loaded.sequence.len(), "doublet_length": doublets.len(), "output_length": bases.len() }),
        );
        bases
    } else {
        loaded.sequence
    };

    let counts = window_base_counts(&seq, cfg.window).map_err(at_stage("count"))?;
    report.stage("count", json!({ "series": counts.len(), "windows": counts[0].len(), "window_length": cfg.window }));
    let bits = binarize_all(&counts, cfg)?;
    report.stage(
        "binarize",
        json!({
            "bits_per_series": bits[0].len(),
            "blocks": counts[0].len() / cfg.policy.block_length,
            "pairing": cfg.policy.pairing,
            "threshold": cfg.policy.threshold,
            "zero_variance_bits": bits.iter().map(|b| b.zero_variance_positions().len()).sum::<usize>(),
        }),
    );
    count_warnings(&mut report, &seq, cfg.window, &bits);

    let table =
        build_truth_table(&bits[0], &bits[1], &bits[2], &bits[3], &cfg.columns).map_err(at_stage("truth-table"))?;
    report.stage(
        "truth-table",
        json!({ "lines": table.len(), "columns": cfg.columns, "display_tables": table.len().div_ceil(cfg.table_height) }),
    );

    let ranges: Vec<(usize, usize)> = cfg.ranges.iter().map(|r| (r[0], r[1])).collect();
    let reports = cfg
        .columns
        .iter()
        .map(|&d| validity_report(&table, d, &ranges))
        .collect::<Result<Vec<_>, _>>()
        .map_err(at_stage("validity"))?;
    let full = Disjunction::all_bases();
    let headline = match reports.iter().find(|r| r.disjunction == full) {
        Some(r) => r.clone(),
        None => validity_report(&table, full, &ranges).map_err(at_stage("validity"))?,
    };
    report.stage(
        "validity",
        json!({
            "disjunction": headline.disjunction,
            "false_lines": headline.false_lines.len(),
            "true_runs": headline.true_runs,
            "global": headline.global,
            "verdicts": headline.verdicts,
        }),
    );

    let mut writer = ArtifactWriter::create(&cfg.out)?;
    write_counts_and_bits(&mut writer, cfg, &digest, &counts, &bits)?;
    if cfg.wants(Format::Csv) {
        writer.write("truth_table.csv", table.to_csv().as_bytes())?;
        writer.write("truth_tables.txt", table.render_tables(cfg.table_height).as_bytes())?;
    }
    if cfg.wants(Format::Json) {
        writer.write_enveloped("validity.json", cfg, &digest, &reports)?;
    }
    finish(writer, report)
}
