use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use helix_core::pipeline::{
    cmd_algorithms, cmd_ingest, cmd_logic, run_selftest, split_list, ConfigLayer, PipelineError, PipelineKind,
    RunConfig, RunReport, SelftestOptions, EXIT_CONFIG_ERROR, EXIT_OK, EXIT_STAGE_ERROR,
};
use helix_core::seqio::{fetch_record, resolve_endpoint, FetchError, FetchOptions};

#[derive(Parser)]
#[command(name = "helix", version, about = "DNA sequence abstractions: doublet graphs and base-count logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a region and store it as FASTA with provenance.
    Ingest(RunArgs),
    /// Doublet counts -> bits -> adjacency matrix -> Hamiltonian paths.
    Algorithms(RunArgs),
    /// Base counts -> bits -> truth table -> disjunction validity.
    Logic(RunArgs),
    /// Run the embedded golden checks.
    Selftest,
    /// Download a record and write it verbatim.
    Fetch(FetchArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML file with flat keys mirroring the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    accession: Option<String>,
    /// URL template containing {accession}.
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    start: Option<usize>,
    #[arg(long)]
    end: Option<usize>,
    /// plus or minus
    #[arg(long)]
    strand: Option<String>,
    /// Keep this many bases from the 5' end of the extracted strand.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// disjoint or overlapping
    #[arg(long)]
    tiling: Option<String>,
    #[arg(long)]
    block: Option<usize>,
    /// chain, cyclic or disjoint
    #[arg(long)]
    pairing: Option<String>,
    #[arg(long)]
    threshold: Option<f64>,
    /// as_zero_bit or error
    #[arg(long)]
    zero_variance: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    codon_thin: bool,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    path_start: Option<usize>,
    #[arg(long)]
    path_end: Option<usize>,
    #[arg(long)]
    path_limit: Option<usize>,
    /// Comma-separated disjunctions, e.g. "A|T,G|C".
    #[arg(long)]
    columns: Option<String>,
    /// Comma-separated line ranges, e.g. "9-16,17-32".
    #[arg(long)]
    ranges: Option<String>,
    #[arg(long)]
    table_height: Option<usize>,
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated subset of csv,json,dot.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads (0 = rayon default).
    #[arg(long)]
    threads: Option<usize>,
    /// Fetch timeout in seconds.
    #[arg(long)]
    timeout: Option<u64>,
}

impl RunArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            preset: self.preset.clone(),
            input: self.input.clone(),
            accession: self.accession.clone(),
            endpoint: self.endpoint.clone(),
            start: self.start,
            end: self.end,
            strand: self.strand.clone(),
            length: self.length,
            window: self.window,
            tiling: self.tiling.clone(),
            block: self.block,
            pairing: self.pairing.clone(),
            threshold: self.threshold,
            zero_variance: self.zero_variance.clone(),
            n: self.n,
            codon_thin: self.codon_thin.then_some(true),
            population: self.population,
            seed: self.seed,
            path_start: self.path_start,
            path_end: self.path_end,
            path_limit: self.path_limit,
            columns: self.columns.as_deref().map(split_list),
            ranges: self.ranges.as_deref().map(split_list),
            table_height: self.table_height,
            out: self.out.clone(),
            format: self.format.as_deref().map(split_list),
            threads: self.threads,
            timeout: self.timeout,
        }
    }

    fn file_layer(&self) -> Result<ConfigLayer, PipelineError> {
        match &self.config {
            Some(path) => ConfigLayer::from_file(path),
            None => Ok(ConfigLayer::default()),
        }
    }
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    accession: String,
    #[arg(long)]
    endpoint: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    timeout: u64,
    /// Extra attempts after a transport failure or timeout.
    #[arg(long, default_value_t = 0)]
    retries: u32,
}

fn print_report(report: &RunReport) {
    for stage in &report.stages {
        println!("{:<12} {}", stage.stage, stage.summary);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("wrote {} artifacts", report.artifacts.len() + 1);
}

fn run_pipeline(kind: PipelineKind, args: &RunArgs) -> Result<(), PipelineError> {
    let cfg = RunConfig::resolve(kind, args.file_layer()?, args.layer())?;
    let report = match kind {
        PipelineKind::Algorithms => cmd_algorithms(&cfg)?,
        PipelineKind::Logic => cmd_logic(&cfg)?,
    };
    print_report(&report);
    Ok(())
}

fn run_ingest(args: &RunArgs) -> Result<(), PipelineError> {
    let cfg = RunConfig::resolve_for_ingest(args.file_layer()?, args.layer())?;
    let outcome = cmd_ingest(&cfg)?;
    let p = &outcome.provenance;
    println!(
        "{} bases from {} ({}-{}, {:?}) -> {}",
        p.length,
        p.source,
        p.effective_start,
        p.effective_end,
        p.strand,
        cfg.out.display()
    );
    for w in &p.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn run_selftest_cmd() -> i32 {
    let results = run_selftest(&SelftestOptions::default());
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        println!("{:<width$}  {}  {}", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} checks, {} failed", results.len(), failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_STAGE_ERROR
    }
}

fn run_fetch(args: &FetchArgs) -> i32 {
    let endpoint = resolve_endpoint(args.endpoint.as_deref());
    let options = FetchOptions { timeout: Duration::from_secs(args.timeout) };
    let mut attempt = 0;
    let body = loop {
        match fetch_record(&args.accession, &endpoint, &options) {
            Ok(body) => break body,
            Err(FetchError::InvalidTemplate(t)) => {
                eprintln!("config error: {}", FetchError::InvalidTemplate(t));
                return EXIT_CONFIG_ERROR;
            }
            Err(e @ (FetchError::Transport(_) | FetchError::Timeout(_))) if attempt < args.retries => {
                attempt += 1;
                eprintln!("attempt {attempt} failed: {e}; retrying");
            }
            Err(e) => {
                eprintln!("[fetch] {e}");
                return EXIT_STAGE_ERROR;
            }
        }
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().write_all(&body),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("[write] {e}");
            EXIT_STAGE_ERROR
        }
    }
}

fn exit(result: Result<(), PipelineError>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG_ERROR as u8 } else { EXIT_OK as u8 });
        }
    };
    let code = match &cli.command {
        Command::Ingest(args) => exit(run_ingest(args)),
        Command::Algorithms(args) => exit(run_pipeline(PipelineKind::Algorithms, args)),
        Command::Logic(args) => exit(run_pipeline(PipelineKind::Logic, args)),
        Command::Selftest => run_selftest_cmd(),
        Command::Fetch(args) => run_fetch(args),
    };
    ExitCode::from(code as u8)
}
