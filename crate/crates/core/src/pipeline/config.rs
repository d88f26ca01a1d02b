//! Layered run configuration: preset, then config file, then flags.

use std::fmt;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::binarizer::{CorrelationPolicy, Pairing, ZeroVariancePolicy};
use crate::graphkit::MAX_VERTICES;
use crate::kmerstats::Tiling;
use crate::logickit::Disjunction;
use crate::seqio::Orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineKind {
    Algorithms,
    Logic,
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PipelineKind::Algorithms => "algorithms",
            PipelineKind::Logic => "logic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format {other:?} (expected csv, json or dot)")),
        }
    }
}

/// One layer of optional settings. Keys mirror the long CLI flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigLayer {
    pub preset: Option<String>,
    pub input: Option<String>,
    pub accession: Option<String>,
    pub endpoint: Option<String>,
    pub start: Option<usize>,
    pub end: Option<usize>,
    pub strand: Option<String>,
    pub length: Option<usize>,
    pub window: Option<usize>,
    pub tiling: Option<String>,
    pub block: Option<usize>,
    pub pairing: Option<String>,
    pub threshold: Option<f64>,
    pub zero_variance: Option<String>,
    pub n: Option<usize>,
    pub codon_thin: Option<bool>,
    pub population: Option<usize>,
    pub seed: Option<u64>,
    pub path_start: Option<usize>,
    pub path_end: Option<usize>,
    pub path_limit: Option<usize>,
    pub columns: Option<Vec<String>>,
    pub ranges: Option<Vec<String>>,
    pub table_height: Option<usize>,
    pub out: Option<String>,
    pub format: Option<Vec<String>>,
    pub threads: Option<usize>,
    pub timeout: Option<u64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl ConfigLayer {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: ConfigLayer) -> ConfigLayer {
        overlay!(self, top; preset, input, accession, endpoint, start, end, strand, length, window,
            tiling, block, pairing, threshold, zero_variance, n, codon_thin, population, seed,
            path_start, path_end, path_limit, columns, ranges, table_height, out, format, threads, timeout);
        self
    }

    pub fn from_toml(text: &str) -> Result<ConfigLayer, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &FsPath) -> Result<ConfigLayer, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        ConfigLayer::from_toml(&text)
    }
}

/// A named reproduction configuration and the discrepancies it carries.
pub struct Preset {
    pub name: &'static str,
    pub pipeline: PipelineKind,
    pub layer: ConfigLayer,
    pub warnings: Vec<String>,
}

pub const PRESET_NAMES: [&str; 3] = ["paper-algorithms", "paper-logic-text", "paper-logic-tables"];

pub fn preset(name: &str) -> Result<Preset, PipelineError> {
    let base = ConfigLayer {
        accession: Some("AF158101".into()),
        strand: Some("minus".into()),
        threshold: Some(0.5),
        ..ConfigLayer::default()
    };
    let logic = |block: usize| ConfigLayer {
        start: Some(167_101),
        end: Some(168_900),
        length: Some(4050),
        window: Some(10),
        block: Some(block),
        pairing: Some("chain".into()),
        ..base.clone()
    };
    let shared_logic_warning =
        "coordinates 167101-168900 span 1800 bases but the stated length is 4050; the declared length is read from the 5' end and the coordinates are kept as provenance only".to_string();
    match name {
        "paper-algorithms" => Ok(Preset {
            name: "paper-algorithms",
            pipeline: PipelineKind::Algorithms,
            layer: ConfigLayer {
                start: Some(165_400),
                end: Some(168_900),
                length: Some(3500),
                window: Some(20),
                tiling: Some("disjoint".into()),
                block: Some(5),
                pairing: Some("cyclic".into()),
                n: Some(7),
                ..base
            },
            warnings: vec![
                "coordinates 165400-168900 span 3501 bases but the stated length is 3500; the first 3500 bases from the 5' end are used".into(),
                "35 blocks of 5 counts give 34 chain-paired bits but 35 bits are stated; cyclic pairing (last block against first) is used to obtain 35".into(),
                "whether doublets were counted disjoint or overlapping is not stated; disjoint tiling is used".into(),
                "which genome segment produced the 7-vertex reference matrix is not stated; genome-derived bits are not expected to reproduce it".into(),
            ],
        }),
        "paper-logic-text" => Ok(Preset {
            name: "paper-logic-text",
            pipeline: PipelineKind::Logic,
            layer: logic(10),
            warnings: vec![
                shared_logic_warning,
                "blocks of ten counts with chain pairing give 39 truth-table lines, while the reference tables are numbered past line 72".into(),
            ],
        }),
        "paper-logic-tables" => Ok(Preset {
            name: "paper-logic-tables",
            pipeline: PipelineKind::Logic,
            layer: logic(5),
            warnings: vec![
                shared_logic_warning,
                "block length 5 is inferred from the reference table line numbering (five 16-line tables), not from the stated ten numbers per block".into(),
            ],
        }),
        "paper-logic" => Err(PipelineError::Config(
            "preset paper-logic is ambiguous; choose paper-logic-text (block 10) or paper-logic-tables (block 5)".into(),
        )),
        other => Err(PipelineError::Config(format!("unknown preset {other:?}; known presets: {}", PRESET_NAMES.join(", ")))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionConfig {
    pub start: Option<usize>,
    pub end: Option<usize>,
    pub strand: Orientation,
    pub length: Option<usize>,
}

/// Fully resolved configuration. Execution-only settings (output directory,
/// thread count, fetch timeout) are not serialized, so they never change the
/// bytes of an artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub pipeline: PipelineKind,
    pub preset: Option<String>,
    pub input: Option<String>,
    pub accession: Option<String>,
    pub endpoint: Option<String>,
    pub region: RegionConfig,
    pub window: usize,
    pub tiling: Tiling,
    pub codon_thin: bool,
    pub policy: CorrelationPolicy,
    pub n: usize,
    pub path_limit: usize,
    pub path_start: Option<usize>,
    pub path_end: Option<usize>,
    pub population: usize,
    pub seed: u64,
    pub columns: Vec<Disjunction>,
    pub ranges: Vec<[usize; 2]>,
    pub table_height: usize,
    pub formats: Vec<Format>,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub timeout_secs: u64,
    #[serde(skip)]
    pub preset_warnings: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PATH_LIMIT: usize = 1000;
pub const DEFAULT_TABLE_HEIGHT: usize = 16;
pub const DEFAULT_OUT_DIR: &str = "helix-out";

fn parse<T: FromStr<Err = String>>(key: &str, value: Option<&str>, default: T) -> Result<T, PipelineError> {
    match value {
        None => Ok(default),
        Some(v) => v.parse().map_err(|e| PipelineError::Config(format!("{key}: {e}"))),
    }
}

fn parse_range(text: &str) -> Result<[usize; 2], PipelineError> {
    let bad = || PipelineError::Config(format!("ranges: cannot parse {text:?} (expected a-b)"));
    let (a, b) = text.trim().split_once('-').ok_or_else(bad)?;
    Ok([a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?])
}

/// Splits comma-separated flag values into list entries.
pub fn split_list(value: &str) -> Vec<String> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

impl RunConfig {
    /// Resolves `file` and `flags` (flags win) on top of the selected preset
    /// and the defaults for `pipeline`.
    pub fn resolve(pipeline: PipelineKind, file: ConfigLayer, flags: ConfigLayer) -> Result<RunConfig, PipelineError> {
        let preset_name = flags.preset.clone().or_else(|| file.preset.clone());
        let (preset_layer, preset_warnings) = match &preset_name {
            Some(name) => {
                let p = preset(name)?;
                if p.pipeline != pipeline {
                    return Err(PipelineError::Config(format!(
                        "preset {} is for the {} pipeline, not {pipeline}",
                        p.name, p.pipeline
                    )));
                }
                (p.layer, p.warnings)
            }
            None => (ConfigLayer::default(), Vec::new()),
        };
        let layer = preset_layer.overlay(file).overlay(flags);

        let (default_window, default_block, default_pairing) = match pipeline {
            PipelineKind::Algorithms => (20, 5, Pairing::Cyclic),
            PipelineKind::Logic => (10, 10, Pairing::Chain),
        };
        let policy = CorrelationPolicy {
            threshold: layer.threshold.unwrap_or(crate::binarizer::DEFAULT_THRESHOLD),
            block_length: layer.block.unwrap_or(default_block),
            pairing: parse("pairing", layer.pairing.as_deref(), default_pairing)?,
            zero_variance: parse("zero-variance", layer.zero_variance.as_deref(), ZeroVariancePolicy::AsZeroBit)?,
        };
        policy.validate().map_err(|e| PipelineError::Config(e.to_string()))?;

        let n = layer.n.unwrap_or(7);
        if !(1..=MAX_VERTICES).contains(&n) {
            return Err(PipelineError::Config(format!("n must be in 1..={MAX_VERTICES} (got {n})")));
        }
        for (key, v) in [("path-start", layer.path_start), ("path-end", layer.path_end)] {
            if let Some(v) = v {
                if !(1..=n).contains(&v) {
                    return Err(PipelineError::Config(format!("{key} {v} outside 1..={n}")));
                }
            }
        }
        let path_limit = layer.path_limit.unwrap_or(DEFAULT_PATH_LIMIT);
        let table_height = layer.table_height.unwrap_or(DEFAULT_TABLE_HEIGHT);
        if path_limit == 0 || table_height == 0 {
            return Err(PipelineError::Config("path-limit and table-height must be at least 1".into()));
        }
        if layer.input.is_none() && layer.accession.is_none() {
            return Err(PipelineError::Config("no input: give --input or --accession".into()));
        }

        let columns = match &layer.columns {
            None => Disjunction::default_columns(),
            Some(list) => list
                .iter()
                .map(|c| {
                    c.parse().map_err(|e: crate::logickit::LogicError| PipelineError::Config(format!("columns: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        if columns.is_empty() {
            return Err(PipelineError::Config("columns: at least one disjunction required".into()));
        }
        let ranges = layer.ranges.iter().flatten().map(|r| parse_range(r)).collect::<Result<Vec<_>, _>>()?;
        let mut formats = match &layer.format {
            None => vec![Format::Csv, Format::Json, Format::Dot],
            Some(list) => {
                list.iter().map(|f| f.parse().map_err(PipelineError::Config)).collect::<Result<Vec<_>, _>>()?
            }
        };
        formats.sort();
        formats.dedup();

        Ok(RunConfig {
            pipeline,
            preset: preset_name,
            input: layer.input,
            accession: layer.accession,
            endpoint: layer.endpoint,
            region: RegionConfig {
                start: layer.start,
                end: layer.end,
                strand: parse("strand", layer.strand.as_deref(), Orientation::Plus)?,
                length: layer.length,
            },
            window: layer.window.unwrap_or(default_window),
            tiling: parse("tiling", layer.tiling.as_deref(), Tiling::Disjoint)?,
            codon_thin: layer.codon_thin.unwrap_or(false),
            policy,
            n,
            path_limit,
            path_start: layer.path_start,
            path_end: layer.path_end,
            population: layer.population.unwrap_or(0),
            seed: layer.seed.unwrap_or(DEFAULT_SEED),
            columns,
            ranges,
            table_height,
            formats,
            out: PathBuf::from(layer.out.unwrap_or_else(|| DEFAULT_OUT_DIR.to_string())),
            threads: layer.threads.unwrap_or(0),
            timeout_secs: layer.timeout.unwrap_or(30),
            preset_warnings,
        })
    }

    /// Ingest has no pipeline of its own; it follows the preset when one is set.
    pub fn resolve_for_ingest(file: ConfigLayer, flags: ConfigLayer) -> Result<RunConfig, PipelineError> {
        let kind = match flags.preset.as_deref().or(file.preset.as_deref()) {
            Some(name) => preset(name)?.pipeline,
            None => PipelineKind::Algorithms,
        };
        RunConfig::resolve(kind, file, flags)
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}
