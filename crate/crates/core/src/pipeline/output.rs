use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{PipelineError, RunConfig};
use crate::seqio::Sequence;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Content hash of the analyzed residues.
pub fn input_digest(seq: &Sequence) -> String {
    format!("sha256:{}", sha256_hex(seq.to_string_residues().as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub sha256: String,
}

/// Writes files into one directory via temp file + rename and keeps a manifest.
pub(crate) struct ArtifactWriter {
    dir: PathBuf,
    pub entries: Vec<ArtifactEntry>,
}

impl ArtifactWriter {
    pub fn create(dir: &Path) -> Result<ArtifactWriter, PipelineError> {
        std::fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
        Ok(ArtifactWriter { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), PipelineError> {
        let target = self.dir.join(name);
        let io = |source| PipelineError::Io { path: target.clone(), source };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&target).map_err(|e| io(e.error))?;
        self.entries.push(ArtifactEntry { file: name.to_string(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), PipelineError> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact types serialize");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// JSON artifact wrapped with the resolved config and input digest.
    pub fn write_enveloped<T: Serialize>(
        &mut self,
        name: &str,
        config: &RunConfig,
        digest: &str,
        data: &T,
    ) -> Result<(), PipelineError> {
        #[derive(Serialize)]
        struct Envelope<'a, T> {
            config: &'a RunConfig,
            input_digest: &'a str,
            data: &'a T,
        }
        self.write_json(name, &Envelope { config, input_digest: digest, data })
    }
}
