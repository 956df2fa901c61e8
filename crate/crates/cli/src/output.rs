use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Writes through a temp file in the destination directory, then renames.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// `dir/stem.ext` for a sibling of `path`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Everything needed to rerun a command. Only `timings` varies between
/// identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: &'static str,
    pub parameters: Value,
    pub rng_seeds: Vec<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub timings: Timings,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub stages: Vec<(String, f64)>,
}

/// Collects outputs and stage timings while a command runs.
pub struct Run {
    command: String,
    parameters: Value,
    rng_seeds: Vec<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    start: Instant,
    last: Instant,
    stages: Vec<(String, f64)>,
}

impl Run {
    pub fn new<P: Serialize>(command: &str, parameters: &P) -> Result<Self, CliError> {
        let now = Instant::now();
        Ok(Self {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters)?,
            rng_seeds: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            start: now,
            last: now,
            stages: Vec::new(),
        })
    }

    pub fn seed(&mut self, s: u64) {
        self.rng_seeds.push(s);
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.to_path_buf());
    }

    pub fn stage(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.to_string(), (now - self.last).as_secs_f64()));
        self.last = now;
    }

    pub fn write(&mut self, path: &Path, contents: &[u8]) -> Result<(), CliError> {
        atomic_write(path, contents)?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<(), CliError> {
        write_json(path, value)?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    /// Writes `<stem>.manifest.json` next to `primary`.
    pub fn finish(self, primary: &Path) -> Result<(), CliError> {
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION"),
            parameters: self.parameters,
            rng_seeds: self.rng_seeds,
            inputs: self.inputs,
            outputs: self.outputs,
            timings: Timings { total_seconds: self.start.elapsed().as_secs_f64(), stages: self.stages },
        };
        write_json(&sibling(primary, ".manifest.json"), &manifest)
    }
}
