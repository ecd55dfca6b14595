//! Structured per-run event log: run id, config hash, and stage timings as
//! line-delimited JSON in `events.log`. Timings live only here, never in the
//! report outputs, so reports stay byte-reproducible.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use valuekit::error::Result;

pub struct RunLog {
    run_id: String,
    file: Option<File>,
}

#[derive(Serialize)]
struct Event<'a> {
    run_id: &'a str,
    stage: &'a str,
    ms: u128,
}

impl RunLog {
    /// Run id = first 12 hex digits of sha256(config text, subcommand, seed).
    pub fn new(out_dir: &Path, config_text: &str, subcommand: &str, seed: u64) -> Result<Self> {
        let mut hasher = Sha256::new();
        hasher.update(config_text.as_bytes());
        hasher.update(subcommand.as_bytes());
        hasher.update(seed.to_le_bytes());
        let digest = hasher.finalize();
        let run_id: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(out_dir.join("events.log"))?;
        Ok(Self { run_id, file: Some(file) })
    }

    pub fn disabled() -> Self {
        Self { run_id: "off".into(), file: None }
    }

    pub fn run_id(&self) -> &str {
        &self.run_id
    }

    /// Time a pipeline stage and append one event line.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let result = f()?;
        if let Some(file) = &mut self.file {
            let event = Event { run_id: &self.run_id, stage: name, ms: start.elapsed().as_millis() };
            let line = serde_json::to_string(&event).unwrap_or_default();
            let _ = writeln!(file, "{line}");
        }
        Ok(result)
    }
}
