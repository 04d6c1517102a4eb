use std::path::{Path, PathBuf};
use std::time::Instant;

use chancomp::io::write_atomic;
use chancomp::Tolerances;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// SHA-256 over the command name, its parameters and the bytes of every
/// input file, in that order.
pub struct InputDigest {
    hasher: Sha256,
    files: Vec<PathBuf>,
}

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Self {
            hasher,
            files: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.hasher.update(format!("\0{key}={value}").as_bytes());
        self
    }

    pub fn file(&mut self, path: &Path, bytes: &[u8]) -> &mut Self {
        self.hasher.update(b"\0file\0");
        self.hasher.update(bytes);
        self.files.push(path.to_path_buf());
        self
    }

    fn finish(self) -> Value {
        let hex: String = self
            .hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        json!({ "sha256": hex, "files": self.files })
    }
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub seeds: Value,
    pub tolerances: Value,
    /// Seconds; the only field allowed to differ between identical runs.
    pub wall_time: f64,
}

pub struct ReportBuilder {
    command: String,
    digest: InputDigest,
    master_seed: Option<u64>,
    tolerances: Map<String, Value>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(command: &str) -> Self {
        let tolerances = match serde_json::to_value(Tolerances::default()) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        Self {
            command: command.to_string(),
            digest: InputDigest::new(command),
            master_seed: None,
            tolerances,
            start: Instant::now(),
        }
    }

    pub fn digest(&mut self) -> &mut InputDigest {
        &mut self.digest
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.master_seed = Some(seed);
        self.digest.param("seed", seed);
        self
    }

    pub fn tolerance(&mut self, name: &str, value: f64) -> &mut Self {
        self.tolerances.insert(name.to_string(), json!(value));
        self
    }

    pub fn finish(self, results: Value) -> Report {
        let seeds = match self.master_seed {
            Some(s) => json!({
                "master": s,
                "scheme": "sub-seed i = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15)",
            }),
            None => Value::Null,
        };
        Report {
            command: self.command,
            inputs: self.digest.finish(),
            results,
            seeds,
            tolerances: Value::Object(self.tolerances),
            wall_time: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Prints the report to stdout, or writes it to `path` and prints a summary line.
pub fn emit(report: &Report, path: Option<&Path>, summary: &str) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).map_err(|e| CliError::Usage(e.to_string()))?;
    match path {
        Some(p) => {
            write_atomic(p, format!("{text}\n").as_bytes())?;
            println!("{summary}");
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value)
        .map_err(|e| CliError::Usage(format!("cannot serialize result: {e}")))
}
