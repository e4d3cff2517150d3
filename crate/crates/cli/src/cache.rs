//! On-disk result cache, enabled by pointing `KHB_CACHE` at a directory.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "KHB_CACHE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub input: String,
    pub operation: String,
    pub parameters: Value,
    pub output: Value,
    pub engine_version: String,
    pub elapsed_ms: u64,
}

impl ResultRecord {
    fn key(&self) -> String {
        key(&self.operation, &self.input, &self.parameters)
    }
}

/// Canonical key text: operation, canonical input, sorted parameters.
pub fn key(operation: &str, input: &str, parameters: &Value) -> String {
    format!("{operation}\n{input}\n{parameters}")
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(ENV_VAR)?;
        if dir.is_empty() {
            return None;
        }
        Some(Self { dir: dir.into() })
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    /// A stored record for `key` from this engine version, if any.
    pub fn load(&self, key: &str) -> Option<ResultRecord> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let rec: ResultRecord = serde_json::from_str(&text).ok()?;
        (rec.key() == key && rec.engine_version == env!("CARGO_PKG_VERSION")).then_some(rec)
    }

    /// Writes to a temporary file and renames it into place, so readers
    /// never see a partial record.
    pub fn store(&self, rec: &ResultRecord) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(&rec.key());
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string(rec)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &path)
    }
}
