use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Read an input file, with its content hash for report embedding.
pub fn read_input(path: &Path) -> Result<(String, String)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read input file {}", path.display()))?;
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    Ok((text, format!("{:x}", h.finalize())))
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).with_context(|| format!("malformed {what} JSON"))
}

/// Atomically write a report: serialize, write to a temp file in the same
/// directory, then rename into place.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    let final_path = dir.join(name);
    fs::rename(&tmp, &final_path)
        .with_context(|| format!("cannot move report into place at {}", final_path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(dir, name, &bytes)
}

/// Fixed 17-significant-digit float formatting for CSV projections.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
