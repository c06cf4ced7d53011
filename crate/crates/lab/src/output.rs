use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use serde::Serialize;
use serde_json::Value;

use crate::error::LabResult;

/// Shortest decimal that reads back to the same f64.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> LabResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with object keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is ordered by key
    let v: Value = serde_json::to_value(value).expect("serializable value");
    let mut text = serde_json::to_string_pretty(&v).expect("json value");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<()> {
    fs::write(path, to_sorted_json(value))?;
    Ok(())
}

pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub git_describe: String,
    pub started_at: String,
    pub tolerances: BTreeMap<String, f64>,
    /// Data files described by this manifest.
    pub outputs: Vec<String>,
}

fn git_describe() -> String {
    process::Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| String::from("unknown"))
}

fn tolerances() -> BTreeMap<String, f64> {
    let t = gjms_core::TOLERANCES;
    [
        ("pole", t.pole),
        ("hyp2f1_term", t.hyp2f1_term),
        ("hyp2f1_max_terms", t.hyp2f1_max_terms as f64),
        ("taylor_radius", t.taylor_radius),
        ("spectral_tail", t.spectral_tail),
        ("inverse_tail", t.inverse_tail),
        ("kernel_gaussian_floor", t.kernel_gaussian_floor),
        ("kernel_max_panels", t.kernel_max_panels as f64),
        ("optimizer_budget", t.optimizer_budget as f64),
        ("optimizer_tol", t.optimizer_tol),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl RunManifest {
    pub fn new<P: Serialize>(
        command: &str,
        params: &P,
        started_at: String,
        outputs: &[&Path],
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            params: serde_json::to_value(params).expect("serializable params"),
            git_describe: git_describe(),
            started_at,
            tolerances: tolerances(),
            outputs: outputs.iter().map(|p| file_name(p)).collect(),
        }
    }

    /// Writes `<primary>.manifest.json` and returns its file name.
    pub fn write(&self, primary: &Path) -> LabResult<String> {
        let path = manifest_path(primary);
        write_json(&path, self)?;
        Ok(file_name(&path))
    }
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    sidecar(primary, ".manifest.json")
}

pub fn summary_path(primary: &Path) -> PathBuf {
    sidecar(primary, ".summary.json")
}
