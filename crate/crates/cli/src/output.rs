//! Run directories, CSV tables and manifests.

use crate::config::{hex, ExperimentConfig};
use crate::error::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Shortest round-trip form, at most 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as objects; cells that parse as numbers or booleans stay typed.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| {
                        let v = serde_json::from_str(c).unwrap_or_else(|_| serde_json::Value::String(c.clone()));
                        (h.to_string(), v)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

#[derive(Serialize)]
struct FileEntry {
    path: String,
    bytes: u64,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_hash: String,
    code_version: &'static str,
    started_unix: f64,
    finished_unix: f64,
    files: Vec<FileEntry>,
}

/// One run's output directory, named by command and config hash.
pub struct RunDir {
    pub root: PathBuf,
    command: &'static str,
    config: ExperimentConfig,
    json: bool,
    started: f64,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunDir {
    pub fn create(base: &Path, command: &'static str, config: &ExperimentConfig) -> Result<Self, CliError> {
        let root = base.join(format!("{command}-{}", &config.hash()[..12]));
        fs::create_dir_all(&root)?;
        let resolved = serde_json::to_string_pretty(config).expect("config serializes");
        fs::write(root.join("config.resolved.json"), resolved + "\n")?;
        Ok(RunDir {
            root,
            command,
            config: config.clone(),
            json: config.outputs.formats.iter().any(|f| f == "json"),
            started: now(),
        })
    }

    /// Writes `<sub>/<name>.csv` (and `.json` if requested).
    pub fn write_table(&self, sub: Option<&str>, name: &str, table: &Table) -> Result<PathBuf, CliError> {
        let dir = match sub {
            Some(s) => self.root.join(s),
            None => self.root.clone(),
        };
        fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, table.to_csv())?;
        if self.json {
            let text = serde_json::to_string_pretty(&table.to_json()).expect("table serializes");
            fs::write(dir.join(format!("{name}.json")), text + "\n")?;
        }
        Ok(path)
    }

    pub fn write_json(&self, sub: Option<&str>, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
        let dir = match sub {
            Some(s) => self.root.join(s),
            None => self.root.clone(),
        };
        fs::create_dir_all(&dir)?;
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string(value).expect("value serializes") + "\n")?;
        Ok(path)
    }

    /// Inventory every file under the run directory and write manifest.json.
    pub fn finish(self) -> Result<PathBuf, CliError> {
        let mut files = vec![];
        collect(&self.root, &self.root, &mut files)?;
        files.retain(|f| f.path != "manifest.json");
        files.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = Manifest {
            command: self.command,
            config_hash: self.config.hash(),
            code_version: env!("CARGO_PKG_VERSION"),
            started_unix: self.started,
            finished_unix: now(),
            files,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(self.root.join("manifest.json"), text + "\n")?;
        Ok(self.root)
    }
}

fn collect(root: &Path, dir: &Path, out: &mut Vec<FileEntry>) -> Result<(), CliError> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect(root, &path, out)?;
        } else {
            let bytes = fs::read(&path)?;
            out.push(FileEntry {
                path: path.strip_prefix(root).unwrap_or(&path).to_string_lossy().replace('\\', "/"),
                bytes: bytes.len() as u64,
                sha256: hex(&Sha256::digest(&bytes)),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert!(digits.trim_start_matches('0').len() <= 17, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1.0".into(), "true".into()]);
        assert_eq!(t.to_csv(), "a,b\n1.0,true\n");
        assert_eq!(t.to_json()[0]["b"], serde_json::json!(true));
    }
}
