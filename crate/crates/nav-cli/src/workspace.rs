//! Workspace layout and file access. A workspace is a plain directory tree —
//! self-contained, relocatable, inspectable with ordinary tools:
//!
//! ```text
//! <root>/
//!   workspace.cfg        run configuration (optional, TOML)
//!   spec/*.nav           specification sources
//!   data/<sensor>.csv    imported raw readings, one file per sensor
//!   results/             manifest + one file per virtual sensor and metric
//!   tickets/tickets.json persistent ticket board
//!   reports/             templates, comments, rendered documents
//! ```

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use navlang::{parse_spec, Specification, Timestamp};

use crate::error::{Failure, PathContext, Result};

pub struct Workspace {
    pub root: PathBuf,
}

impl Workspace {
    /// Open an existing directory as a workspace. Subdirectories are created
    /// on demand by whichever command writes into them.
    pub fn open(root: &Path) -> Result<Workspace> {
        if !root.is_dir() {
            return Err(Failure::io(format!("workspace {} is not a directory", root.display())));
        }
        Ok(Workspace { root: root.to_path_buf() })
    }

    pub fn spec_dir(&self) -> PathBuf {
        self.root.join("spec")
    }

    pub fn data_dir(&self) -> PathBuf {
        self.root.join("data")
    }

    pub fn results_dir(&self) -> PathBuf {
        self.root.join("results")
    }

    pub fn series_dir(&self) -> PathBuf {
        self.results_dir().join("series")
    }

    pub fn metrics_dir(&self) -> PathBuf {
        self.results_dir().join("metrics")
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.results_dir().join("manifest.json")
    }

    pub fn tickets_path(&self) -> PathBuf {
        self.root.join("tickets").join("tickets.json")
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.root.join("reports")
    }

    pub fn templates_dir(&self) -> PathBuf {
        self.reports_dir().join("templates")
    }

    pub fn comments_path(&self) -> PathBuf {
        self.reports_dir().join("comments.json")
    }

    pub fn config_path(&self) -> PathBuf {
        self.root.join("workspace.cfg")
    }

    pub fn lock_path(&self) -> PathBuf {
        self.root.join("workspace.lock")
    }

    /// Take the advisory single-writer lock for mutating commands.
    pub fn lock(&self) -> Result<LockGuard> {
        let path = self.lock_path();
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(LockGuard { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(Failure::io(format!(
                "workspace is locked ({}); if no other run is active, remove the file",
                path.display()
            ))),
            Err(e) => Err(Failure::io(format!("cannot create {}: {e}", path.display()))),
        }
    }

    /// Parse and merge every `spec/*.nav`, in file-name order.
    pub fn load_spec(&self) -> Result<Specification> {
        let dir = self.spec_dir();
        let mut files: Vec<PathBuf> = match fs::read_dir(&dir) {
            Ok(entries) => entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "nav"))
                .collect(),
            Err(e) => {
                return Err(Failure::io(format!("cannot read {}: {e}", dir.display())));
            }
        };
        files.sort();
        if files.is_empty() {
            return Err(Failure::validation(format!(
                "no specification files (*.nav) in {}",
                dir.display()
            )));
        }
        let mut merged = Specification::default();
        let mut problems = String::new();
        for path in &files {
            let text = fs::read_to_string(path).path_ctx("read", path)?;
            match parse_spec(&text) {
                Ok(spec) => merged.merge(spec),
                Err(diags) => {
                    for d in diags.iter() {
                        problems.push_str(&format!("{}:{d}\n", path.display()));
                    }
                }
            }
        }
        if !problems.is_empty() {
            return Err(Failure::validation(problems.trim_end().to_string()));
        }
        Ok(merged)
    }

    pub fn sensor_data_path(&self, sensor: &str) -> PathBuf {
        self.data_dir().join(format!("{sensor}.csv"))
    }

    /// Sensor ids with stored raw data, sorted.
    pub fn list_raw_sensors(&self) -> Vec<String> {
        let mut ids: Vec<String> = match fs::read_dir(self.data_dir()) {
            Ok(entries) => entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
                .collect(),
            Err(_) => Vec::new(),
        };
        ids.sort();
        ids
    }

    /// Store raw readings under a sensor id, sorted by timestamp.
    pub fn store_raw(&self, sensor: &str, rows: &[(Timestamp, f64)]) -> Result<()> {
        let dir = self.data_dir();
        fs::create_dir_all(&dir).path_ctx("create", &dir)?;
        let mut text = String::from("timestamp,value\n");
        for (t, v) in rows {
            text.push_str(&format!("{t},{v}\n"));
        }
        let path = self.sensor_data_path(sensor);
        fs::write(&path, text).path_ctx("write", &path)
    }

    /// Load one sensor's raw readings.
    pub fn load_raw(&self, sensor: &str) -> Result<Vec<(Timestamp, f64)>> {
        let path = self.sensor_data_path(sensor);
        let text = fs::read_to_string(&path).path_ctx("read", &path)?;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.is_empty() {
                continue;
            }
            let bad = || {
                Failure::io(format!("{}:{}: malformed row `{line}`", path.display(), lineno + 1))
            };
            let (t, v) = line.split_once(',').ok_or_else(bad)?;
            let t = Timestamp::parse(t).map_err(|_| bad())?;
            let v: f64 = v.parse().map_err(|_| bad())?;
            rows.push((t, v));
        }
        Ok(rows)
    }
}

/// Deletes the lock file when the command finishes.
pub struct LockGuard {
    path: PathBuf,
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Read + deserialize a JSON file.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).path_ctx("read", path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::io(format!("cannot parse {}: {e}", path.display())))
}

/// Serialize + write a JSON file, creating parent directories.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).path_ctx("create", parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::io(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).path_ctx("write", path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws() -> (tempfile::TempDir, Workspace) {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        (dir, ws)
    }

    #[test]
    fn raw_round_trip_preserves_values() {
        let (_dir, ws) = ws();
        let rows = vec![
            (Timestamp::parse("2010-05-01T00:00:00").unwrap(), 10.0),
            (Timestamp::parse("2010-05-01T00:15:00").unwrap(), -0.125),
            (Timestamp::parse("2010-05-01T00:30:00").unwrap(), 1e-7),
        ];
        ws.store_raw("s1", &rows).unwrap();
        assert_eq!(ws.load_raw("s1").unwrap(), rows);
        assert_eq!(ws.list_raw_sensors(), ["s1"]);
    }

    #[test]
    fn lock_is_exclusive_and_released() {
        let (_dir, ws) = ws();
        let guard = ws.lock().unwrap();
        let second = ws.lock();
        assert!(matches!(second, Err(Failure::Io(_))));
        drop(guard);
        drop(ws.lock().unwrap());
    }

    #[test]
    fn load_spec_merges_files_in_name_order() {
        let (_dir, ws) = ws();
        fs::create_dir_all(ws.spec_dir()).unwrap();
        fs::write(ws.spec_dir().join("b.nav"), "rule R context(a) { a < 1 }\n").unwrap();
        fs::write(ws.spec_dir().join("a.nav"), "sensor a numeric\n").unwrap();
        let spec = ws.load_spec().unwrap();
        assert_eq!(spec.sensors.len(), 1);
        assert_eq!(spec.artifacts.len(), 1);
    }

    #[test]
    fn load_spec_reports_file_and_position() {
        let (_dir, ws) = ws();
        fs::create_dir_all(ws.spec_dir()).unwrap();
        fs::write(ws.spec_dir().join("bad.nav"), "rule { nope").unwrap();
        let err = ws.load_spec().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.nav"), "{msg}");
        assert!(matches!(err, Failure::Validation(_)));
    }

    #[test]
    fn missing_spec_dir_is_io_and_empty_dir_is_validation() {
        let (_dir, ws) = ws();
        assert!(matches!(ws.load_spec(), Err(Failure::Io(_))));
        fs::create_dir_all(ws.spec_dir()).unwrap();
        assert!(matches!(ws.load_spec(), Err(Failure::Validation(_))));
    }
}
