//! Append-only JSON-lines store of critical-point scans.
//!
//! One line per scanned window. A line is reused only when its key matches
//! exactly, including the code version, so upgrading the library silently
//! invalidates old entries. Unreadable lines are skipped.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zeta_arclen::riemann::{locate_with, CriticalScan, EvalWindow, RiemannSeries, ScanOptions};

use crate::error::{HarnessError, Result};
use crate::record::code_version;

pub const CACHE_FILE: &str = "critical_points.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    #[serde(rename = "T")]
    pub start: f64,
    #[serde(rename = "U")]
    pub length: f64,
    #[serde(rename = "P")]
    pub truncation: f64,
    pub scan: ScanOptions,
    pub code_version: String,
}

impl CacheKey {
    pub fn new(window: &EvalWindow, scan: &ScanOptions) -> Self {
        Self {
            start: window.start(),
            length: window.length(),
            truncation: window.truncation(),
            scan: *scan,
            code_version: code_version(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    scan: CriticalScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
}

impl Lookup {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hit => "hit",
            Self::Miss => "miss",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanCache {
    dir: PathBuf,
}

impl ScanCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(CACHE_FILE)
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<CriticalScan>> {
        let path = self.path();
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(HarnessError::io("reading cache", path, e)),
        };
        Ok(text
            .lines()
            .filter_map(|line| serde_json::from_str::<Entry>(line).ok())
            .find(|entry| &entry.key == key)
            .map(|entry| entry.scan))
    }

    pub fn put(&self, key: &CacheKey, scan: &CriticalScan) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| HarnessError::io("creating cache directory", &self.dir, e))?;
        let path = self.path();
        let mut line = serde_json::to_string(&Entry { key: key.clone(), scan: scan.clone() }).expect("entry serializes");
        line.push('\n');
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(|e| HarnessError::io("appending to cache", path, e))
    }

    /// Cached scan for the window, computing and storing it on a miss.
    pub fn scan(&self, window: &EvalWindow, options: &ScanOptions) -> Result<(CriticalScan, Lookup)> {
        let key = CacheKey::new(window, options);
        if let Some(scan) = self.get(&key)? {
            return Ok((scan, Lookup::Hit));
        }
        let scan = locate_with(&RiemannSeries::new(window), options);
        self.put(&key, &scan)?;
        Ok((scan, Lookup::Miss))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
