//! On-disk cache of Bender-Wu tables, one JSON document per `(p, level)`.
//!
//! Coefficients are stored as exact `"num/den"` strings together with a
//! SHA-256 digest of the payload, so a hand-edited or truncated file is
//! detected on load instead of being served.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{format_rational, generate_bw_coefficients, parse_rational, BwSeries};
use crate::error::{Error, Result};

/// Bumped whenever the recursion or the document layout changes; old files
/// are simply ignored because the version is part of the file name.
pub const FORMAT_VERSION: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "VPT_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheDocument {
    pub format_version: u32,
    pub p: u32,
    pub level: u32,
    pub order: usize,
    pub coefficients: Vec<String>,
    pub checksum: String,
}

impl CacheDocument {
    pub fn from_series(series: &BwSeries) -> Self {
        let coefficients: Vec<String> = series.coeffs().iter().map(format_rational).collect();
        let checksum = checksum(series.p(), series.level(), &coefficients);
        CacheDocument {
            format_version: FORMAT_VERSION,
            p: series.p(),
            level: series.level(),
            order: series.order(),
            coefficients,
            checksum,
        }
    }

    pub fn into_series(self) -> Result<BwSeries> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.coefficients.len() != self.order + 1 {
            return Err(Error::Cache(format!(
                "order {} but {} coefficients",
                self.order,
                self.coefficients.len()
            )));
        }
        if checksum(self.p, self.level, &self.coefficients) != self.checksum {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let coeffs = self
            .coefficients
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        BwSeries::from_parts(self.p, self.level, coeffs)
    }
}

fn checksum(p: u32, level: u32, coefficients: &[String]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("p={p};level={level};").as_bytes());
    for c in coefficients {
        hasher.update(c.as_bytes());
        hasher.update(b",");
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// How a lookup was satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    /// Generated and written (no file, or the file held too few orders).
    Miss,
    /// The stored file was unreadable or failed its checksum and was rewritten.
    Replaced(String),
}

#[derive(Debug)]
pub struct CoefficientCache {
    dir: PathBuf,
    lock: RwLock<()>,
}

impl CoefficientCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CoefficientCache {
            dir: dir.into(),
            lock: RwLock::new(()),
        }
    }

    /// Uses `$VPT_CACHE_DIR` when set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, p: u32, level: u32) -> PathBuf {
        self.dir
            .join(format!("bw-p{p}-level{level}-v{FORMAT_VERSION}.json"))
    }

    /// `Ok(None)` when no file exists; an error when one exists but is bad.
    pub fn load(&self, p: u32, level: u32) -> Result<Option<BwSeries>> {
        let _guard = self.lock.read().unwrap_or_else(|e| e.into_inner());
        let path = self.path_for(p, level);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let doc: CacheDocument = serde_json::from_str(&text)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if doc.p != p || doc.level != level {
            return Err(Error::Cache(format!(
                "{} holds p={} level={}",
                path.display(),
                doc.p,
                doc.level
            )));
        }
        doc.into_series().map(Some)
    }

    /// Atomically replaces the document for `series.p()`.
    pub fn store(&self, series: &BwSeries) -> Result<()> {
        let _guard = self.lock.write().unwrap_or_else(|e| e.into_inner());
        fs::create_dir_all(&self.dir)?;
        let doc = CacheDocument::from_series(series);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, &doc)?;
        tmp.write_all(b"\n")?;
        tmp.persist(self.path_for(series.p(), series.level()))
            .map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Serves `order` coefficients from disk when possible, otherwise
    /// generates them and updates the file.
    pub fn get_or_generate(&self, p: u32, order: usize) -> Result<(BwSeries, CacheOutcome)> {
        let outcome = match self.load(p, 0) {
            Ok(Some(series)) if series.order() >= order => {
                return Ok((series.truncated(order), CacheOutcome::Hit));
            }
            Ok(_) => CacheOutcome::Miss,
            Err(Error::InvalidPower(p)) => return Err(Error::InvalidPower(p)),
            Err(e) => CacheOutcome::Replaced(e.to_string()),
        };
        let series = generate_bw_coefficients(p, order)?;
        self.store(&series)?;
        Ok((series, outcome))
    }
}
