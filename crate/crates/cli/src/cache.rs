//! On-disk table cache: versioned JSON with counts as decimal strings
//! (counts outgrow 64-bit integers almost immediately), written atomically
//! and spot-checked against recomputation on load.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache parse: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache format version {found} not supported (expected {FORMAT_VERSION})")]
    VersionMismatch { found: u32 },
    #[error("cache value for {family} (p={p:?}) at n={n} is not a decimal integer: {raw}")]
    BadValue {
        family: String,
        p: Option<u32>,
        n: u64,
        raw: String,
    },
    #[error(
        "cache spot-check failed for {family} (p={p:?}) at n={n}: cached {cached}, recomputed {recomputed}"
    )]
    SpotCheckFailed {
        family: String,
        p: Option<u32>,
        n: u64,
        cached: String,
        recomputed: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheFile {
    pub format_version: u32,
    pub entries: Vec<CacheEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub family: String,
    #[serde(default)]
    pub p: Option<u32>,
    pub route: String,
    pub tool_version: String,
    pub values: Vec<CacheValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheValue {
    pub n: u64,
    pub count: String,
}

impl CacheEntry {
    pub fn max_index(&self) -> Option<u64> {
        self.values.iter().map(|v| v.n).max()
    }

    pub fn get(&self, n: u64) -> Option<&str> {
        self.values
            .iter()
            .find(|v| v.n == n)
            .map(|v| v.count.as_str())
    }
}

/// How much of a loaded cache to re-verify against recomputation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(dead_code)] // the command surface uses Fraction; tests use the rest
pub enum SpotCheck {
    None,
    /// Verify roughly this fraction of values (at least one per entry).
    Fraction(f64),
    All,
}

/// Atomic store: write to a temporary file in the same directory, then
/// rename over the target.
pub fn cache_store(path: &Path, file: &CacheFile) -> Result<(), CacheError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, file)?;
    tmp.persist(path).map_err(|e| CacheError::Io(e.error))?;
    Ok(())
}

/// Loads and validates a cache file. `recompute` must return the exact
/// count for a `(family, p, n)` triple, or `None` when it cannot; checked
/// values are chosen deterministically from the file contents.
pub fn cache_load(
    path: &Path,
    spot: SpotCheck,
    recompute: impl Fn(&str, Option<u32>, u64) -> Option<BigInt>,
) -> Result<CacheFile, CacheError> {
    let raw = std::fs::read_to_string(path)?;
    let file: CacheFile = serde_json::from_str(&raw)?;
    if file.format_version != FORMAT_VERSION {
        return Err(CacheError::VersionMismatch {
            found: file.format_version,
        });
    }
    for entry in &file.entries {
        let picks = match spot {
            SpotCheck::None => Vec::new(),
            SpotCheck::All => (0..entry.values.len()).collect(),
            SpotCheck::Fraction(f) => {
                let len = entry.values.len();
                let want = ((len as f64 * f).ceil() as usize).max(1);
                // always include the highest index (the resume point), then
                // stride deterministically, positioned by a content hash so
                // different tables exercise different indices
                let seed = entry
                    .values
                    .iter()
                    .map(|v| v.n as usize ^ v.count.len())
                    .fold(0usize, |a, b| a.wrapping_mul(31).wrapping_add(b));
                let mut picks: Vec<usize> = (0..want.min(len))
                    .map(|i| (seed.wrapping_add(i * len / want.max(1))) % len)
                    .collect();
                if let Some(top) = entry
                    .values
                    .iter()
                    .enumerate()
                    .max_by_key(|(_, v)| v.n)
                    .map(|(i, _)| i)
                {
                    picks.push(top);
                }
                picks
            }
        };
        for i in picks {
            let v = &entry.values[i];
            let cached = BigInt::from_str(&v.count).map_err(|_| CacheError::BadValue {
                family: entry.family.clone(),
                p: entry.p,
                n: v.n,
                raw: v.count.clone(),
            })?;
            if let Some(fresh) = recompute(&entry.family, entry.p, v.n) {
                if fresh != cached {
                    return Err(CacheError::SpotCheckFailed {
                        family: entry.family.clone(),
                        p: entry.p,
                        n: v.n,
                        cached: cached.to_string(),
                        recomputed: fresh.to_string(),
                    });
                }
            }
        }
    }
    Ok(file)
}
