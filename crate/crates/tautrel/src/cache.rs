//! Persistent, content-addressed memo store.
//!
//! Append-only line-oriented text file with an in-memory index: human
//! auditable and trivially mergeable. Format (bit-exact):
//!
//! ```text
//! TAUTREL-CACHE v1 engine=<semver>
//! <kind>|<key>|<value>|<crc32-hex>
//! ```
//!
//! `kind` is `WK`, `KERNEL` or `PAIRING`; the canonical keys are
//! `WK|<g>|<d-multiset>`, `K|<g>|<k>|<d-vector>|<d0>` (exponents sorted
//! descending) and `P|<class>|<g>|<n>|<m>|<b-vector>`. The checksum covers
//! `<kind>|<key>|<value>`. Entries written by another engine version are
//! invisible; the file is rewritten under the current header on the first
//! write after a version change.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

const HEADER_PREFIX: &str = "TAUTREL-CACHE v1 engine=";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("conflicting value for key {0}: cached and computed values differ")]
    Conflict(String),
    #[error("audit failure: {0} of {1} sampled entries differ: {2:?}")]
    AuditFailure(usize, usize, Vec<String>),
}

/// One corrupt line found while loading (checksum mismatch or bad shape).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptEntry {
    pub line_number: usize,
    pub line: String,
}

#[derive(Debug)]
pub struct CacheStore {
    path: Option<PathBuf>,
    entries: BTreeMap<String, String>,
    corrupt: Vec<CorruptEntry>,
    /// Set when the on-disk file belongs to a different engine version and
    /// must be rewritten before the next append.
    needs_rewrite: bool,
}

fn crc32(data: &[u8]) -> u32 {
    // CRC-32 (IEEE 802.3), bitwise
    let mut crc: u32 = 0xffff_ffff;
    for &b in data {
        crc ^= b as u32;
        for _ in 0..8 {
            let mask = (crc & 1).wrapping_neg();
            crc = (crc >> 1) ^ (0xedb8_8320 & mask);
        }
    }
    !crc
}

fn line_for(kind: &str, key: &str, value: &str) -> String {
    let body = format!("{kind}|{key}|{value}");
    format!("{body}|{:08x}", crc32(body.as_bytes()))
}

impl CacheStore {
    /// Purely in-memory store (used by tests and `--no-cache` runs).
    pub fn in_memory() -> Self {
        CacheStore { path: None, entries: BTreeMap::new(), corrupt: Vec::new(), needs_rewrite: false }
    }

    /// Open (or create lazily) the store at `path`; corrupt lines are
    /// collected and ignored.
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let mut store = CacheStore {
            path: Some(path.to_path_buf()),
            entries: BTreeMap::new(),
            corrupt: Vec::new(),
            needs_rewrite: false,
        };
        if !path.exists() {
            return Ok(store);
        }
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == format!("{HEADER_PREFIX}{ENGINE_VERSION}") => {}
            Some(_) => {
                // stale or foreign header: ignore every entry
                store.needs_rewrite = true;
                return Ok(store);
            }
            None => return Ok(store),
        }
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            match Self::parse_line(line) {
                Some((kind, key, value)) => {
                    store.entries.insert(format!("{kind}|{key}"), value);
                }
                None => store.corrupt.push(CorruptEntry { line_number: no + 1, line: line.to_string() }),
            }
        }
        Ok(store)
    }

    fn parse_line(line: &str) -> Option<(String, String, String)> {
        let parts: Vec<&str> = line.split('|').collect();
        if parts.len() < 4 {
            return None;
        }
        let crc_hex = parts[parts.len() - 1];
        let value = parts[parts.len() - 2];
        let kind = parts[0];
        let key = parts[1..parts.len() - 2].join("|");
        let body = format!("{kind}|{key}|{value}");
        let crc: u32 = u32::from_str_radix(crc_hex, 16).ok()?;
        if crc != crc32(body.as_bytes()) {
            return None;
        }
        Some((kind.to_string(), key, value.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn corrupt_entries(&self) -> &[CorruptEntry] {
        &self.corrupt
    }

    pub fn get(&self, kind: &str, key: &str) -> Option<&str> {
        self.entries.get(&format!("{kind}|{key}")).map(String::as_str)
    }

    /// Entries of one kind, as `(key, value)` pairs in key order.
    pub fn entries_of(&self, kind: &str) -> Vec<(String, String)> {
        let prefix = format!("{kind}|");
        self.entries
            .range(prefix.clone()..)
            .take_while(|(k, _)| k.starts_with(&prefix))
            .map(|(k, v)| (k[prefix.len()..].to_string(), v.clone()))
            .collect()
    }

    /// Durable append. Duplicate equal puts are no-ops; unequal values for
    /// the same key are a hard error (a nondeterminism bug upstream).
    pub fn put(&mut self, kind: &str, key: &str, value: &str) -> Result<(), CacheError> {
        let full = format!("{kind}|{key}");
        if let Some(old) = self.entries.get(&full) {
            if old == value {
                return Ok(());
            }
            return Err(CacheError::Conflict(full));
        }
        self.entries.insert(full, value.to_string());
        if let Some(path) = self.path.clone() {
            if self.needs_rewrite || !path.exists() {
                self.rewrite(&path)?;
            } else {
                let mut f = fs::OpenOptions::new().append(true).open(&path)?;
                writeln!(f, "{}", line_for(kind, key, value))?;
            }
        }
        Ok(())
    }

    fn rewrite(&mut self, path: &Path) -> Result<(), CacheError> {
        let mut out = String::new();
        out += &format!("{HEADER_PREFIX}{ENGINE_VERSION}\n");
        for (full, value) in &self.entries {
            let (kind, key) = full.split_once('|').expect("full key has a kind");
            out += &line_for(kind, key, value);
            out.push('\n');
        }
        fs::write(path, out)?;
        self.needs_rewrite = false;
        Ok(())
    }

    /// Import every entry of another store file; conflicting values error.
    pub fn merge_from(&mut self, other: &Path) -> Result<usize, CacheError> {
        let other = CacheStore::open(other)?;
        let mut added = 0;
        for (full, value) in other.entries {
            let (kind, key) = full.split_once('|').expect("full key has a kind");
            if self.get(kind, key).is_none() {
                self.put(kind, key, &value)?;
                added += 1;
            } else if self.get(kind, key) != Some(value.as_str()) {
                return Err(CacheError::Conflict(full));
            }
        }
        Ok(added)
    }

    /// Write the whole store to `path` under the current header.
    pub fn export_to(&self, path: &Path) -> Result<(), CacheError> {
        let mut clone = CacheStore {
            path: Some(path.to_path_buf()),
            entries: self.entries.clone(),
            corrupt: Vec::new(),
            needs_rewrite: false,
        };
        clone.rewrite(path)?;
        Ok(())
    }

    /// Recompute a deterministic sample of entries from scratch and compare
    /// exactly. `recompute` maps `(kind, key)` to the canonical value.
    pub fn audit(
        &self,
        fraction: f64,
        seed: u64,
        mut recompute: impl FnMut(&str, &str) -> Option<String>,
    ) -> Result<usize, CacheError> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let keys: Vec<String> = self.entries.keys().cloned().collect();
        let sample_size = ((keys.len() as f64) * fraction).ceil() as usize;
        let sample: Vec<String> =
            keys.choose_multiple(&mut rng, sample_size.min(keys.len())).cloned().collect();
        let mut bad = Vec::new();
        for full in &sample {
            let (kind, key) = full.split_once('|').expect("full key has a kind");
            match recompute(kind, key) {
                Some(fresh) if Some(fresh.as_str()) == self.get(kind, key) => {}
                _ => bad.push(full.clone()),
            }
        }
        if bad.is_empty() {
            Ok(sample.len())
        } else {
            Err(CacheError::AuditFailure(bad.len(), sample.len(), bad))
        }
    }
}
