//! Append-only dossier cache.
//!
//! Records are `LFC1`, a little-endian u32 payload length, the JSON payload
//! `{"key": ..., "dossier": ...}`, and the first 8 bytes of the SHA-256 of the payload.
//! Records that fail the checksum or cannot be parsed are moved to a quarantine file.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::Dossier;
use crate::error::Result;

const MAGIC: &[u8; 4] = b"LFC1";
const FILE_NAME: &str = "dossiers.lfc";
pub const CACHE_ENV: &str = "LOGFREE_CACHE";

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    dossier: Dossier,
}

/// Hex digest of a string.
pub fn hex_digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn checksum(payload: &[u8]) -> [u8; 8] {
    let d = Sha256::digest(payload);
    let mut out = [0u8; 8];
    out.copy_from_slice(&d[..8]);
    out
}

pub fn encode_record(key: &str, dossier: &Dossier) -> Result<Vec<u8>> {
    let payload = serde_json::to_vec(&Record {
        key: key.to_string(),
        dossier: dossier.clone(),
    })
    .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    let mut out = Vec::with_capacity(payload.len() + 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.extend_from_slice(&payload);
    out.extend_from_slice(&checksum(&payload));
    Ok(out)
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct LoadStats {
    pub records: usize,
    pub quarantined: usize,
}

pub struct Cache {
    dir: PathBuf,
    entries: HashMap<String, Dossier>,
    stats: LoadStats,
}

impl Cache {
    /// Directory from `LOGFREE_CACHE`, else `./logfree-cache/`.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("logfree-cache"))
    }

    /// Opens (creating if needed) the cache in `dir`, loading every valid record.
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(FILE_NAME);
        let mut bytes = Vec::new();
        if path.exists() {
            File::open(&path)?.read_to_end(&mut bytes)?;
        }
        let mut entries = HashMap::new();
        let mut good: Vec<u8> = Vec::with_capacity(bytes.len());
        let mut bad: Vec<u8> = Vec::new();
        let mut stats = LoadStats::default();
        let mut pos = 0;
        while pos < bytes.len() {
            let rest = &bytes[pos..];
            if rest.len() < 8 || &rest[..4] != MAGIC {
                // Framing lost: everything from here on is quarantined.
                bad.extend_from_slice(rest);
                stats.quarantined += 1;
                break;
            }
            let len = u32::from_le_bytes(rest[4..8].try_into().expect("4 bytes")) as usize;
            let total = 8 + len + 8;
            if rest.len() < total {
                bad.extend_from_slice(rest);
                stats.quarantined += 1;
                break;
            }
            let payload = &rest[8..8 + len];
            let sum = &rest[8 + len..total];
            let parsed = (sum == checksum(payload))
                .then(|| serde_json::from_slice::<Record>(payload).ok())
                .flatten();
            match parsed {
                Some(r) => {
                    good.extend_from_slice(&rest[..total]);
                    entries.insert(r.key, r.dossier);
                    stats.records += 1;
                }
                None => {
                    bad.extend_from_slice(&rest[..total]);
                    stats.quarantined += 1;
                }
            }
            pos += total;
        }
        if !bad.is_empty() {
            let mut q = OpenOptions::new()
                .create(true)
                .append(true)
                .open(dir.join(format!("{FILE_NAME}.quarantine")))?;
            q.write_all(&bad)?;
            let tmp = dir.join(format!("{FILE_NAME}.tmp"));
            fs::write(&tmp, &good)?;
            fs::rename(&tmp, &path)?;
        }
        Ok(Cache {
            dir: dir.to_path_buf(),
            entries,
            stats,
        })
    }

    pub fn stats(&self) -> &LoadStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&Dossier> {
        self.entries.get(key)
    }

    /// Appends records for keys not yet present; existing keys are left untouched.
    pub fn append(&mut self, items: &[(String, Dossier)]) -> Result<usize> {
        let mut buf = Vec::new();
        let mut added = 0;
        for (key, d) in items {
            if self.entries.contains_key(key) {
                continue;
            }
            buf.extend_from_slice(&encode_record(key, d)?);
            self.entries.insert(key.clone(), d.clone());
            added += 1;
        }
        if !buf.is_empty() {
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(self.dir.join(FILE_NAME))?;
            f.write_all(&buf)?;
            f.flush()?;
        }
        Ok(added)
    }

    pub fn file_path(&self) -> PathBuf {
        self.dir.join(FILE_NAME)
    }
}
