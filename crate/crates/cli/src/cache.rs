//! Persistent solution cache: append-only JSON lines.
//!
//! Entries are only hints. Every hit is replayed through the matching
//! checker before use, so a stale or tampered file can cost time but never
//! change an answer.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const ENV_VAR: &str = "RESYM_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    LegendreEq,
    RelativeConic,
    Redei,
    Symbol4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub kind: Kind,
    pub primes: Vec<String>,
    /// Further key material, e.g. the `α` of a relative conic.
    #[serde(default)]
    pub extra: String,
    pub budget: String,
    pub timestamp: u64,
    pub solution: Value,
}

type Key = (Kind, Vec<String>, String, String);

fn key_of(e: &CacheEntry) -> Key {
    (e.kind, e.primes.clone(), e.extra.clone(), e.budget.clone())
}

pub struct Cache {
    path: PathBuf,
    entries: Mutex<HashMap<Key, Value>>,
    writer: Mutex<File>,
}

impl Cache {
    /// Opens (creating if needed) the cache at `path`. Unparseable lines,
    /// such as a partial line left by a crash, are skipped.
    pub fn open(path: &Path) -> io::Result<Cache> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let mut entries = HashMap::new();
        for line in BufReader::new(&file).lines() {
            let line = line?;
            if let Ok(e) = serde_json::from_str::<CacheEntry>(&line) {
                entries.insert(key_of(&e), e.solution);
            }
        }
        Ok(Cache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
            writer: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, kind: Kind, primes: &[&BigInt], extra: &str, budget: &str) -> Option<Value> {
        let key = (
            kind,
            primes.iter().map(|p| p.to_string()).collect(),
            extra.to_string(),
            budget.to_string(),
        );
        self.entries.lock().unwrap().get(&key).cloned()
    }

    /// Appends one entry. Writers are serialized in-process by a mutex and
    /// across processes by an exclusive file lock held for the append.
    pub fn put(
        &self,
        kind: Kind,
        primes: &[&BigInt],
        extra: &str,
        budget: &str,
        solution: Value,
    ) -> io::Result<()> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let entry = CacheEntry {
            kind,
            primes: primes.iter().map(|p| p.to_string()).collect(),
            extra: extra.to_string(),
            budget: budget.to_string(),
            timestamp,
            solution,
        };
        let mut line = serde_json::to_string(&entry).map_err(io::Error::other)?;
        line.push('\n');
        {
            let mut f = self.writer.lock().unwrap();
            f.lock()?;
            let res = append_line(&mut f, &line);
            f.unlock()?;
            res?;
        }
        self.entries
            .lock()
            .unwrap()
            .insert(key_of(&entry), entry.solution);
        Ok(())
    }
}

/// Terminates a partial trailing line before appending.
fn append_line(f: &mut File, line: &str) -> io::Result<()> {
    if f.metadata()?.len() > 0 {
        f.seek(SeekFrom::End(-1))?;
        let mut last = [0u8];
        f.read_exact(&mut last)?;
        if last[0] != b'\n' {
            f.write_all(b"\n")?;
        }
    }
    f.write_all(line.as_bytes())?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use resym_core::big;
    use serde_json::json;

    #[test]
    fn round_trip_and_partial_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        {
            let c = Cache::open(&path).unwrap();
            assert!(c.is_empty());
            c.put(
                Kind::LegendreEq,
                &[&big(5), &big(29)],
                "",
                "10000",
                json!([1, 2]),
            )
            .unwrap();
        }
        // simulate a crash in the middle of a write
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"kind\":\"redei\",\"pri").unwrap();
        drop(f);
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(
            c.get(Kind::LegendreEq, &[&big(5), &big(29)], "", "10000"),
            Some(json!([1, 2]))
        );
        assert_eq!(
            c.get(Kind::LegendreEq, &[&big(5), &big(29)], "", "99"),
            None
        );
        c.put(
            Kind::Redei,
            &[&big(13), &big(61), &big(937)],
            "",
            "10000",
            json!(-1),
        )
        .unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.len(), 2);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
    }
}
