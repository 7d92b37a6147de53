//! Library behind the `resym` binary: certificate JSON, the persistent
//! cache, corpus scanning and verification.

pub mod cache;
pub mod json;
pub mod outcome;
pub mod scan;
pub mod solver;
pub mod verify;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};

use cache::Cache;

/// `$RESYM_CACHE`, else `$XDG_CACHE_HOME/resym/cache.jsonl`, else
/// `$HOME/.cache/resym/cache.jsonl`.
pub fn cache_path() -> Option<(PathBuf, bool)> {
    let var = |k: &str| {
        std::env::var_os(k)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    };
    if let Some(p) = var(cache::ENV_VAR) {
        return Some((p, true));
    }
    let base = var("XDG_CACHE_HOME").or_else(|| var("HOME").map(|h| h.join(".cache")))?;
    Some((base.join("resym").join("cache.jsonl"), false))
}

/// Opens the cache. An explicitly configured path must be usable; the
/// default location is best effort.
pub fn open_cache(disabled: bool) -> Result<Option<Arc<Cache>>> {
    if disabled {
        return Ok(None);
    }
    let Some((path, explicit)) = cache_path() else {
        return Ok(None);
    };
    match Cache::open(&path) {
        Ok(c) => Ok(Some(Arc::new(c))),
        Err(e) if explicit => Err(e).with_context(|| format!("opening cache {}", path.display())),
        Err(e) => {
            eprintln!("warning: cache {} unavailable: {e}", path.display());
            Ok(None)
        }
    }
}
