//! Persistent point-count cache.
//!
//! One JSON object per line: {"hash": "<hex>", "p": p, "k": k, "n": count},
//! keyed by a hash of the curve polynomial together with the field
//! parameters.  Corrupted lines are rejected with their line numbers; the
//! rest of the file stays usable.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use manyauto::poly::QPoly;

pub struct CountCache {
    path: Option<PathBuf>,
    map: HashMap<(u64, u64, u64), u64>,
}

impl CountCache {
    /// In-memory cache without persistence.
    pub fn in_memory() -> CountCache {
        CountCache {
            path: None,
            map: HashMap::new(),
        }
    }

    /// Open (or create) a cache file, loading all intact lines.
    pub fn open(path: PathBuf) -> anyhow::Result<CountCache> {
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(&line) {
                    Some((h, p, k, n)) => {
                        map.insert((h, p, k), n);
                    }
                    None => eprintln!(
                        "cache {}: rejecting corrupted line {}",
                        path.display(),
                        idx + 1
                    ),
                }
            }
        }
        Ok(CountCache {
            path: Some(path),
            map,
        })
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, hash: u64, p: u64, k: usize) -> Option<u64> {
        self.map.get(&(hash, p, k as u64)).copied()
    }

    pub fn put(&mut self, hash: u64, p: u64, k: usize, n: u64) {
        if self.map.insert((hash, p, k as u64), n) == Some(n) {
            return; // already recorded
        }
        if let Some(path) = &self.path {
            let line = serde_json::json!({
                "hash": format!("{hash:016x}"),
                "p": p,
                "k": k,
                "n": n,
            });
            let appended = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .and_then(|mut f| writeln!(f, "{line}"));
            if let Err(e) = appended {
                eprintln!("cache {}: write failed: {e}", path.display());
            }
        }
    }
}

fn parse_line(line: &str) -> Option<(u64, u64, u64, u64)> {
    let v: serde_json::Value = serde_json::from_str(line).ok()?;
    let hash = u64::from_str_radix(v.get("hash")?.as_str()?, 16).ok()?;
    let p = v.get("p")?.as_u64()?;
    let k = v.get("k")?.as_u64()?;
    let n = v.get("n")?.as_u64()?;
    Some((hash, p, k, n))
}

/// FNV-1a over the primitive integer coefficients of the model.
pub fn poly_hash(f: &QPoly) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for c in f.primitive_int() {
        for b in c.to_string().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^= b',' as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.jsonl");
        let mut c = CountCache::open(path.clone()).unwrap();
        c.put(7, 37, 1, 50);
        c.put(7, 37, 2, 1446);
        drop(c);
        // append garbage between valid lines
        {
            use std::io::Write;
            let mut f = OpenOptions::new().append(true).open(&path).unwrap();
            writeln!(f, "{{not json").unwrap();
            writeln!(f, "{{\"hash\":\"0000000000000007\",\"p\":61,\"k\":1,\"n\":70}}").unwrap();
        }
        let c = CountCache::open(path).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.get(7, 37, 1), Some(50));
        assert_eq!(c.get(7, 37, 2), Some(1446));
        assert_eq!(c.get(7, 61, 1), Some(70));
        assert_eq!(c.get(7, 61, 2), None);
    }

    #[test]
    fn hash_distinguishes_polynomials() {
        let f = QPoly::from_ints(&[1, -19, -494, -494, -19, 1]);
        let g = QPoly::from_ints(&[1, -19, -494, -494, -19, 2]);
        assert_ne!(poly_hash(&f), poly_hash(&g));
        assert_eq!(poly_hash(&f), poly_hash(&f.clone()));
    }
}
