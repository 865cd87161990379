//! Content-addressed store of computed invariants.
//!
//! Keys hash the canonical JSON of everything that determines the value:
//! engine version, target, class, twist and insertion strings. Weight seeds
//! are left out since results do not depend on them.

use std::fs;
use std::path::{Path, PathBuf};

use gwloc_core::engine::ENGINE_VERSION;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const CACHE_ENV: &str = "GWLOC_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

pub enum Lookup {
    Hit(Value),
    Miss,
    /// The entry existed but could not be used.
    Corrupt(String),
}

pub fn key(config: &RunConfig) -> String {
    key_with_version(config, ENGINE_VERSION)
}

pub fn key_with_version(config: &RunConfig, version: &str) -> String {
    let canonical = json!({
        "engine_version": version,
        "target": config.target,
        "class": config.class,
        "twist": config.twist,
        "insertions": config.insertions.iter().map(|s| s.split_whitespace().collect::<String>()).collect::<Vec<_>>(),
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    hex::encode(digest)
}

impl Cache {
    /// The configured cache, if any: the config's own path wins over the
    /// environment.
    pub fn for_config(config: &RunConfig) -> Option<Cache> {
        config
            .cache
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(|dir| Cache { dir })
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let path = self.path(key);
        let Ok(text) = fs::read_to_string(&path) else {
            return Lookup::Miss;
        };
        let entry: Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        if entry.get("engine_version").and_then(Value::as_str) != Some(ENGINE_VERSION)
            || entry.get("key").and_then(Value::as_str) != Some(key)
        {
            return Lookup::Corrupt(format!("{}: stale or mismatched entry", path.display()));
        }
        match entry.get("result") {
            Some(r) if r.is_object() => Lookup::Hit(r.clone()),
            _ => Lookup::Corrupt(format!("{}: missing result", path.display())),
        }
    }

    pub fn put(&self, key: &str, result: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = json!({ "engine_version": ENGINE_VERSION, "key": key, "result": result });
        // Write then rename so a concurrent reader never sees a partial file.
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(&entry).expect("serializable"))?;
        fs::rename(tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seeds: Option<Vec<u64>>) -> RunConfig {
        let mut c = RunConfig::from_json(
            r#"{"target": {"kind": "projective_space", "dim": 2}, "class": {"d": 1}, "insertions": ["H^2", "H ^ 2"]}"#,
        )
        .unwrap();
        c.seeds = seeds;
        c
    }

    #[test]
    fn key_ignores_seeds_and_whitespace() {
        assert_eq!(key(&config(None)), key(&config(Some(vec![1, 2]))));
        let mut other = config(None);
        other.insertions[1] = "H^2".into();
        assert_eq!(key(&config(None)), key(&other));
    }

    #[test]
    fn key_depends_on_version_and_class() {
        let c = config(None);
        assert_ne!(key(&c), key_with_version(&c, "0"));
        let mut d = c.clone();
        d.class.d = 2;
        assert_ne!(key(&c), key(&d));
    }

    #[test]
    fn roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let k = key(&config(None));
        assert!(matches!(cache.get(&k), Lookup::Miss));
        let v = json!({"laurent": {"0": "1"}});
        cache.put(&k, &v).unwrap();
        match cache.get(&k) {
            Lookup::Hit(r) => assert_eq!(r, v),
            _ => panic!("expected a hit"),
        }
        fs::write(dir.path().join(format!("{k}.json")), "{not json").unwrap();
        assert!(matches!(cache.get(&k), Lookup::Corrupt(_)));
    }
}
