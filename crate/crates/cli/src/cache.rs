//! On-disk result cache.
//!
//! Each entry is one JSON file named by the SHA-256 of the canonical request
//! (operation, parameters, code version). The file carries a format number,
//! the request itself and a checksum of the canonical payload. Anything that
//! fails to parse or verify is treated as a miss and overwritten.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const FORMAT: u64 = 1;

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Canonical request used as the cache key.
pub fn request(op: &str, params: &Value) -> Value {
    json!({
        "op": op,
        "params": params,
        "version": maclab_core::VERSION,
        "format": FORMAT,
    })
}

#[derive(Debug)]
pub enum Lookup {
    Hit(Value),
    Miss,
    Corrupt(String),
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn path_for(&self, request: &Value) -> PathBuf {
        self.dir
            .join(format!("{}.json", sha256_hex(&request.to_string())))
    }

    pub fn get(&self, request: &Value) -> Lookup {
        let path = self.path_for(request);
        let raw = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(e.to_string()),
        };
        match decode(&raw, request) {
            Ok(v) => Lookup::Hit(v),
            Err(why) => Lookup::Corrupt(why),
        }
    }

    /// Write through a temporary file so readers never see a partial entry.
    pub fn put(&self, request: &Value, payload: &Value) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(request);
        let body = json!({
            "format": FORMAT,
            "request": request,
            "checksum": sha256_hex(&payload.to_string()),
            "payload": payload,
        });
        let tmp = tmp_path(&path);
        fs::write(&tmp, body.to_string())?;
        fs::rename(tmp, path)
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(format!(".tmp{}", std::process::id()));
    PathBuf::from(s)
}

fn decode(raw: &str, request: &Value) -> Result<Value, String> {
    let v: Value = serde_json::from_str(raw).map_err(|e| format!("unreadable entry: {e}"))?;
    if v["format"].as_u64() != Some(FORMAT) {
        return Err("format mismatch".into());
    }
    if &v["request"] != request {
        return Err("request mismatch".into());
    }
    let payload = v.get("payload").ok_or("missing payload")?;
    if v["checksum"].as_str() != Some(sha256_hex(&payload.to_string()).as_str()) {
        return Err("checksum mismatch".into());
    }
    Ok(payload.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let req = request("x", &json!({"n": 2}));
        assert!(matches!(cache.get(&req), Lookup::Miss));
        let payload = json!({"b": [1, 2], "a": "z"});
        cache.put(&req, &payload).unwrap();
        match cache.get(&req) {
            Lookup::Hit(v) => assert_eq!(v, payload),
            other => panic!("{other:?}"),
        }
        let path = cache.path_for(&req);
        let tampered = fs::read_to_string(&path).unwrap().replace("\"z\"", "\"y\"");
        fs::write(&path, tampered).unwrap();
        assert!(matches!(cache.get(&req), Lookup::Corrupt(_)));
    }

    #[test]
    fn keys_depend_on_parameters() {
        let cache = Cache::new("/nonexistent");
        let a = cache.path_for(&request("x", &json!({"n": 2})));
        let b = cache.path_for(&request("x", &json!({"n": 3})));
        assert_ne!(a, b);
    }
}
