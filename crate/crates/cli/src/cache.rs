//! Optional on-disk certificate store under $ARR_CACHE_DIR. Entries are
//! re-verified before use, so a stale or corrupt file only costs a recompute.

use std::path::PathBuf;

use arrfac::linform::render_source;
use arrfac::{Arrangement, Certificate};
use sha2::{Digest, Sha256};

pub fn key(command: &str, a: &Arrangement, partition: &str) -> String {
    // Witnesses name hyperplanes by position, so the key keeps the file order.
    let text = format!("{command}\n{}\n{partition}", render_source(&a.to_source(), false));
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn path(key: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("ARR_CACHE_DIR")?;
    Some(PathBuf::from(dir).join(format!("{key}.json")))
}

pub fn load(key: &str) -> Option<Certificate> {
    let bytes = std::fs::read(path(key)?).ok()?;
    serde_json::from_slice(&bytes).ok()
}

pub fn store(key: &str, cert: &Certificate) {
    let Some(p) = path(key) else {
        return;
    };
    if let Some(dir) = p.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    let _ = std::fs::write(p, serde_json::to_vec_pretty(cert).expect("serializable"));
}
