//! Reproducibility stamps: every file the CLI writes carries a comment
//! with the seed and a hash of the config that produced it.

use sha2::{Digest, Sha256};

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// `seed=<n> config_sha256=<12 hex chars>`
pub fn meta_line(seed: u64, config_text: &str) -> String {
    format!("seed={seed} config_sha256={}", &sha256_hex(config_text)[..12])
}
