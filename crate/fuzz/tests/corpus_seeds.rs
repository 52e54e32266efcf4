//! Every checked-in corpus seed must take its decoder's accept path: the
//! seeds exist to show the fuzzer what well-formed input looks like, and a
//! seed that silently falls into the reject path teaches it nothing.

use std::fs;
use std::path::PathBuf;

fn corpus(name: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    let mut out = Vec::new();
    for entry in fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
        let path = entry.unwrap().path();
        let bytes = fs::read(&path).unwrap();
        out.push((path, bytes));
    }
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn grid_seeds_decode() {
    for (path, bytes) in corpus("mgf1_decode") {
        metaplectic::mgf1::from_bytes(&bytes)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn symplectic_seeds_decode() {
    for (path, bytes) in corpus("symplectic_json") {
        let text = std::str::from_utf8(&bytes).unwrap();
        metaplectic::SymplecticMatrix::from_json(text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn gaussian_seeds_decode() {
    for (path, bytes) in corpus("gaussian_json") {
        let text = std::str::from_utf8(&bytes).unwrap();
        metaplectic::GaussianState::from_json(text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn experiment_config_seeds_parse_and_resolve() {
    for (path, bytes) in corpus("experiment_config") {
        let text = std::str::from_utf8(&bytes).unwrap();
        let cfg = metaplectic_cli::config::ExperimentConfig::parse(text)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if let Some(op) = &cfg.operator {
            op.resolve().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
}
