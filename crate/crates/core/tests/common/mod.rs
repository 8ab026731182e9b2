#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use sbgen_core::{load_bag, load_grammar, Bag, Grammar};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn grammar(rel: &str) -> Grammar {
    load_grammar(&fs::read_to_string(fixture(rel)).unwrap()).unwrap()
}

pub fn bag(rel: &str) -> Bag {
    load_bag(&fs::read_to_string(fixture(rel)).unwrap()).unwrap()
}

/// Every `.sbb` under `fixtures/oracle`, sorted by name.
pub fn oracle_bags() -> Vec<(String, Bag)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixture("oracle"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sbb"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, load_bag(&fs::read_to_string(&p).unwrap()).unwrap())
        })
        .collect()
}
