#![allow(dead_code)]

use std::path::PathBuf;

use arrfac::{parse_arrangement_file, Arrangement, Partition};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub const NAMES: [&str; 10] = [
    "a222",
    "notfactored",
    "ot454",
    "d13",
    "d21xphi1",
    "g333",
    "g333hat",
    "indfreefactored-notindfactored",
    "indfreefactored-notindfactored2",
    "notheredfactored",
];

pub fn load(name: &str) -> (Arrangement, Option<Partition>) {
    let bytes = std::fs::read(corpus_dir().join(format!("{name}.json"))).unwrap();
    let src = parse_arrangement_file(&bytes).unwrap();
    let p = src.partition.as_deref().map(|p| Partition::parse(p).unwrap());
    (Arrangement::from_source(&src).unwrap(), p)
}

pub fn arrangement(name: &str) -> Arrangement {
    load(name).0
}

pub fn partition(name: &str) -> Partition {
    load(name).1.unwrap()
}

/// Blocks as a sorted list of sorted lists, for order-free comparison.
pub fn block_set(p: &Partition) -> Vec<Vec<usize>> {
    let mut b: Vec<Vec<usize>> = p
        .blocks()
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    b.sort();
    b
}

/// Multiset containment of sorted sequences.
pub fn multiset_contains(big: &[usize], small: &[usize]) -> bool {
    let mut rest = big.to_vec();
    small.iter().all(|s| match rest.iter().position(|b| b == s) {
        Some(i) => {
            rest.remove(i);
            true
        }
        None => false,
    })
}
