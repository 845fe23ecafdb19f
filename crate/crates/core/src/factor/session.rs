use std::collections::HashMap;
use std::sync::Mutex;

use crate::arrangement::{ArrKey, Arrangement, Hyperplane};
use crate::linalg::Row;

use super::partition::Partition;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    /// Upper bound on the number of transversals an independence check may
    /// enumerate.
    pub max_transversals: u128,
    /// Worker threads for the parallel searches; 1 runs everything inline.
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_transversals: 1_000_000, jobs: 1 }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct IfEntry {
    pub exponents: Vec<usize>,
    /// The hyperplane removed last; `None` for the empty arrangement.
    pub pivot: Option<Hyperplane>,
}

/// Blocks as sorted lists of normals, sorted: independent of hyperplane order.
pub(crate) type PairKey = (ArrKey, Vec<Vec<Row>>);

/// Search configuration and the memo tables shared by the recursive checks.
/// Safe to share between threads; no lock is held while recursing.
pub struct Session {
    pub config: Config,
    pub(crate) if_memo: Mutex<HashMap<ArrKey, Option<IfEntry>>>,
    pub(crate) ifac_memo: Mutex<HashMap<PairKey, Option<Hyperplane>>>,
    pool: Option<rayon::ThreadPool>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(Config::default())
    }
}

impl Session {
    pub fn new(config: Config) -> Session {
        let pool = (config.jobs > 1)
            .then(|| rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build().ok())
            .flatten();
        Session { config, if_memo: Mutex::default(), ifac_memo: Mutex::default(), pool }
    }

    pub fn parallel(&self) -> bool {
        self.pool.is_some()
    }

    /// Run `f` inside this session's thread pool, if any.
    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }

    pub(crate) fn pair_key(a: &Arrangement, p: &Partition) -> PairKey {
        let mut blocks: Vec<Vec<Row>> = p
            .blocks()
            .iter()
            .map(|b| {
                let mut v: Vec<Row> = b.iter().map(|&i| a.normal(i).to_vec()).collect();
                v.sort();
                v
            })
            .collect();
        blocks.sort();
        (a.key(), blocks)
    }
}
