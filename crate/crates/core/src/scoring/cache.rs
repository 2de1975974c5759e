use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::logistic::{score_uncached, BlanketScore, ScoreConfig};
use crate::data_model::BinaryDataset;
use crate::error::Result;

/// Snapshot of the cache counters.
///
/// `evaluations` counts distinct `(target, blanket)` fits inserted into the cache, which is
/// the iteration count reported by the learners.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheCounters {
    pub evaluations: u64,
    pub hits: u64,
    pub pairwise_evaluations: u64,
    pub blanket_size_sum: u64,
}

impl CacheCounters {
    pub fn since(&self, earlier: &CacheCounters) -> CacheCounters {
        CacheCounters {
            evaluations: self.evaluations - earlier.evaluations,
            hits: self.hits - earlier.hits,
            pairwise_evaluations: self.pairwise_evaluations - earlier.pairwise_evaluations,
            blanket_size_sum: self.blanket_size_sum - earlier.blanket_size_sum,
        }
    }
}

type Shard = Mutex<HashMap<Box<[usize]>, Arc<BlanketScore>>>;

/// Memoized blanket scores, sharded by target variable.
///
/// The key is `(target, sorted blanket)`; the configuration is fixed for the lifetime of
/// the cache. Concurrent workers may race to fit the same key: both compute the same value
/// and only the one that inserts first is counted.
pub struct ScoreCache {
    shards: Vec<Shard>,
    evaluations: AtomicU64,
    hits: AtomicU64,
    pairwise: AtomicU64,
    size_sum: AtomicU64,
}

impl ScoreCache {
    pub fn new(n_vars: usize) -> Self {
        Self {
            shards: (0..n_vars).map(|_| Mutex::new(HashMap::new())).collect(),
            evaluations: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            pairwise: AtomicU64::new(0),
            size_sum: AtomicU64::new(0),
        }
    }

    pub fn score_blanket(
        &self,
        data: &BinaryDataset,
        j: usize,
        blanket: &[usize],
        cfg: &ScoreConfig,
    ) -> Result<Arc<BlanketScore>> {
        if let Some(shard) = self.shards.get(j) {
            if let Some(hit) = shard.lock().unwrap().get(blanket) {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(Arc::clone(hit));
            }
        }
        let fresh = Arc::new(score_uncached(data, j, blanket, cfg)?);
        let shard = &self.shards[j];
        let mut map = shard.lock().unwrap();
        match map.get(blanket) {
            Some(existing) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Ok(Arc::clone(existing))
            }
            None => {
                map.insert(blanket.into(), Arc::clone(&fresh));
                self.evaluations.fetch_add(1, Ordering::Relaxed);
                self.size_sum.fetch_add(blanket.len() as u64, Ordering::Relaxed);
                if blanket.len() == 1 {
                    self.pairwise.fetch_add(1, Ordering::Relaxed);
                }
                Ok(fresh)
            }
        }
    }

    pub fn bic(&self, data: &BinaryDataset, j: usize, blanket: &[usize], cfg: &ScoreConfig) -> Result<f64> {
        Ok(self.score_blanket(data, j, blanket, cfg)?.bic)
    }

    pub fn get(&self, j: usize, blanket: &[usize]) -> Option<Arc<BlanketScore>> {
        self.shards.get(j)?.lock().unwrap().get(blanket).cloned()
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(|s| s.lock().unwrap().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops every stored score; counters are left untouched.
    pub fn clear(&self) {
        for s in &self.shards {
            s.lock().unwrap().clear();
        }
    }

    pub fn counters(&self) -> CacheCounters {
        CacheCounters {
            evaluations: self.evaluations.load(Ordering::Relaxed),
            hits: self.hits.load(Ordering::Relaxed),
            pairwise_evaluations: self.pairwise.load(Ordering::Relaxed),
            blanket_size_sum: self.size_sum.load(Ordering::Relaxed),
        }
    }
}
