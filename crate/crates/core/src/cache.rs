//! Sharded LRU memo cache shared by the module action and the field engine.

use std::hash::{BuildHasher, Hash};
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use lru::LruCache;
use parking_lot::Mutex;

const SHARDS: usize = 16;

pub struct ShardedLru<K, V> {
    shards: Vec<Mutex<LruCache<K, Arc<V>>>>,
    hasher: std::collections::hash_map::RandomState,
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl<K: Hash + Eq, V> ShardedLru<K, V> {
    /// `capacity` is the total bound across shards.
    pub fn new(capacity: usize) -> Self {
        let per = NonZeroUsize::new(capacity.div_ceil(SHARDS).max(1)).unwrap();
        ShardedLru {
            shards: (0..SHARDS).map(|_| Mutex::new(LruCache::new(per))).collect(),
            hasher: Default::default(),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    fn shard(&self, k: &K) -> &Mutex<LruCache<K, Arc<V>>> {
        &self.shards[(self.hasher.hash_one(k) as usize) % SHARDS]
    }

    pub fn get(&self, k: &K) -> Option<Arc<V>> {
        let hit = self.shard(k).lock().get(k).cloned();
        let counter = if hit.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        hit
    }

    pub fn insert(&self, k: K, v: Arc<V>) {
        self.shard(&k).lock().put(k, v);
    }

    /// Looks up `k`, computing and storing it on a miss. The lock is not held
    /// while `f` runs, so concurrent misses on the same key may both compute.
    pub fn get_or_insert_with(&self, k: K, f: impl FnOnce() -> V) -> Arc<V> {
        if let Some(v) = self.get(&k) {
            return v;
        }
        let v = Arc::new(f());
        self.insert(k, v.clone());
        v
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.shards.iter().map(|s| s.lock().len()).sum(),
        }
    }

    pub fn clear(&self) {
        for s in &self.shards {
            s.lock().clear();
        }
    }
}
