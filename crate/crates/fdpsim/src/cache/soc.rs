//! Set-associative small-object cache.
//!
//! Items hash to a fixed bucket; every insert rewrites the bucket's page in
//! place at its fixed LBA. Within a bucket the replacement policy is FIFO:
//! the oldest entries fall out until the new contents fit.

use crate::ftl::Lba;
use crate::rng::mix2;

/// Metadata charged against bucket (and region) capacity per stored item.
pub(crate) const ITEM_HEADER_BYTES: u32 = 8;

#[derive(Debug, Clone, Copy)]
struct SocEntry {
    key: u64,
    size: u32,
}

struct Bucket {
    entries: Vec<SocEntry>,
    fill: u32,
}

pub(crate) struct SocEngine {
    bucket_count: u64,
    bucket_bytes: u32,
    base_page: Lba,
    hash_seed: u64,
    buckets: Vec<Bucket>,
}

impl SocEngine {
    pub fn new(bucket_count: u64, bucket_bytes: u64, base_page: Lba, hash_seed: u64) -> Self {
        Self {
            bucket_count,
            bucket_bytes: bucket_bytes as u32,
            base_page,
            hash_seed,
            buckets: (0..bucket_count)
                .map(|_| Bucket {
                    entries: Vec::new(),
                    fill: 0,
                })
                .collect(),
        }
    }

    pub fn bucket_of(&self, key: u64) -> u64 {
        mix2(self.hash_seed, key) % self.bucket_count
    }

    pub fn bucket_lba(&self, bucket: u64) -> Lba {
        self.base_page + bucket
    }

    /// Add (or refresh) an item; FIFO-drop the oldest entries until the
    /// bucket fits. Returns the bucket index whose page must be rewritten.
    pub fn insert(&mut self, key: u64, size: u32) -> u64 {
        let idx = self.bucket_of(key);
        let bucket = &mut self.buckets[idx as usize];
        if let Some(pos) = bucket.entries.iter().position(|e| e.key == key) {
            let old = bucket.entries.remove(pos);
            bucket.fill -= old.size + ITEM_HEADER_BYTES;
        }
        bucket.entries.push(SocEntry { key, size });
        bucket.fill += size + ITEM_HEADER_BYTES;
        while bucket.fill > self.bucket_bytes {
            let victim = bucket.entries.remove(0);
            bucket.fill -= victim.size + ITEM_HEADER_BYTES;
        }
        idx
    }

    pub fn lookup(&self, key: u64) -> Option<u32> {
        let idx = self.bucket_of(key);
        self.buckets[idx as usize]
            .entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.size)
    }

    /// Drop `key`; returns the bucket index to rewrite if it was resident.
    pub fn remove(&mut self, key: u64) -> Option<u64> {
        let idx = self.bucket_of(key);
        let bucket = &mut self.buckets[idx as usize];
        let pos = bucket.entries.iter().position(|e| e.key == key)?;
        let old = bucket.entries.remove(pos);
        bucket.fill -= old.size + ITEM_HEADER_BYTES;
        Some(idx)
    }
}
