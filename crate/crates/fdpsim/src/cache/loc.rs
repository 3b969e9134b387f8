//! Log-structured large-object cache.
//!
//! Items append into an open region buffer; a full region flushes as one
//! sequential run of page writes and the ring cursor advances. Reopening a
//! slot evicts whatever the previous lap stored there — overwrite-based
//! invalidation, no explicit deallocation.

use std::collections::HashMap;

use crate::ftl::Lba;

use super::soc::ITEM_HEADER_BYTES;

#[derive(Debug, Clone, Copy)]
struct LocEntry {
    size: u32,
    /// Monotone flush sequence of the region holding the newest copy.
    seq: u64,
}

/// Device write the caller must issue for a flushed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct FlushSpec {
    pub base_page: Lba,
    pub pages: u64,
}

pub(crate) struct LocEngine {
    region_bytes: u64,
    region_pages: u64,
    num_regions: u64,
    base_page: Lba,
    /// Count of completed region flushes; the open region's sequence number.
    flushes: u64,
    open_fill: u64,
    open_keys: Vec<u64>,
    index: HashMap<u64, LocEntry>,
    slot_keys: Vec<Vec<u64>>,
}

impl LocEngine {
    pub fn new(num_regions: u64, region_bytes: u64, page_size: u64, base_page: Lba) -> Self {
        Self {
            region_bytes,
            region_pages: region_bytes / page_size,
            num_regions,
            base_page,
            flushes: 0,
            open_fill: 0,
            open_keys: Vec::new(),
            index: HashMap::new(),
            slot_keys: (0..num_regions).map(|_| Vec::new()).collect(),
        }
    }

    pub fn flushes(&self) -> u64 {
        self.flushes
    }

    /// True once the ring cursor has come back around: from here on every
    /// flush overwrites live history.
    pub fn wrapped(&self) -> bool {
        self.flushes >= self.num_regions
    }

    fn open_slot(&self) -> u64 {
        self.flushes % self.num_regions
    }

    /// Stage an item. When the open region cannot take it, the region is
    /// flushed first and the returned [`FlushSpec`] must be written to the
    /// device.
    pub fn insert(&mut self, key: u64, size: u32) -> Option<FlushSpec> {
        let eff = u64::from(size) + u64::from(ITEM_HEADER_BYTES);
        debug_assert!(eff <= self.region_bytes);
        let flush = if self.open_fill + eff > self.region_bytes {
            Some(self.rotate())
        } else {
            None
        };
        self.index.insert(
            key,
            LocEntry {
                size,
                seq: self.flushes,
            },
        );
        self.open_keys.push(key);
        self.open_fill += eff;
        flush
    }

    /// Flush the open region and advance the cursor, evicting the previous
    /// occupants of the newly opened slot.
    fn rotate(&mut self) -> FlushSpec {
        let slot = self.open_slot();
        let spec = FlushSpec {
            base_page: self.base_page + slot * self.region_pages,
            pages: self.region_pages,
        };
        self.slot_keys[slot as usize] = std::mem::take(&mut self.open_keys);
        self.flushes += 1;
        self.open_fill = 0;

        if self.flushes >= self.num_regions {
            let reopened = self.open_slot();
            let evicted_seq = self.flushes - self.num_regions;
            for key in std::mem::take(&mut self.slot_keys[reopened as usize]) {
                if let Some(entry) = self.index.get(&key) {
                    if entry.seq == evicted_seq {
                        self.index.remove(&key);
                    }
                }
            }
        }
        spec
    }

    pub fn lookup(&self, key: u64) -> Option<u32> {
        self.index.get(&key).map(|e| e.size)
    }

    /// Drop the index entry; the bytes on flash simply age out with the ring.
    pub fn remove(&mut self, key: u64) -> bool {
        self.index.remove(&key).is_some()
    }
}
