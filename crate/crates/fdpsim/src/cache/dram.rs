//! Byte-budgeted LRU tier in front of the flash engines.

use std::collections::HashMap;

const NIL: usize = usize::MAX;

struct Node {
    key: u64,
    size: u32,
    prev: usize,
    next: usize,
}

/// Intrusive-list LRU over a slab; O(1) insert, touch and evict, fully
/// deterministic.
pub(crate) struct DramTier {
    cap_bytes: u64,
    used_bytes: u64,
    map: HashMap<u64, usize>,
    nodes: Vec<Node>,
    free: Vec<usize>,
    head: usize,
    tail: usize,
}

impl DramTier {
    pub fn new(cap_bytes: u64) -> Self {
        Self {
            cap_bytes,
            used_bytes: 0,
            map: HashMap::new(),
            nodes: Vec::new(),
            free: Vec::new(),
            head: NIL,
            tail: NIL,
        }
    }

    #[cfg(test)]
    pub fn used_bytes(&self) -> u64 {
        self.used_bytes
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    fn unlink(&mut self, slot: usize) {
        let (prev, next) = (self.nodes[slot].prev, self.nodes[slot].next);
        if prev != NIL {
            self.nodes[prev].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.nodes[next].prev = prev;
        } else {
            self.tail = prev;
        }
    }

    fn push_front(&mut self, slot: usize) {
        self.nodes[slot].prev = NIL;
        self.nodes[slot].next = self.head;
        if self.head != NIL {
            self.nodes[self.head].prev = slot;
        }
        self.head = slot;
        if self.tail == NIL {
            self.tail = slot;
        }
    }

    /// Insert or refresh `key` at the LRU head, then pop tail items until the
    /// budget holds. Returns the evicted items, oldest first.
    pub fn insert(&mut self, key: u64, size: u32) -> Vec<(u64, u32)> {
        if let Some(&slot) = self.map.get(&key) {
            self.used_bytes -= u64::from(self.nodes[slot].size);
            self.used_bytes += u64::from(size);
            self.nodes[slot].size = size;
            self.unlink(slot);
            self.push_front(slot);
        } else {
            let slot = match self.free.pop() {
                Some(s) => {
                    self.nodes[s] = Node {
                        key,
                        size,
                        prev: NIL,
                        next: NIL,
                    };
                    s
                }
                None => {
                    self.nodes.push(Node {
                        key,
                        size,
                        prev: NIL,
                        next: NIL,
                    });
                    self.nodes.len() - 1
                }
            };
            self.map.insert(key, slot);
            self.used_bytes += u64::from(size);
            self.push_front(slot);
        }

        let mut evicted = Vec::new();
        while self.used_bytes > self.cap_bytes && self.tail != NIL {
            let slot = self.tail;
            let (k, s) = (self.nodes[slot].key, self.nodes[slot].size);
            self.unlink(slot);
            self.map.remove(&k);
            self.free.push(slot);
            self.used_bytes -= u64::from(s);
            evicted.push((k, s));
        }
        evicted
    }

    /// LRU promotion on hit.
    pub fn touch(&mut self, key: u64) -> Option<u32> {
        let &slot = self.map.get(&key)?;
        self.unlink(slot);
        self.push_front(slot);
        Some(self.nodes[slot].size)
    }

    pub fn remove(&mut self, key: u64) -> Option<u32> {
        let slot = self.map.remove(&key)?;
        let size = self.nodes[slot].size;
        self.unlink(slot);
        self.free.push(slot);
        self.used_bytes -= u64::from(size);
        Some(size)
    }
}
