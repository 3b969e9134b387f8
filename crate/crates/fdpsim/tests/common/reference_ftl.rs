//! Naive reference FTL: flat arrays, linear scans, valid counts recomputed
//! from the page arrays whenever garbage collection needs them. Slow on
//! purpose — every decision is re-derived from first principles so the
//! production engine has something independent to be compared against.

use fdpsim::ftl::{DeviceConfig, RuhType};

const NO_LBA: u64 = u64::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RefState {
    Free,
    Open,
    Closed,
}

pub struct RefRu {
    pub state: RefState,
    pub owner: Option<u16>,
    pub pages: Vec<u64>,
    pub write_pointer: u32,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct RefCounters {
    pub host_bytes_written: u64,
    pub nand_bytes_written: u64,
    pub relocated_bytes: u64,
    pub relocation_events: u64,
    pub gc_victim_count: u64,
    pub ru_overfill_events: u64,
    pub deallocated_bytes: u64,
}

pub struct ReferenceFtl {
    page_size: u64,
    pages_per_ru: u32,
    usable_pages: u64,
    trigger: u32,
    ruh_type: RuhType,
    pub rus: Vec<RefRu>,
    pub mapping: Vec<Option<(u32, u32)>>,
    open_by_stream: Vec<Option<u32>>,
    last_closed_by_stream: Vec<Option<u32>>,
    shared_dest: Option<u32>,
    stream_dest: Vec<Option<u32>>,
    pub counters: RefCounters,
}

impl ReferenceFtl {
    pub fn new(cfg: &DeviceConfig) -> Self {
        let pages_per_ru = (cfg.ru_size_bytes / cfg.page_size_bytes) as u32;
        let physical_bytes = cfg.usable_capacity_bytes as f64 / (1.0 - cfg.op_fraction);
        let phys_rus = (physical_bytes / cfg.ru_size_bytes as f64).ceil() as u64 as u32;
        let usable_pages = cfg.usable_capacity_bytes / cfg.page_size_bytes;
        let streams = if cfg.fdp_enabled {
            usize::from(cfg.num_ruhs)
        } else {
            1
        };
        Self {
            page_size: cfg.page_size_bytes,
            pages_per_ru,
            usable_pages,
            trigger: cfg.gc_trigger(),
            ruh_type: cfg.ruh_type,
            rus: (0..phys_rus)
                .map(|_| RefRu {
                    state: RefState::Free,
                    owner: None,
                    pages: vec![NO_LBA; pages_per_ru as usize],
                    write_pointer: 0,
                })
                .collect(),
            mapping: vec![None; usable_pages as usize],
            open_by_stream: vec![None; streams],
            last_closed_by_stream: vec![None; streams],
            shared_dest: None,
            stream_dest: vec![None; streams],
            counters: RefCounters::default(),
        }
    }

    fn free_count(&self) -> usize {
        self.rus.iter().filter(|r| r.state == RefState::Free).count()
    }

    fn lowest_free(&self) -> Option<u32> {
        self.rus
            .iter()
            .position(|r| r.state == RefState::Free)
            .map(|i| i as u32)
    }

    fn valid_count(&self, ru: u32) -> u32 {
        let r = &self.rus[ru as usize];
        let mut valid = 0;
        for idx in 0..r.write_pointer {
            let lba = r.pages[idx as usize];
            if lba != NO_LBA && self.mapping[lba as usize] == Some((ru, idx)) {
                valid += 1;
            }
        }
        valid
    }

    fn greedy_victim(&self) -> Option<(u32, u32)> {
        let mut best: Option<(u32, u32)> = None;
        for (i, r) in self.rus.iter().enumerate() {
            if r.state != RefState::Closed {
                continue;
            }
            let valid = self.valid_count(i as u32);
            match best {
                Some((bv, _)) if bv <= valid => {}
                _ => best = Some((valid, i as u32)),
            }
        }
        best
    }

    fn dest_slot(&mut self, owner: Option<u16>) -> &mut Option<u32> {
        match owner {
            None => &mut self.shared_dest,
            Some(h) => &mut self.stream_dest[h as usize],
        }
    }

    fn gc(&mut self) {
        while self.free_count() < self.trigger as usize {
            let (valid, victim) = self.greedy_victim().expect("reference gc has a candidate");
            assert!(
                valid < self.pages_per_ru,
                "reference gc: nothing reclaimable"
            );
            let dest_owner = match self.ruh_type {
                RuhType::InitiallyIsolated => None,
                RuhType::PersistentlyIsolated => {
                    Some(self.rus[victim as usize].owner.expect("victim owner"))
                }
            };
            let mut moved = 0u64;
            for idx in 0..self.rus[victim as usize].write_pointer {
                let lba = self.rus[victim as usize].pages[idx as usize];
                if lba == NO_LBA || self.mapping[lba as usize] != Some((victim, idx)) {
                    continue;
                }
                let dest = match *self.dest_slot(dest_owner) {
                    Some(d) => d,
                    None => {
                        let d = self.lowest_free().expect("reference gc needs a free ru");
                        self.rus[d as usize].state = RefState::Open;
                        self.rus[d as usize].owner = dest_owner;
                        *self.dest_slot(dest_owner) = Some(d);
                        d
                    }
                };
                let didx = self.rus[dest as usize].write_pointer;
                self.rus[dest as usize].pages[didx as usize] = lba;
                self.rus[dest as usize].write_pointer += 1;
                self.mapping[lba as usize] = Some((dest, didx));
                moved += 1;
                if self.rus[dest as usize].write_pointer == self.pages_per_ru {
                    self.rus[dest as usize].state = RefState::Closed;
                    *self.dest_slot(dest_owner) = None;
                }
            }
            // Erase the victim.
            let r = &mut self.rus[victim as usize];
            r.state = RefState::Free;
            r.owner = None;
            r.write_pointer = 0;
            r.pages.fill(NO_LBA);
            self.counters.gc_victim_count += 1;
            if moved > 0 {
                self.counters.relocation_events += 1;
                self.counters.relocated_bytes += moved * self.page_size;
                self.counters.nand_bytes_written += moved * self.page_size;
            }
        }
    }

    pub fn write(&mut self, stream: u16, lba: u64) {
        assert!(lba < self.usable_pages);
        let s = stream as usize;
        let ru = match self.open_by_stream[s] {
            Some(ru) => ru,
            None => {
                if self.free_count() < self.trigger as usize {
                    self.gc();
                }
                let ru = self.lowest_free().expect("reference write needs a free ru");
                self.rus[ru as usize].state = RefState::Open;
                self.rus[ru as usize].owner = Some(stream);
                self.open_by_stream[s] = Some(ru);
                if self.last_closed_by_stream[s].is_some() {
                    self.counters.ru_overfill_events += 1;
                }
                ru
            }
        };

        // Invalidate any previous location.
        if let Some((old_ru, old_idx)) = self.mapping[lba as usize] {
            self.rus[old_ru as usize].pages[old_idx as usize] = NO_LBA;
        }

        let idx = self.rus[ru as usize].write_pointer;
        self.rus[ru as usize].pages[idx as usize] = lba;
        self.rus[ru as usize].write_pointer += 1;
        self.mapping[lba as usize] = Some((ru, idx));
        self.counters.host_bytes_written += self.page_size;
        self.counters.nand_bytes_written += self.page_size;

        if self.rus[ru as usize].write_pointer == self.pages_per_ru {
            self.rus[ru as usize].state = RefState::Closed;
            self.open_by_stream[s] = None;
            self.last_closed_by_stream[s] = Some(ru);
        }
    }

    pub fn deallocate(&mut self, lba_first: u64, pages: u64) -> u64 {
        let mut invalidated = 0;
        for k in 0..pages {
            let lba = lba_first + k;
            if let Some((ru, idx)) = self.mapping[lba as usize].take() {
                self.rus[ru as usize].pages[idx as usize] = NO_LBA;
                invalidated += 1;
                if self.rus[ru as usize].state == RefState::Closed && self.valid_count(ru) == 0 {
                    let r = &mut self.rus[ru as usize];
                    r.state = RefState::Free;
                    r.owner = None;
                    r.write_pointer = 0;
                    r.pages.fill(NO_LBA);
                }
            }
        }
        self.counters.deallocated_bytes += invalidated * self.page_size;
        invalidated
    }

    pub fn read(&self, lba: u64) -> Option<(u32, u32)> {
        self.mapping[lba as usize]
    }

    pub fn free_rus(&self) -> u32 {
        self.free_count() as u32
    }
}
