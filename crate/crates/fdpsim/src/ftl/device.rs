//! The device engine: write path, deallocation, greedy GC and accounting.

use std::collections::BTreeSet;
use std::io::{self, Write as IoWrite};

use crate::placement::Placement;

use super::{
    DeviceConfig, DeviceEvent, DlwaCounters, EventRecord, EventSummary, FtlError,
    IntervalSnapshot, Lba, PageState, ReclaimUnit, RelocationRecord, RuId, RuState, RuhId,
    RuhType, WriteReceipt, NO_LBA, NO_PAGE,
};

/// One write call as seen by the device, recorded when tracing is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteTraceEntry {
    pub stream: RuhId,
    pub lba_first: Lba,
    pub page_count: u64,
}

/// A simulated FDP SSD. Single-threaded by design; independent experiments
/// use independent instances.
#[derive(Debug)]
pub struct Device {
    cfg: DeviceConfig,
    pages_per_ru: u32,
    phys_rus: u32,
    usable_pages: u64,
    gc_trigger: u32,

    rus: Vec<ReclaimUnit>,
    /// lba -> physical page (`ru * pages_per_ru + index`), `NO_PAGE` if unmapped.
    mapping: Vec<u64>,
    mapped_pages: u64,

    /// Free pool; writes and GC destinations take the lowest id first.
    free: BTreeSet<RuId>,
    /// Closed RUs keyed for greedy victim selection.
    closed: BTreeSet<(u32, RuId)>,

    /// Open host RU per stream (lazily acquired on first write).
    open_by_stream: Vec<Option<RuId>>,
    /// Most recently closed RU per stream, for overfill events.
    last_closed_by_stream: Vec<Option<RuId>>,
    /// Shared GC destination (initially-isolated relocation may intermix).
    shared_gc_dest: Option<RuId>,
    /// Per-handle GC destinations (persistently-isolated mode).
    stream_gc_dest: Vec<Option<RuId>>,

    counters: DlwaCounters,
    gc_invocations: u64,
    events: Vec<EventRecord>,
    seq: u64,

    snap_host: u64,
    snap_nand: u64,

    trace_writes: bool,
    write_trace: Vec<WriteTraceEntry>,
}

impl Device {
    /// Build a fresh device. Physical capacity is
    /// `usable / (1 - op_fraction)`, rounded up to a whole number of reclaim
    /// units.
    pub fn new(cfg: DeviceConfig) -> Result<Self, FtlError> {
        if cfg.page_size_bytes == 0 {
            return Err(FtlError::BadPageSize);
        }
        if cfg.ru_size_bytes == 0 || cfg.ru_size_bytes % cfg.page_size_bytes != 0 {
            return Err(FtlError::BadRuSize);
        }
        if cfg.usable_capacity_bytes == 0 || cfg.usable_capacity_bytes % cfg.page_size_bytes != 0 {
            return Err(FtlError::BadUsableCapacity);
        }
        if !(0.0..1.0).contains(&cfg.op_fraction) {
            return Err(FtlError::BadOpFraction);
        }
        if cfg.num_ruhs == 0 || cfg.num_ruhs > 64 {
            return Err(FtlError::BadRuhCount);
        }
        if cfg.num_rgs != 1 {
            return Err(FtlError::UnsupportedReclaimGroups(cfg.num_rgs));
        }

        let pages_per_ru = (cfg.ru_size_bytes / cfg.page_size_bytes) as u32;
        let physical_bytes = cfg.usable_capacity_bytes as f64 / (1.0 - cfg.op_fraction);
        let phys_rus = (physical_bytes / cfg.ru_size_bytes as f64).ceil() as u64;
        let gc_trigger = cfg.gc_trigger();
        if phys_rus <= u64::from(cfg.num_ruhs) + u64::from(gc_trigger) {
            return Err(FtlError::InsufficientCapacity {
                physical: phys_rus,
                handles: cfg.num_ruhs,
                reserve: gc_trigger,
            });
        }
        let phys_rus = phys_rus as u32;
        let usable_pages = cfg.usable_capacity_bytes / cfg.page_size_bytes;
        let streams = if cfg.fdp_enabled {
            usize::from(cfg.num_ruhs)
        } else {
            1
        };

        Ok(Self {
            pages_per_ru,
            phys_rus,
            usable_pages,
            gc_trigger,
            rus: (0..phys_rus).map(|_| ReclaimUnit::new(pages_per_ru)).collect(),
            mapping: vec![NO_PAGE; usable_pages as usize],
            mapped_pages: 0,
            free: (0..phys_rus).collect(),
            closed: BTreeSet::new(),
            open_by_stream: vec![None; streams],
            last_closed_by_stream: vec![None; streams],
            shared_gc_dest: None,
            stream_gc_dest: vec![None; streams],
            counters: DlwaCounters::default(),
            gc_invocations: 0,
            events: Vec::new(),
            seq: 0,
            snap_host: 0,
            snap_nand: 0,
            trace_writes: false,
            write_trace: Vec::new(),
            cfg,
        })
    }

    pub fn config(&self) -> &DeviceConfig {
        &self.cfg
    }

    pub fn page_size(&self) -> u64 {
        self.cfg.page_size_bytes
    }

    pub fn pages_per_ru(&self) -> u32 {
        self.pages_per_ru
    }

    pub fn physical_ru_count(&self) -> u32 {
        self.phys_rus
    }

    pub fn physical_bytes(&self) -> u64 {
        u64::from(self.phys_rus) * self.cfg.ru_size_bytes
    }

    pub fn usable_pages(&self) -> u64 {
        self.usable_pages
    }

    pub fn free_ru_count(&self) -> u32 {
        self.free.len() as u32
    }

    pub fn mapped_pages(&self) -> u64 {
        self.mapped_pages
    }

    pub fn counters(&self) -> &DlwaCounters {
        &self.counters
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn gc_invocations(&self) -> u64 {
        self.gc_invocations
    }

    pub fn ru(&self, id: RuId) -> &ReclaimUnit {
        &self.rus[id as usize]
    }

    /// Record (stream, lba, pages) per write call; used by tests and debug
    /// tooling to audit write patterns.
    pub fn set_write_tracing(&mut self, on: bool) {
        self.trace_writes = on;
    }

    pub fn take_write_trace(&mut self) -> Vec<WriteTraceEntry> {
        std::mem::take(&mut self.write_trace)
    }

    fn stream_id(&self, placement: Placement) -> Result<RuhId, FtlError> {
        match placement {
            Placement::Default => Ok(0),
            Placement::Pid(pid) => {
                if !self.cfg.fdp_enabled
                    || pid.rg_id >= self.cfg.num_rgs
                    || pid.ruh_id >= self.cfg.num_ruhs
                {
                    return Err(FtlError::UnknownHandle {
                        rg: pid.rg_id,
                        ruh: pid.ruh_id,
                    });
                }
                Ok(pid.ruh_id)
            }
        }
    }

    fn check_range(&self, lba: Lba, pages: u64) -> Result<(), FtlError> {
        if pages > self.usable_pages || lba > self.usable_pages - pages {
            return Err(FtlError::LbaOutOfRange {
                lba,
                pages,
                usable_pages: self.usable_pages,
            });
        }
        Ok(())
    }

    fn log(&mut self, event: DeviceEvent) {
        self.events.push(EventRecord {
            seq: self.seq,
            event,
        });
        self.seq += 1;
    }

    /// Append `page_count` pages starting at `lba_first` through the handle
    /// `placement` resolves to. Overwrites invalidate the previous location
    /// of each logical block.
    pub fn write(
        &mut self,
        placement: Placement,
        lba_first: Lba,
        page_count: u64,
    ) -> Result<WriteReceipt, FtlError> {
        let stream = self.stream_id(placement)?;
        self.check_range(lba_first, page_count)?;
        if self.trace_writes {
            self.write_trace.push(WriteTraceEntry {
                stream,
                lba_first,
                page_count,
            });
        }

        let mut receipt = WriteReceipt::default();
        for k in 0..page_count {
            let lba = lba_first + k;
            let ru_id = match self.open_by_stream[stream as usize] {
                Some(id) => id,
                None => self.acquire_host_ru(stream, &mut receipt)?,
            };

            self.invalidate(lba);

            let ru = &mut self.rus[ru_id as usize];
            let idx = ru.write_pointer;
            ru.page_lbas[idx as usize] = lba;
            ru.write_pointer += 1;
            ru.valid_count += 1;
            ru.origin_mask |= 1 << stream;
            self.mapping[lba as usize] =
                u64::from(ru_id) * u64::from(self.pages_per_ru) + u64::from(idx);
            self.mapped_pages += 1;
            self.counters.host_bytes_written += self.cfg.page_size_bytes;
            self.counters.nand_bytes_written += self.cfg.page_size_bytes;
            receipt.pages_written += 1;

            if self.rus[ru_id as usize].write_pointer == self.pages_per_ru {
                self.close_ru(ru_id);
                self.open_by_stream[stream as usize] = None;
                self.last_closed_by_stream[stream as usize] = Some(ru_id);
            }
        }
        Ok(receipt)
    }

    /// Take the lowest free RU for host writes on `stream`, running GC first
    /// if the pool is below the reserve. Logs an overfill event when this
    /// open follows a previous RU of the same stream.
    fn acquire_host_ru(
        &mut self,
        stream: RuhId,
        receipt: &mut WriteReceipt,
    ) -> Result<RuId, FtlError> {
        if self.free.len() < self.gc_trigger as usize {
            let moved = self.run_gc_inner()?;
            receipt.relocations_triggered += moved;
        }
        let id = self.take_free_ru().ok_or(FtlError::OutOfSpace)?;
        let ru = &mut self.rus[id as usize];
        ru.state = RuState::Open;
        ru.owner_ruh = Some(stream);
        self.open_by_stream[stream as usize] = Some(id);
        if let Some(old) = self.last_closed_by_stream[stream as usize] {
            self.counters.ru_overfill_events += 1;
            receipt.overfills += 1;
            self.log(DeviceEvent::RuOverfill {
                ruh: stream,
                old_ru: old,
                new_ru: id,
            });
        }
        Ok(id)
    }

    fn take_free_ru(&mut self) -> Option<RuId> {
        self.free.pop_first()
    }

    fn close_ru(&mut self, id: RuId) {
        let ru = &mut self.rus[id as usize];
        debug_assert_eq!(ru.write_pointer, self.pages_per_ru);
        ru.state = RuState::Closed;
        self.closed.insert((ru.valid_count, id));
    }

    /// Drop the current mapping of `lba`, if any.
    fn invalidate(&mut self, lba: Lba) {
        let phys = self.mapping[lba as usize];
        if phys == NO_PAGE {
            return;
        }
        let ru_id = (phys / u64::from(self.pages_per_ru)) as RuId;
        let idx = (phys % u64::from(self.pages_per_ru)) as u32;
        let ru = &mut self.rus[ru_id as usize];
        debug_assert_eq!(ru.page_lbas[idx as usize], lba);
        ru.page_lbas[idx as usize] = NO_LBA;
        let old_valid = ru.valid_count;
        ru.valid_count -= 1;
        if ru.state == RuState::Closed {
            self.closed.remove(&(old_valid, ru_id));
            self.closed.insert((old_valid - 1, ru_id));
        }
        self.mapping[lba as usize] = NO_PAGE;
        self.mapped_pages -= 1;
    }

    /// Remove `page_count` logical blocks starting at `lba_first` from the
    /// mapping. A closed RU whose last valid page goes away returns straight
    /// to the free pool; no data moves.
    pub fn deallocate(&mut self, lba_first: Lba, page_count: u64) -> Result<u64, FtlError> {
        self.check_range(lba_first, page_count)?;
        let mut invalidated = 0u64;
        for k in 0..page_count {
            let lba = lba_first + k;
            let phys = self.mapping[lba as usize];
            if phys == NO_PAGE {
                continue;
            }
            let ru_id = (phys / u64::from(self.pages_per_ru)) as RuId;
            self.invalidate(lba);
            invalidated += 1;
            let ru = &self.rus[ru_id as usize];
            if ru.state == RuState::Closed && ru.valid_count == 0 {
                self.closed.remove(&(0, ru_id));
                self.reset_ru(ru_id);
            }
        }
        self.counters.deallocated_bytes += invalidated * self.cfg.page_size_bytes;
        Ok(invalidated)
    }

    /// Pure query: where does `lba` live?
    pub fn read(&self, lba: Lba) -> Result<PageState, FtlError> {
        self.check_range(lba, 1)?;
        let phys = self.mapping[lba as usize];
        if phys == NO_PAGE {
            return Ok(PageState::Unmapped);
        }
        Ok(PageState::Mapped {
            ru_id: (phys / u64::from(self.pages_per_ru)) as RuId,
            page_index: (phys % u64::from(self.pages_per_ru)) as u32,
        })
    }

    /// Bytes still writable in the handle's open RU. A handle with no open RU
    /// has a full RU ahead of it.
    pub fn ru_remaining(&self, placement: Placement) -> Result<u64, FtlError> {
        let stream = self.stream_id(placement)?;
        Ok(match self.open_by_stream[stream as usize] {
            None => self.cfg.ru_size_bytes,
            Some(id) => {
                let wp = self.rus[id as usize].write_pointer;
                u64::from(self.pages_per_ru - wp) * self.cfg.page_size_bytes
            }
        })
    }

    /// Run garbage collection until the free pool reaches the reserve.
    /// Normally invoked from the write path; exposed for direct use in tests.
    pub fn run_gc(&mut self) -> Result<Vec<RelocationRecord>, FtlError> {
        if self.free.len() >= self.gc_trigger as usize {
            return Ok(Vec::new());
        }
        let before = self.events.len();
        self.run_gc_inner()?;
        Ok(self.events[before..]
            .iter()
            .filter_map(|r| match r.event {
                DeviceEvent::MediaRelocated {
                    victim_ru,
                    pages_moved,
                    dest_ru,
                } => Some(RelocationRecord {
                    victim_ru,
                    pages_moved,
                    dest_ru,
                }),
                _ => None,
            })
            .collect())
    }

    /// Greedy reclamation loop. Returns total pages moved.
    fn run_gc_inner(&mut self) -> Result<u64, FtlError> {
        self.gc_invocations += 1;
        self.log(DeviceEvent::GcTriggered {
            free_rus: self.free.len() as u32,
        });
        let mut total_moved = 0u64;
        while self.free.len() < self.gc_trigger as usize {
            let &(valid, victim) = self.closed.first().ok_or(FtlError::OutOfSpace)?;
            if valid == self.pages_per_ru {
                // Even the emptiest candidate is fully valid: relocating it
                // frees nothing.
                return Err(FtlError::OutOfSpace);
            }
            self.closed.remove(&(valid, victim));
            total_moved += self.relocate_and_erase(victim)?;
        }
        Ok(total_moved)
    }

    /// Move the victim's valid pages to a GC destination, then erase it.
    fn relocate_and_erase(&mut self, victim: RuId) -> Result<u64, FtlError> {
        let dest_owner = match self.cfg.ruh_type {
            RuhType::InitiallyIsolated => None,
            RuhType::PersistentlyIsolated => Some(
                self.rus[victim as usize]
                    .owner_ruh
                    .expect("closed RU without owner in persistently-isolated mode"),
            ),
        };
        let victim_mask = self.rus[victim as usize].origin_mask;
        let wp = self.rus[victim as usize].write_pointer;
        let mut moved = 0u32;
        let mut first_dest = None;

        for idx in 0..wp {
            let lba = self.rus[victim as usize].page_lbas[idx as usize];
            if lba == NO_LBA {
                continue;
            }
            let dest = self.ensure_gc_dest(dest_owner)?;
            if first_dest.is_none() {
                first_dest = Some(dest);
            }

            // Detach from the victim.
            let vru = &mut self.rus[victim as usize];
            vru.page_lbas[idx as usize] = NO_LBA;
            vru.valid_count -= 1;

            // Append to the destination.
            let dru = &mut self.rus[dest as usize];
            let didx = dru.write_pointer;
            dru.page_lbas[didx as usize] = lba;
            dru.write_pointer += 1;
            dru.valid_count += 1;
            dru.origin_mask |= victim_mask;
            if dru.origin_mask.count_ones() > 1 {
                dru.intermixed = true;
            }
            self.mapping[lba as usize] =
                u64::from(dest) * u64::from(self.pages_per_ru) + u64::from(didx);
            moved += 1;

            if self.rus[dest as usize].write_pointer == self.pages_per_ru {
                self.close_ru(dest);
                self.clear_gc_dest_slot(dest_owner);
            }
        }

        debug_assert_eq!(self.rus[victim as usize].valid_count, 0);
        self.reset_ru(victim);
        self.counters.gc_victim_count += 1;
        if moved > 0 {
            self.counters.relocation_events += 1;
            let bytes = u64::from(moved) * self.cfg.page_size_bytes;
            self.counters.relocated_bytes += bytes;
            self.counters.nand_bytes_written += bytes;
        }
        self.log(DeviceEvent::MediaRelocated {
            victim_ru: victim,
            pages_moved: moved,
            dest_ru: first_dest,
        });
        Ok(u64::from(moved))
    }

    fn ensure_gc_dest(&mut self, owner: Option<RuhId>) -> Result<RuId, FtlError> {
        let slot = match owner {
            None => self.shared_gc_dest,
            Some(h) => self.stream_gc_dest[h as usize],
        };
        if let Some(id) = slot {
            return Ok(id);
        }
        let id = self.take_free_ru().ok_or(FtlError::OutOfSpace)?;
        let ru = &mut self.rus[id as usize];
        ru.state = RuState::Open;
        ru.owner_ruh = owner;
        ru.is_gc_dest = true;
        match owner {
            None => self.shared_gc_dest = Some(id),
            Some(h) => self.stream_gc_dest[h as usize] = Some(id),
        }
        Ok(id)
    }

    fn clear_gc_dest_slot(&mut self, owner: Option<RuhId>) {
        match owner {
            None => self.shared_gc_dest = None,
            Some(h) => self.stream_gc_dest[h as usize] = None,
        }
    }

    /// Return an RU to the free pool, clearing all per-RU state.
    fn reset_ru(&mut self, id: RuId) {
        let ru = &mut self.rus[id as usize];
        debug_assert_eq!(ru.valid_count, 0);
        for i in 0..ru.write_pointer {
            ru.page_lbas[i as usize] = NO_LBA;
        }
        ru.state = RuState::Free;
        ru.owner_ruh = None;
        ru.is_gc_dest = false;
        ru.write_pointer = 0;
        ru.intermixed = false;
        ru.origin_mask = 0;
        self.free.insert(id);
    }

    /// Emit counters accumulated since the previous snapshot and reset the
    /// interval baseline. Cumulative counters are unaffected.
    pub fn snapshot_interval(&mut self) -> IntervalSnapshot {
        let host = self.counters.host_bytes_written - self.snap_host;
        let nand = self.counters.nand_bytes_written - self.snap_nand;
        self.snap_host = self.counters.host_bytes_written;
        self.snap_nand = self.counters.nand_bytes_written;
        IntervalSnapshot {
            interval_host_bytes: host,
            interval_nand_bytes: nand,
            interval_dlwa: if host == 0 {
                1.0
            } else {
                nand as f64 / host as f64
            },
        }
    }

    pub fn event_summary(&self) -> EventSummary {
        EventSummary {
            media_relocated: self.counters.gc_victim_count,
            ru_overfill: self.counters.ru_overfill_events,
            gc_triggered: self.gc_invocations,
        }
    }

    /// Export the event log as CSV: `seq,event_type,ru_id,pages_moved,dest_ru,free_rus`.
    pub fn write_events_csv<W: IoWrite>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "seq,event_type,ru_id,pages_moved,dest_ru,free_rus")?;
        for rec in &self.events {
            match rec.event {
                DeviceEvent::MediaRelocated {
                    victim_ru,
                    pages_moved,
                    dest_ru,
                } => {
                    let dest = dest_ru.map(|d| d.to_string()).unwrap_or_default();
                    writeln!(
                        w,
                        "{},media-relocated,{victim_ru},{pages_moved},{dest},",
                        rec.seq
                    )?;
                }
                DeviceEvent::RuOverfill { old_ru, new_ru, .. } => {
                    writeln!(w, "{},ru-overfill,{old_ru},,{new_ru},", rec.seq)?;
                }
                DeviceEvent::GcTriggered { free_rus } => {
                    writeln!(w, "{},gc-triggered,,,,{free_rus}", rec.seq)?;
                }
            }
        }
        Ok(())
    }

    /// Cheap consistency checks, suitable for calling every few thousand
    /// operations in test builds.
    pub fn check_counters(&self) -> Result<(), String> {
        let c = &self.counters;
        if c.nand_bytes_written != c.host_bytes_written + c.relocated_bytes {
            return Err(format!(
                "nand {} != host {} + relocated {}",
                c.nand_bytes_written, c.host_bytes_written, c.relocated_bytes
            ));
        }
        if c.relocation_events > c.gc_victim_count {
            return Err("relocation_events exceeds gc_victim_count".into());
        }
        let valid_total: u64 = self.rus.iter().map(|r| u64::from(r.valid_count)).sum();
        if valid_total != self.mapped_pages {
            return Err(format!(
                "sum of valid counts {} != mapped lbas {}",
                valid_total, self.mapped_pages
            ));
        }
        let free_state = self
            .rus
            .iter()
            .filter(|r| r.state == RuState::Free)
            .count();
        if free_state != self.free.len() {
            return Err("free pool out of sync with RU states".into());
        }
        Ok(())
    }

    /// Full structural verification: the mapping table is a bijection onto
    /// the valid pages, the event log agrees with the counters, and every RU
    /// satisfies its state invariants. Cost is proportional to device size.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.check_counters()?;
        let ppr = u64::from(self.pages_per_ru);

        for (id, ru) in self.rus.iter().enumerate() {
            let mut live = 0u32;
            for idx in 0..self.pages_per_ru {
                let lba = ru.page_lbas[idx as usize];
                if idx >= ru.write_pointer {
                    if lba != NO_LBA {
                        return Err(format!("ru {id}: data beyond write pointer at {idx}"));
                    }
                    continue;
                }
                if lba == NO_LBA {
                    continue;
                }
                live += 1;
                let expect = id as u64 * ppr + u64::from(idx);
                if self.mapping.get(lba as usize).copied() != Some(expect) {
                    return Err(format!("ru {id} page {idx}: lba {lba} does not map back"));
                }
            }
            if live != ru.valid_count {
                return Err(format!(
                    "ru {id}: valid_count {} but {live} live pages",
                    ru.valid_count
                ));
            }
            let fresh = ru.write_pointer == 0 && ru.valid_count == 0;
            if (ru.state == RuState::Free) != fresh {
                return Err(format!(
                    "ru {id}: state {:?} with wp {} valid {}",
                    ru.state, ru.write_pointer, ru.valid_count
                ));
            }
            if ru.state == RuState::Closed && ru.write_pointer != self.pages_per_ru {
                return Err(format!("ru {id}: closed but not full"));
            }
        }

        // Every open RU is referenced by exactly one handle slot or GC
        // destination slot.
        let mut refs = vec![0u32; self.rus.len()];
        for slot in self
            .open_by_stream
            .iter()
            .chain(self.stream_gc_dest.iter())
            .chain(std::iter::once(&self.shared_gc_dest))
            .flatten()
        {
            refs[*slot as usize] += 1;
        }
        for (id, ru) in self.rus.iter().enumerate() {
            let expect = u32::from(ru.state == RuState::Open);
            if refs[id] != expect {
                return Err(format!(
                    "ru {id}: {:?} but referenced by {} open slots",
                    ru.state, refs[id]
                ));
            }
        }

        let mut mapped = 0u64;
        for (lba, &phys) in self.mapping.iter().enumerate() {
            if phys == NO_PAGE {
                continue;
            }
            mapped += 1;
            let ru = (phys / ppr) as usize;
            let idx = (phys % ppr) as usize;
            if self.rus[ru].page_lbas[idx] != lba as u64 {
                return Err(format!("lba {lba}: physical page does not store it"));
            }
        }
        if mapped != self.mapped_pages {
            return Err("mapped_pages counter out of sync".into());
        }

        let relocs = self
            .events
            .iter()
            .filter(|r| {
                matches!(
                    r.event,
                    DeviceEvent::MediaRelocated { pages_moved, .. } if pages_moved >= 1
                )
            })
            .count() as u64;
        if relocs != self.counters.relocation_events {
            return Err(format!(
                "event log has {relocs} relocations, counters say {}",
                self.counters.relocation_events
            ));
        }
        let moved_bytes: u64 = self
            .events
            .iter()
            .filter_map(|r| match r.event {
                DeviceEvent::MediaRelocated { pages_moved, .. } => {
                    Some(u64::from(pages_moved) * self.cfg.page_size_bytes)
                }
                _ => None,
            })
            .sum();
        if moved_bytes != self.counters.nand_bytes_written - self.counters.host_bytes_written {
            return Err("relocated bytes do not reconcile with nand - host".into());
        }
        Ok(())
    }
}
