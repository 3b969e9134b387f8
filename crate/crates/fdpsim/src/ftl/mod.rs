//! Page-granular simulator of an FDP-capable SSD.
//!
//! The device exposes placement-directed writes, deallocation and reads over
//! a flat logical page space. Internally it manages reclaim units (the unit
//! of placement and reclamation), runs greedy garbage collection when the
//! free pool drops below a configurable reserve, and accounts every byte the
//! host writes and every byte garbage collection relocates, which is all the
//! DLWA analysis needs.
//!
//! Nothing here is timed and no payloads are stored: a page carries only the
//! logical block address mapped to it, which is sufficient for every metric
//! the simulator reports.

mod device;

pub use device::{Device, WriteTraceEntry};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Logical block address, in units of one page.
pub type Lba = u64;
/// Reclaim unit index.
pub type RuId = u32;
/// Reclaim unit handle (stream) index.
pub type RuhId = u16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FtlError {
    #[error("page_size_bytes must be positive")]
    BadPageSize,
    #[error("ru_size_bytes must be a positive multiple of page_size_bytes")]
    BadRuSize,
    #[error("usable_capacity_bytes must be a positive multiple of page_size_bytes")]
    BadUsableCapacity,
    #[error("op_fraction must lie in [0, 1)")]
    BadOpFraction,
    #[error("num_ruhs must be in 1..=64")]
    BadRuhCount,
    #[error("only a single reclaim group is supported (got {0})")]
    UnsupportedReclaimGroups(u16),
    #[error(
        "{physical} physical reclaim units cannot satisfy {handles} handles \
         plus a GC reserve of {reserve}"
    )]
    InsufficientCapacity {
        physical: u64,
        handles: u16,
        reserve: u32,
    },
    #[error("lba range {lba}+{pages} exceeds usable capacity of {usable_pages} pages")]
    LbaOutOfRange {
        lba: Lba,
        pages: u64,
        usable_pages: u64,
    },
    #[error("unknown placement handle: rg {rg} ruh {ruh} not offered by this device")]
    UnknownHandle { rg: u16, ruh: u16 },
    #[error(
        "out of reclaimable space: garbage collection found no candidate \
         to free (insufficient overprovisioning for this workload)"
    )]
    OutOfSpace,
    #[error("DLWA is undefined before the first host write")]
    DlwaUndefined,
}

/// Isolation guarantee of the device's reclaim unit handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuhType {
    /// Handles write to distinct reclaim units, but garbage collection may
    /// intermix relocated data from different handles.
    InitiallyIsolated,
    /// Garbage collection moves data only between reclaim units of the same
    /// handle.
    PersistentlyIsolated,
}

/// Simulated device geometry and behaviour knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviceConfig {
    pub page_size_bytes: u64,
    pub ru_size_bytes: u64,
    pub usable_capacity_bytes: u64,
    /// Device overprovisioning as a fraction of physical capacity, in [0, 1).
    pub op_fraction: f64,
    pub num_ruhs: u16,
    pub ruh_type: RuhType,
    pub num_rgs: u16,
    pub fdp_enabled: bool,
    /// Garbage collection keeps the free pool at this many reclaim units.
    /// Zero selects the default of `num_ruhs + 2`.
    pub gc_trigger_free_rus: u32,
    /// Echoed into reports; the engine itself is fully deterministic.
    pub rng_seed: u64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            page_size_bytes: 4096,
            ru_size_bytes: 4 << 20,
            usable_capacity_bytes: 8 << 30,
            op_fraction: 0.07,
            num_ruhs: 8,
            ruh_type: RuhType::InitiallyIsolated,
            num_rgs: 1,
            fdp_enabled: true,
            gc_trigger_free_rus: 0,
            rng_seed: 0,
        }
    }
}

impl DeviceConfig {
    /// Effective GC reserve: explicit value, or `num_ruhs + 2`.
    pub fn gc_trigger(&self) -> u32 {
        if self.gc_trigger_free_rus > 0 {
            self.gc_trigger_free_rus
        } else {
            u32::from(self.num_ruhs) + 2
        }
    }
}

/// Host- and device-side byte counters. `nand_bytes_written` always equals
/// `host_bytes_written + relocated_bytes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DlwaCounters {
    pub host_bytes_written: u64,
    pub nand_bytes_written: u64,
    pub relocated_bytes: u64,
    /// GC victim erasures that moved at least one valid page.
    pub relocation_events: u64,
    /// All GC victim erasures, including fully-invalid ones.
    pub gc_victim_count: u64,
    pub ru_overfill_events: u64,
    pub deallocated_bytes: u64,
}

impl DlwaCounters {
    /// Device-level write amplification: NAND bytes per host byte.
    pub fn dlwa(&self) -> Result<f64, FtlError> {
        if self.host_bytes_written == 0 {
            return Err(FtlError::DlwaUndefined);
        }
        Ok(self.nand_bytes_written as f64 / self.host_bytes_written as f64)
    }
}

/// Lifecycle state of a reclaim unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuState {
    Free,
    Open,
    Closed,
}

/// Result of resolving a logical page.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PageState {
    Mapped { ru_id: RuId, page_index: u32 },
    Unmapped,
}

/// Per-write outcome summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WriteReceipt {
    pub pages_written: u64,
    /// Open-RU rollovers this write caused.
    pub overfills: u32,
    /// Pages relocated by garbage collection triggered by this write.
    pub relocations_triggered: u64,
}

/// Device log record types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DeviceEvent {
    MediaRelocated {
        victim_ru: RuId,
        pages_moved: u32,
        dest_ru: Option<RuId>,
    },
    RuOverfill {
        ruh: RuhId,
        old_ru: RuId,
        new_ru: RuId,
    },
    GcTriggered {
        free_rus: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub seq: u64,
    #[serde(flatten)]
    pub event: DeviceEvent,
}

/// Aggregate event counts for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EventSummary {
    pub media_relocated: u64,
    pub ru_overfill: u64,
    pub gc_triggered: u64,
}

/// One relocation performed by [`Device::run_gc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelocationRecord {
    pub victim_ru: RuId,
    pub pages_moved: u32,
    pub dest_ru: Option<RuId>,
}

/// Interval counters emitted by [`Device::snapshot_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalSnapshot {
    pub interval_host_bytes: u64,
    pub interval_nand_bytes: u64,
    /// Reported as 1.0 by convention for an empty interval.
    pub interval_dlwa: f64,
}

/// Sentinel for "no logical block stored here".
pub(crate) const NO_LBA: Lba = Lba::MAX;
/// Sentinel for "logical block not mapped".
pub(crate) const NO_PAGE: u64 = u64::MAX;

/// A reclaim unit: a fixed run of pages written through a single handle and
/// erased as a whole.
#[derive(Debug, Clone)]
pub struct ReclaimUnit {
    pub(crate) state: RuState,
    /// Handle that opened this RU for host writes (or that owns it as a GC
    /// destination in persistently-isolated mode). `None` for free RUs and
    /// for the shared GC destination.
    pub(crate) owner_ruh: Option<RuhId>,
    pub(crate) is_gc_dest: bool,
    pub(crate) write_pointer: u32,
    pub(crate) valid_count: u32,
    /// Set once relocation placed data from multiple source handles here.
    pub(crate) intermixed: bool,
    /// Bit per handle whose live data this RU has held.
    pub(crate) origin_mask: u64,
    pub(crate) page_lbas: Vec<Lba>,
}

impl ReclaimUnit {
    pub(crate) fn new(pages_per_ru: u32) -> Self {
        Self {
            state: RuState::Free,
            owner_ruh: None,
            is_gc_dest: false,
            write_pointer: 0,
            valid_count: 0,
            intermixed: false,
            origin_mask: 0,
            page_lbas: vec![NO_LBA; pages_per_ru as usize],
        }
    }

    pub fn state(&self) -> RuState {
        self.state
    }

    pub fn owner_ruh(&self) -> Option<RuhId> {
        self.owner_ruh
    }

    pub fn is_gc_dest(&self) -> bool {
        self.is_gc_dest
    }

    pub fn write_pointer(&self) -> u32 {
        self.write_pointer
    }

    pub fn valid_count(&self) -> u32 {
        self.valid_count
    }

    pub fn intermixed(&self) -> bool {
        self.intermixed
    }

    /// Bit mask of handles whose data has been written or relocated here.
    pub fn origin_mask(&self) -> u64 {
        self.origin_mask
    }

    /// Logical block stored at `page_index`, if still valid.
    pub fn page_lba(&self, page_index: u32) -> Option<Lba> {
        match self.page_lbas.get(page_index as usize) {
            Some(&l) if l != NO_LBA => Some(l),
            _ => None,
        }
    }
}
