//! Logical simulator of an NVMe Flexible Data Placement (FDP) SSD operating
//! underneath a hybrid flash cache, plus the closed-form device-level
//! write-amplification (DLWA) and carbon models that go with it.
//!
//! The crate is organised around the data path of a hybrid cache deployment:
//!
//! - [`ftl`] — page-granular SSD model: reclaim units, placement-directed
//!   writes, deallocation, greedy garbage collection and full byte/event
//!   accounting.
//! - [`placement`] — the placement-handle abstraction and allocator that
//!   decouple cache engines from FDP semantics, with default-handle fallback.
//! - [`cache`] — the hybrid cache itself: a DRAM LRU tier in front of a
//!   set-associative small-object cache (SOC) and a log-structured
//!   large-object cache (LOC).
//! - [`workload`] — deterministic synthetic key-value streams and a CSV trace
//!   replayer.
//! - [`model`] — the analytic DLWA model (Lambert W based) and the embodied /
//!   operational carbon estimators.
//! - [`scenario`] — the experiment runner: config files, sweeps, multi-tenant
//!   runs and machine-readable reports.
//!
//! Every component is deterministic for a fixed seed; reports produced from
//! the same config are byte-identical.

pub mod cache;
pub mod ftl;
pub mod model;
pub mod placement;
pub mod rng;
pub mod scenario;
pub mod workload;

pub use cache::{CacheMetrics, HitClass, HybridCache, HybridCacheConfig};
pub use ftl::{Device, DeviceConfig, DlwaCounters, FtlError, RuhType};
pub use placement::{HandleAllocator, Placement, PlacementHandle, PlacementIdentifier};
pub use workload::{CacheRequest, Op};
