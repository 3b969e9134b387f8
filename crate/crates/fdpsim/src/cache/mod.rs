//! Hybrid cache: DRAM LRU tier in front of a flash tier split into a
//! set-associative small-object cache (SOC) and a log-structured
//! large-object cache (LOC).
//!
//! Each instance owns a disjoint LBA partition of the device. The SOC
//! occupies the front of the partition with one fixed page per bucket; the
//! LOC ring takes the rest. With `segregate` on, the two engines write
//! through distinct placement handles, which is the whole point: SOC churn
//! and LOC cold data land in different reclaim units.

mod dram;
mod loc;
mod soc;

use serde::Serialize;
use thiserror::Error;

use crate::ftl::{Device, FtlError};
use crate::placement::{HandleAllocator, Placement, PlacementError, PlacementHandle};

use dram::DramTier;
use loc::LocEngine;
use soc::SocEngine;

pub(crate) use soc::ITEM_HEADER_BYTES;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CacheError {
    #[error("bucket_bytes ({bucket}) must equal the device page size ({page})")]
    BucketPageMismatch { bucket: u64, page: u64 },
    #[error("region_bytes must be a positive multiple of the device page size")]
    BadRegionSize,
    #[error("soc_fraction must lie strictly between 0 and 1")]
    BadSocFraction,
    #[error("small_item_threshold_bytes must fit a bucket alongside its item header")]
    BadThreshold,
    #[error("flash partition must be page aligned and non-empty")]
    BadPartition,
    #[error("partition [{base}, {end}) exceeds the device's usable capacity ({usable})")]
    PartitionOutOfRange { base: u64, end: u64, usable: u64 },
    #[error("flash partition too small: needs at least one bucket and one region")]
    FlashTooSmall,
    #[error("item of {size} bytes cannot fit a region")]
    ItemTooLarge { size: u32 },
    #[error("ALWA is undefined before the first flash admission")]
    AlwaUndefined,
    #[error(transparent)]
    Ftl(#[from] FtlError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
}

/// Sizing and behaviour of one cache instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridCacheConfig {
    pub dram_bytes: u64,
    /// Host-visible cache capacity on the device (the instance's partition).
    pub flash_bytes: u64,
    /// Fraction of `flash_bytes` given to the SOC, in (0, 1).
    pub soc_fraction: f64,
    pub bucket_bytes: u64,
    pub region_bytes: u64,
    /// Items at or below this size route to the SOC.
    pub small_item_threshold_bytes: u32,
    /// Byte offset of this instance's partition; page aligned.
    pub lba_base: u64,
    /// Distinct handles for SOC/LOC when true; one shared default handle
    /// otherwise.
    pub segregate: bool,
}

impl Default for HybridCacheConfig {
    fn default() -> Self {
        Self {
            dram_bytes: 256 << 20,
            flash_bytes: 8 << 30,
            soc_fraction: 0.04,
            bucket_bytes: 4096,
            region_bytes: 16 << 20,
            small_item_threshold_bytes: 2048,
            lba_base: 0,
            segregate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheTier {
    Dram,
    Flash,
}

/// Result of a SET.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmitOutcome {
    pub tier: CacheTier,
    /// DRAM evictions this SET pushed down to flash, oldest first.
    pub evicted_to_flash: Vec<(u64, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitClass {
    DramHit,
    NvmHit,
    Miss,
}

/// Hit and write accounting for one instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheMetrics {
    pub gets: u64,
    pub sets: u64,
    pub dram_hits: u64,
    pub nvm_hits: u64,
    pub misses: u64,
    /// Payload bytes admitted to flash.
    pub app_bytes: u64,
    /// Bytes actually issued to the device.
    pub flash_bytes_written: u64,
}

impl CacheMetrics {
    /// Application-level write amplification: device bytes per payload byte.
    pub fn alwa(&self) -> Result<f64, CacheError> {
        if self.app_bytes == 0 {
            return Err(CacheError::AlwaUndefined);
        }
        Ok(self.flash_bytes_written as f64 / self.app_bytes as f64)
    }
}

/// Resolved geometry of an instance's partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheGeometry {
    pub soc_bytes: u64,
    pub loc_bytes: u64,
    pub num_buckets: u64,
    pub num_regions: u64,
    /// Partition tail left unused after region rounding.
    pub slack_bytes: u64,
}

pub struct HybridCache {
    cfg: HybridCacheConfig,
    geometry: CacheGeometry,
    dram: DramTier,
    soc: SocEngine,
    loc: LocEngine,
    soc_handle: PlacementHandle,
    loc_handle: PlacementHandle,
    soc_place: Placement,
    loc_place: Placement,
    metrics: CacheMetrics,
    soc_page_writes: u64,
}

/// Key namespace for [`HybridCache::prefill_loc`]; far above any workload key.
const PREFILL_KEY_BASE: u64 = 1 << 62;

impl HybridCache {
    /// Validate the partition against the device, derive SOC/LOC geometry and
    /// allocate placement handles.
    pub fn new(
        cfg: HybridCacheConfig,
        device: &Device,
        allocator: &mut HandleAllocator,
        hash_seed: u64,
    ) -> Result<Self, CacheError> {
        let page = device.page_size();
        if cfg.bucket_bytes != page {
            return Err(CacheError::BucketPageMismatch {
                bucket: cfg.bucket_bytes,
                page,
            });
        }
        if cfg.region_bytes == 0 || cfg.region_bytes % page != 0 {
            return Err(CacheError::BadRegionSize);
        }
        if !(cfg.soc_fraction > 0.0 && cfg.soc_fraction < 1.0) {
            return Err(CacheError::BadSocFraction);
        }
        let threshold = u64::from(cfg.small_item_threshold_bytes);
        if threshold == 0 || threshold + u64::from(ITEM_HEADER_BYTES) > cfg.bucket_bytes {
            return Err(CacheError::BadThreshold);
        }
        if cfg.lba_base % page != 0 || cfg.flash_bytes == 0 || cfg.flash_bytes % page != 0 {
            return Err(CacheError::BadPartition);
        }
        let usable = device.usable_pages() * page;
        let end = cfg.lba_base + cfg.flash_bytes;
        if end > usable {
            return Err(CacheError::PartitionOutOfRange {
                base: cfg.lba_base,
                end,
                usable,
            });
        }

        // SOC gets a whole number of buckets nearest its fraction; the LOC
        // ring takes whole regions from the remainder.
        let num_buckets =
            ((cfg.soc_fraction * cfg.flash_bytes as f64 / cfg.bucket_bytes as f64).round() as u64)
                .max(1);
        let soc_bytes = num_buckets * cfg.bucket_bytes;
        if soc_bytes >= cfg.flash_bytes {
            return Err(CacheError::FlashTooSmall);
        }
        let num_regions = (cfg.flash_bytes - soc_bytes) / cfg.region_bytes;
        if num_regions == 0 {
            return Err(CacheError::FlashTooSmall);
        }
        let loc_bytes = num_regions * cfg.region_bytes;
        let geometry = CacheGeometry {
            soc_bytes,
            loc_bytes,
            num_buckets,
            num_regions,
            slack_bytes: cfg.flash_bytes - soc_bytes - loc_bytes,
        };

        let (soc_handle, loc_handle) = if cfg.segregate {
            (allocator.allocate(true), allocator.allocate(true))
        } else {
            let shared = allocator.allocate(false);
            (shared, shared)
        };
        let soc_place = allocator.resolve(&soc_handle)?;
        let loc_place = allocator.resolve(&loc_handle)?;

        let base_page = cfg.lba_base / page;
        let soc = SocEngine::new(num_buckets, cfg.bucket_bytes, base_page, hash_seed);
        let loc = LocEngine::new(
            num_regions,
            cfg.region_bytes,
            page,
            base_page + num_buckets,
        );
        Ok(Self {
            dram: DramTier::new(cfg.dram_bytes),
            soc,
            loc,
            soc_handle,
            loc_handle,
            soc_place,
            loc_place,
            metrics: CacheMetrics::default(),
            soc_page_writes: 0,
            geometry,
            cfg,
        })
    }

    pub fn config(&self) -> &HybridCacheConfig {
        &self.cfg
    }

    pub fn geometry(&self) -> &CacheGeometry {
        &self.geometry
    }

    pub fn metrics(&self) -> &CacheMetrics {
        &self.metrics
    }

    pub fn soc_handle(&self) -> &PlacementHandle {
        &self.soc_handle
    }

    pub fn loc_handle(&self) -> &PlacementHandle {
        &self.loc_handle
    }

    pub fn soc_placement(&self) -> Placement {
        self.soc_place
    }

    pub fn loc_placement(&self) -> Placement {
        self.loc_place
    }

    /// Bucket a key hashes to; exposed so tests can craft collisions.
    pub fn bucket_of(&self, key: u64) -> u64 {
        self.soc.bucket_of(key)
    }

    /// Bytes of SOC bucket writes issued so far.
    pub fn soc_write_volume(&self) -> u64 {
        self.soc_page_writes * self.cfg.bucket_bytes
    }

    pub fn loc_flushes(&self) -> u64 {
        self.loc.flushes()
    }

    /// True once the LOC ring has started overwriting its own history.
    pub fn loc_wrapped(&self) -> bool {
        self.loc.wrapped()
    }

    fn is_small(&self, size: u32) -> bool {
        size <= self.cfg.small_item_threshold_bytes
    }

    fn check_size(&self, size: u32) -> Result<(), CacheError> {
        if size == 0
            || u64::from(size) + u64::from(ITEM_HEADER_BYTES) > self.cfg.region_bytes
        {
            return Err(CacheError::ItemTooLarge { size });
        }
        Ok(())
    }

    fn admit_flash(&mut self, device: &mut Device, key: u64, size: u32) -> Result<(), CacheError> {
        self.metrics.app_bytes += u64::from(size);
        if self.is_small(size) {
            let bucket = self.soc.insert(key, size);
            device.write(self.soc_place, self.soc.bucket_lba(bucket), 1)?;
            self.metrics.flash_bytes_written += self.cfg.bucket_bytes;
            self.soc_page_writes += 1;
        } else if let Some(flush) = self.loc.insert(key, size) {
            device.write(self.loc_place, flush.base_page, flush.pages)?;
            self.metrics.flash_bytes_written += self.cfg.region_bytes;
        }
        Ok(())
    }

    /// Insert or update an item. The newest copy lives at the DRAM LRU head;
    /// overflow drains to flash through the size-based router.
    pub fn set(
        &mut self,
        device: &mut Device,
        key: u64,
        size: u32,
    ) -> Result<AdmitOutcome, CacheError> {
        self.check_size(size)?;
        self.metrics.sets += 1;
        if u64::from(size) > self.cfg.dram_bytes {
            // Too big for the DRAM tier altogether: straight to flash.
            self.dram.remove(key);
            self.admit_flash(device, key, size)?;
            return Ok(AdmitOutcome {
                tier: CacheTier::Flash,
                evicted_to_flash: Vec::new(),
            });
        }
        let evicted = self.dram.insert(key, size);
        for &(k, s) in &evicted {
            self.admit_flash(device, k, s)?;
        }
        Ok(AdmitOutcome {
            tier: CacheTier::Dram,
            evicted_to_flash: evicted,
        })
    }

    /// Look a key up. An NVM hit promotes the item into DRAM (which may
    /// cascade evictions exactly as a SET would); the flash copy stays where
    /// it is — no read rewrites flash.
    pub fn get(&mut self, device: &mut Device, key: u64) -> Result<HitClass, CacheError> {
        self.metrics.gets += 1;
        if self.dram.touch(key).is_some() {
            self.metrics.dram_hits += 1;
            return Ok(HitClass::DramHit);
        }
        let flash_size = self.soc.lookup(key).or_else(|| self.loc.lookup(key));
        if let Some(size) = flash_size {
            self.metrics.nvm_hits += 1;
            if u64::from(size) <= self.cfg.dram_bytes {
                let evicted = self.dram.insert(key, size);
                for &(k, s) in &evicted {
                    self.admit_flash(device, k, s)?;
                }
            }
            return Ok(HitClass::NvmHit);
        }
        self.metrics.misses += 1;
        debug_assert_eq!(
            self.metrics.dram_hits + self.metrics.nvm_hits + self.metrics.misses,
            self.metrics.gets
        );
        Ok(HitClass::Miss)
    }

    /// Remove a key everywhere. A SOC-resident key costs one bucket rewrite;
    /// a LOC-resident key just loses its index entry.
    pub fn delete(&mut self, device: &mut Device, key: u64) -> Result<bool, CacheError> {
        let in_dram = self.dram.remove(key).is_some();
        let in_soc = match self.soc.remove(key) {
            Some(bucket) => {
                device.write(self.soc_place, self.soc.bucket_lba(bucket), 1)?;
                self.metrics.flash_bytes_written += self.cfg.bucket_bytes;
                self.soc_page_writes += 1;
                true
            }
            None => false,
        };
        let in_loc = self.loc.remove(key);
        Ok(in_dram || in_soc || in_loc)
    }

    /// Fill the LOC ring once with synthetic resident items, so the LOC holds
    /// live data without receiving further traffic. Model-validation runs use
    /// this to put the device into the regime where all spare space serves
    /// the SOC.
    pub fn prefill_loc(&mut self, device: &mut Device) -> Result<u64, CacheError> {
        let min_eff =
            u64::from(self.cfg.small_item_threshold_bytes) + u64::from(ITEM_HEADER_BYTES) + 1;
        let eff = (self.cfg.region_bytes / 64).max(min_eff);
        let size = (eff - u64::from(ITEM_HEADER_BYTES)) as u32;
        let chunks_per_region = self.cfg.region_bytes / eff;
        let items = chunks_per_region * (self.geometry.num_regions - 1) + 1;
        for i in 0..items {
            if let Some(flush) = self.loc.insert(PREFILL_KEY_BASE + i, size) {
                device.write(self.loc_place, flush.base_page, flush.pages)?;
                self.metrics.flash_bytes_written += self.cfg.region_bytes;
            }
            self.metrics.app_bytes += u64::from(size);
        }
        Ok((self.geometry.num_regions - 1) * self.cfg.region_bytes)
    }
}
