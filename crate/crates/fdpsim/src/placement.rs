//! Placement handles: the host-side abstraction that lets cache engines
//! direct data onto the device without knowing anything about FDP.
//!
//! Consumers ask the allocator for a handle; engines that want isolation get
//! a handle backed by a unique placement identifier when the device offers
//! one, and a default (no-preference) handle otherwise. The degradation is
//! observable on the handle but never an error, which is what keeps the
//! whole stack working unchanged on conventional SSDs.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::ftl::DeviceConfig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlacementError {
    #[error("handle was not issued by this allocator")]
    ForeignHandle,
}

/// The `<reclaim group, reclaim unit handle>` pair attached to a write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PlacementIdentifier {
    pub rg_id: u16,
    pub ruh_id: u16,
}

/// What a handle means to the device: a concrete placement identifier, or no
/// preference at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Default,
    Pid(PlacementIdentifier),
}

/// Opaque token handed to cache engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlacementHandle {
    allocator: u64,
    index: u32,
    is_default: bool,
}

impl PlacementHandle {
    pub fn is_default(&self) -> bool {
        self.is_default
    }
}

/// Device capability snapshot the allocator works from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeviceCaps {
    pub fdp_enabled: bool,
    pub num_ruhs: u16,
    pub num_rgs: u16,
}

impl From<&DeviceConfig> for DeviceCaps {
    fn from(cfg: &DeviceConfig) -> Self {
        Self {
            fdp_enabled: cfg.fdp_enabled,
            num_ruhs: cfg.num_ruhs,
            num_rgs: cfg.num_rgs,
        }
    }
}

static ALLOCATOR_IDS: AtomicU64 = AtomicU64::new(1);

/// Hands out placement handles in a fixed order: ascending RUH within
/// reclaim group 0. Handles are never recycled; cache engines live for the
/// whole run.
#[derive(Debug)]
pub struct HandleAllocator {
    id: u64,
    caps: DeviceCaps,
    issued: Vec<Placement>,
    next_ruh: u16,
}

impl HandleAllocator {
    /// Discover capability from the device configuration. With FDP disabled
    /// (or a device offering no handles) the PID pool is empty and only
    /// default handles are issued.
    pub fn new(caps: DeviceCaps) -> Self {
        Self {
            id: ALLOCATOR_IDS.fetch_add(1, Ordering::Relaxed),
            caps,
            issued: Vec::new(),
            next_ruh: 0,
        }
    }

    /// Total PIDs the device offers to this allocator.
    pub fn pool_size(&self) -> u16 {
        if self.caps.fdp_enabled {
            self.caps.num_ruhs
        } else {
            0
        }
    }

    /// PIDs not yet bound to a handle.
    pub fn remaining(&self) -> u16 {
        self.pool_size() - self.next_ruh
    }

    /// Issue a handle. Isolation requests drain the PID pool; once it is
    /// empty (or when the caller states no preference) the default handle is
    /// returned instead.
    pub fn allocate(&mut self, wants_isolation: bool) -> PlacementHandle {
        let placement = if wants_isolation && self.remaining() > 0 {
            let pid = PlacementIdentifier {
                rg_id: 0,
                ruh_id: self.next_ruh,
            };
            self.next_ruh += 1;
            Placement::Pid(pid)
        } else {
            Placement::Default
        };
        let handle = PlacementHandle {
            allocator: self.id,
            index: self.issued.len() as u32,
            is_default: placement == Placement::Default,
        };
        self.issued.push(placement);
        handle
    }

    /// Translate a handle back to its placement. Stable for the allocator's
    /// lifetime; rejects handles from other allocators.
    pub fn resolve(&self, handle: &PlacementHandle) -> Result<Placement, PlacementError> {
        if handle.allocator != self.id || handle.index as usize >= self.issued.len() {
            return Err(PlacementError::ForeignHandle);
        }
        Ok(self.issued[handle.index as usize])
    }
}
