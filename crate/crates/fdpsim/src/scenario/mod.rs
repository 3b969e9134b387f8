//! Experiment runner: scenario configs, the replay driver, sweeps and
//! machine-readable reports.
//!
//! A scenario wires one simulated device to one or more cache instances,
//! each fed by its own deterministic request stream. The runner replays
//! round-robin at single-request granularity, snapshots interval DLWA on
//! host-byte windows, and emits `report.json`, `intervals.csv` and
//! `events.csv`.

mod runner;
mod sweep;

pub use runner::{
    render_report, run_multi_tenant, run_scenario, write_outputs, DeviceReport, HandleAudit,
    InstanceReport, IntervalRow, RunOutcome, RunReport,
};
pub use sweep::{
    compare_model_sim, segregation_pair, sweep, write_compare_csv, write_sweep_csv, CompareRow,
    SweepDimension, SweepRow,
};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::{CacheError, HybridCacheConfig};
use crate::ftl::{DeviceConfig, FtlError};
use crate::model::ModelError;
use crate::workload::{SyntheticSpec, TraceError, WorkloadError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error(transparent)]
    Ftl(#[from] FtlError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Workload selection for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorkloadConfig {
    /// A named built-in profile, with optional overrides.
    Profile {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num_keys: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zipf_alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        total_ops: Option<u64>,
    },
    /// A fully spelled-out synthetic spec.
    Synthetic {
        #[serde(flatten)]
        spec: SyntheticSpec,
    },
    /// Replay a CSV trace file.
    Trace {
        path: PathBuf,
        /// Apply the write-only transformation (drop GETs) before replay.
        #[serde(default)]
        write_only: bool,
    },
}

impl WorkloadConfig {
    /// Materialize the synthetic spec, if this is a synthetic workload.
    /// The caller injects the effective seed afterwards.
    pub fn synthetic_spec(&self) -> Result<Option<SyntheticSpec>, ScenarioError> {
        match self {
            WorkloadConfig::Profile {
                name,
                num_keys,
                zipf_alpha,
                total_ops,
            } => {
                let mut spec = SyntheticSpec::profile(name).ok_or_else(|| {
                    ScenarioError::Config(format!("unknown workload profile {name:?}"))
                })?;
                if let Some(n) = num_keys {
                    spec.num_keys = *n;
                }
                if let Some(a) = zipf_alpha {
                    spec.zipf_alpha = *a;
                }
                if let Some(t) = total_ops {
                    spec.total_ops = *t;
                }
                Ok(Some(spec))
            }
            WorkloadConfig::Synthetic { spec } => Ok(Some(spec.clone())),
            WorkloadConfig::Trace { .. } => Ok(None),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_bucket_bytes() -> u64 {
    4096
}

fn default_region_bytes() -> u64 {
    16 << 20
}

fn default_threshold() -> u32 {
    2048
}

/// One cache instance: sizing plus the stream that drives it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub dram_bytes: u64,
    pub flash_bytes: u64,
    pub soc_fraction: f64,
    #[serde(default = "default_bucket_bytes")]
    pub bucket_bytes: u64,
    #[serde(default = "default_region_bytes")]
    pub region_bytes: u64,
    #[serde(default = "default_threshold")]
    pub small_item_threshold_bytes: u32,
    #[serde(default)]
    pub lba_base: u64,
    #[serde(default = "default_true")]
    pub segregate: bool,
    /// Fill the LOC ring with resident data before replay starts. Model
    /// validation uses this to study the SOC against a full large-object
    /// cache without generating large-object traffic.
    #[serde(default)]
    pub prefill_loc: bool,
    pub workload: WorkloadConfig,
}

impl InstanceConfig {
    pub fn cache_config(&self) -> HybridCacheConfig {
        HybridCacheConfig {
            dram_bytes: self.dram_bytes,
            flash_bytes: self.flash_bytes,
            soc_fraction: self.soc_fraction,
            bucket_bytes: self.bucket_bytes,
            region_bytes: self.region_bytes,
            small_item_threshold_bytes: self.small_item_threshold_bytes,
            lba_base: self.lba_base,
            segregate: self.segregate,
        }
    }
}

/// Run bounds and reproducibility knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Stop once the device has absorbed this many host GiB.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_host_gib: Option<f64>,
    /// Stop after this many requests across all instances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_ops: Option<u64>,
    /// Interval snapshot window in host bytes; zero selects usable/64.
    #[serde(default)]
    pub snapshot_window_bytes: u64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// A complete experiment description. The one accepted rendering is JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub device: DeviceConfig,
    pub instances: Vec<InstanceConfig>,
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let cfg: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| ScenarioError::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.instances.is_empty() {
            return Err(ScenarioError::Config("no cache instances".into()));
        }
        if self.run.total_host_gib.is_none() && self.run.total_ops.is_none() {
            return Err(ScenarioError::Config(
                "run must bound host bytes (total_host_gib) or requests (total_ops)".into(),
            ));
        }
        if let Some(g) = self.run.total_host_gib {
            if !(g > 0.0) {
                return Err(ScenarioError::Config("total_host_gib must be positive".into()));
            }
        }
        // Partition layout: page aligned, in range, pairwise disjoint.
        let usable = self.device.usable_capacity_bytes;
        let mut spans: Vec<(u64, u64, usize)> = self
            .instances
            .iter()
            .enumerate()
            .map(|(i, inst)| (inst.lba_base, inst.lba_base + inst.flash_bytes, i))
            .collect();
        spans.sort_unstable();
        for window in spans.windows(2) {
            let (a, b) = (&window[0], &window[1]);
            if a.1 > b.0 {
                return Err(ScenarioError::Config(format!(
                    "instances {} and {} overlap: [{}, {}) vs [{}, {})",
                    a.2, b.2, a.0, a.1, b.0, b.1
                )));
            }
        }
        for (base, end, i) in &spans {
            if *end > usable || base % self.device.page_size_bytes != 0 {
                return Err(ScenarioError::Config(format!(
                    "instance {i} partition [{base}, {end}) invalid for usable capacity {usable}"
                )));
            }
        }
        for (i, inst) in self.instances.iter().enumerate() {
            if let WorkloadConfig::Profile { name, .. } = &inst.workload {
                if SyntheticSpec::profile(name).is_none() {
                    return Err(ScenarioError::Config(format!(
                        "instance {i}: unknown workload profile {name:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Effective interval snapshot window.
    pub fn snapshot_window(&self) -> u64 {
        if self.run.snapshot_window_bytes > 0 {
            self.run.snapshot_window_bytes
        } else {
            (self.device.usable_capacity_bytes / 64).max(self.device.page_size_bytes)
        }
    }
}
