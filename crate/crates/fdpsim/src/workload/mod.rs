//! Deterministic request streams: synthetic Zipf-shaped key-value workloads
//! and a CSV trace replayer.
//!
//! Key popularity follows Zipf(alpha) via inverse-CDF sampling on a
//! precomputed cumulative table. Each key's size is drawn once from its
//! class distribution and never changes, so overwrites are size-consistent
//! and SOC/LOC routing is stable across a run.

mod trace;

pub use trace::{parse_trace, TraceError, TraceStats};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{mix2, SplitMix64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkloadError {
    #[error("num_keys must be positive")]
    NoKeys,
    #[error(
        "a Zipf table for {num_keys} keys exceeds the in-memory limit of \
         {limit}; use a smaller desk-scale key space"
    )]
    TableTooLarge { num_keys: u64, limit: u64 },
    #[error("{0} must lie in [0, 1]")]
    BadFraction(&'static str),
    #[error("zipf_alpha must be finite and >= 0")]
    BadAlpha,
    #[error("size distribution is empty or contains non-positive sizes")]
    BadSizeDist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Op {
    Get,
    Set,
    Delete,
}

/// One replayable cache operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheRequest {
    pub op: Op,
    pub key: u64,
    /// Payload size for SET; zero (and ignored) for GET and DELETE.
    pub value_size_bytes: u32,
}

/// Discrete value-size distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum SizeDist {
    Fixed { bytes: u32 },
    Uniform { min: u32, max: u32 },
    /// Log-uniform over `[min, max]`; heavy toward the small end, which is
    /// how real object-size distributions look.
    LogUniform { min: u32, max: u32 },
}

impl SizeDist {
    fn validate(&self) -> Result<(), WorkloadError> {
        let ok = match *self {
            SizeDist::Fixed { bytes } => bytes > 0,
            SizeDist::Uniform { min, max } | SizeDist::LogUniform { min, max } => {
                min > 0 && min <= max
            }
        };
        if ok {
            Ok(())
        } else {
            Err(WorkloadError::BadSizeDist)
        }
    }

    /// Deterministic draw from a single 64-bit sample.
    pub fn sample(&self, draw: u64) -> u32 {
        match *self {
            SizeDist::Fixed { bytes } => bytes,
            SizeDist::Uniform { min, max } => {
                let span = u64::from(max - min) + 1;
                min + (((draw as u128 * span as u128) >> 64) as u64) as u32
            }
            SizeDist::LogUniform { min, max } => {
                if min == max {
                    return min;
                }
                let f = (draw >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                let ln = f64::from(min).ln() + f * (f64::from(max).ln() - f64::from(min).ln());
                (ln.exp().round() as u32).clamp(min, max)
            }
        }
    }
}

/// Parameters of a synthetic workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub num_keys: u64,
    pub zipf_alpha: f64,
    /// Fraction of operations that are GETs; the rest are SETs.
    pub get_fraction: f64,
    pub small_size_dist: SizeDist,
    pub large_size_dist: SizeDist,
    /// Fraction of operations targeting small-class keys. The key space is
    /// split in the same proportion, so small keys are both more numerous
    /// and more frequently accessed.
    pub small_object_op_fraction: f64,
    pub total_ops: u64,
    pub seed: u64,
}

/// Largest per-class Zipf table we are willing to hold in memory.
const ZIPF_TABLE_LIMIT: u64 = 32_000_000;

impl SyntheticSpec {
    /// Built-in profiles shaped like production cache traces. Only the
    /// GET:SET ratios are taken from published workload descriptions; size
    /// distributions and skew are documented desk-scale defaults.
    ///
    /// - `kv-cache`: read-intensive, GETs outnumber SETs 4:1.
    /// - `kv-cache-wo`: the write-only variant (GETs stripped).
    /// - `twitter-c12`: write-intensive, SETs outnumber GETs 4:1.
    pub fn profile(name: &str) -> Option<Self> {
        let base = Self {
            num_keys: 2_000_000,
            zipf_alpha: 0.8,
            get_fraction: 0.0,
            small_size_dist: SizeDist::LogUniform {
                min: 100,
                max: 2000,
            },
            large_size_dist: SizeDist::LogUniform {
                min: 4096,
                max: 262_144,
            },
            small_object_op_fraction: 0.9,
            total_ops: u64::MAX,
            seed: 0,
        };
        match name {
            "kv-cache" => Some(Self {
                get_fraction: 0.8,
                ..base
            }),
            "kv-cache-wo" => Some(base),
            "twitter-c12" => Some(Self {
                get_fraction: 0.2,
                ..base
            }),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), WorkloadError> {
        if self.num_keys == 0 {
            return Err(WorkloadError::NoKeys);
        }
        if !(0.0..=1.0).contains(&self.get_fraction) {
            return Err(WorkloadError::BadFraction("get_fraction"));
        }
        if !(0.0..=1.0).contains(&self.small_object_op_fraction) {
            return Err(WorkloadError::BadFraction("small_object_op_fraction"));
        }
        if !self.zipf_alpha.is_finite() || self.zipf_alpha < 0.0 {
            return Err(WorkloadError::BadAlpha);
        }
        self.small_size_dist.validate()?;
        self.large_size_dist.validate()?;
        Ok(())
    }

    /// Number of keys in the small class; the rest are large-class keys.
    pub fn small_key_count(&self) -> u64 {
        if self.small_object_op_fraction >= 1.0 {
            self.num_keys
        } else if self.small_object_op_fraction <= 0.0 {
            0
        } else {
            ((self.num_keys as f64 * self.small_object_op_fraction).round() as u64)
                .clamp(1, self.num_keys.saturating_sub(1))
        }
    }
}

enum ZipfSampler {
    Uniform(u64),
    Table(Vec<f64>),
}

impl ZipfSampler {
    fn new(n: u64, alpha: f64) -> Result<Self, WorkloadError> {
        if alpha == 0.0 {
            return Ok(ZipfSampler::Uniform(n));
        }
        if n > ZIPF_TABLE_LIMIT {
            return Err(WorkloadError::TableTooLarge {
                num_keys: n,
                limit: ZIPF_TABLE_LIMIT,
            });
        }
        let mut cum = Vec::with_capacity(n as usize);
        let mut acc = 0.0f64;
        for rank in 1..=n {
            acc += (rank as f64).powf(-alpha);
            cum.push(acc);
        }
        let total = acc;
        for c in &mut cum {
            *c /= total;
        }
        Ok(ZipfSampler::Table(cum))
    }

    fn sample(&self, rng: &mut SplitMix64) -> u64 {
        match self {
            ZipfSampler::Uniform(n) => rng.next_range(*n),
            ZipfSampler::Table(cum) => {
                let u = rng.next_f64();
                let idx = cum.partition_point(|&c| c < u);
                idx.min(cum.len() - 1) as u64
            }
        }
    }
}

/// Iterator over a synthetic request stream. Deterministic for a fixed spec.
pub struct SyntheticStream {
    spec: SyntheticSpec,
    rng: SplitMix64,
    small: Option<ZipfSampler>,
    large: Option<ZipfSampler>,
    small_keys: u64,
    emitted: u64,
}

const SIZE_SALT: u64 = 0x515e_5a17;

impl SyntheticStream {
    /// Stable size of `key`, drawn once from its class distribution.
    pub fn key_size(spec: &SyntheticSpec, key: u64) -> u32 {
        let small = key < spec.small_key_count();
        let dist = if small {
            &spec.small_size_dist
        } else {
            &spec.large_size_dist
        };
        dist.sample(mix2(spec.seed ^ SIZE_SALT, key))
    }
}

impl Iterator for SyntheticStream {
    type Item = CacheRequest;

    fn next(&mut self) -> Option<CacheRequest> {
        if self.emitted >= self.spec.total_ops {
            return None;
        }
        self.emitted += 1;

        let go_small = match (&self.small, &self.large) {
            (Some(_), Some(_)) => self.rng.next_f64() < self.spec.small_object_op_fraction,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => unreachable!("validated: at least one class"),
        };
        let key = if go_small {
            self.small.as_ref().unwrap().sample(&mut self.rng)
        } else {
            self.small_keys + self.large.as_ref().unwrap().sample(&mut self.rng)
        };
        let op = if self.rng.next_f64() < self.spec.get_fraction {
            Op::Get
        } else {
            Op::Set
        };
        let value_size_bytes = if op == Op::Set {
            SyntheticStream::key_size(&self.spec, key)
        } else {
            0
        };
        Some(CacheRequest {
            op,
            key,
            value_size_bytes,
        })
    }
}

/// Build the deterministic stream described by `spec`.
pub fn gen_synthetic(spec: SyntheticSpec) -> Result<SyntheticStream, WorkloadError> {
    spec.validate()?;
    let small_keys = spec.small_key_count();
    let large_keys = spec.num_keys - small_keys;
    let small = if small_keys > 0 {
        Some(ZipfSampler::new(small_keys, spec.zipf_alpha)?)
    } else {
        None
    };
    let large = if large_keys > 0 {
        Some(ZipfSampler::new(large_keys, spec.zipf_alpha)?)
    } else {
        None
    };
    Ok(SyntheticStream {
        rng: SplitMix64::new(spec.seed),
        small,
        large,
        small_keys,
        emitted: 0,
        spec,
    })
}

/// The write-only transformation: drop GETs, keep everything else in order.
pub fn strip_gets<I>(stream: I) -> impl Iterator<Item = CacheRequest>
where
    I: Iterator<Item = CacheRequest>,
{
    stream.filter(|r| r.op != Op::Get)
}
