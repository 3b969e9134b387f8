//! The replay driver: streams → caches → placement → device, with interval
//! accounting and steady-state detection.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::cache::{CacheError, CacheGeometry, CacheMetrics, HybridCache};
use crate::ftl::{Device, DlwaCounters, EventSummary};
use crate::model::{gc_energy_proxy, GcEnergyProxy};
use crate::placement::{DeviceCaps, HandleAllocator, Placement};
use crate::rng::mix2;
use crate::workload::{gen_synthetic, parse_trace, strip_gets, CacheRequest, Op, SyntheticStream};

use super::{InstanceConfig, ScenarioConfig, ScenarioError, WorkloadConfig};

/// One row of `intervals.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalRow {
    /// Cumulative host GiB at the end of the interval.
    pub host_gib: f64,
    pub interval_dlwa: f64,
    pub cumulative_dlwa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HandleAudit {
    pub soc: String,
    pub loc: String,
    /// True when an isolation request degraded to the default handle
    /// because the PID pool was exhausted.
    pub degraded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub geometry: CacheGeometry,
    pub metrics: CacheMetrics,
    pub alwa: Option<f64>,
    pub nvm_hit_ratio: f64,
    /// Bytes issued through the SOC handle (whole-bucket page writes).
    pub soc_flash_bytes: u64,
    /// Bytes issued through the LOC handle (region flushes).
    pub loc_flash_bytes: u64,
    pub handles: HandleAudit,
    /// Requests dropped for carrying sizes the cache cannot store.
    pub skipped_requests: u64,
    /// Rows the trace parser rejected (trace workloads only).
    pub malformed_trace_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceReport {
    pub counters: DlwaCounters,
    pub dlwa: Option<f64>,
    /// DLWA measured after warm-up only.
    pub steady_state_dlwa: Option<f64>,
    pub steady_state_reached: bool,
    pub warmup_host_bytes: u64,
    pub physical_ru_count: u32,
    pub free_rus: u32,
    pub event_summary: EventSummary,
    pub energy_proxy: GcEnergyProxy,
}

/// Full machine-readable run result; serialized as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub instances: Vec<InstanceReport>,
    pub device: DeviceReport,
    /// Wall-clock stamp applied at serialization time; the single
    /// non-deterministic field.
    pub generated_unix_ms: u64,
}

pub struct RunOutcome {
    pub report: RunReport,
    pub intervals: Vec<IntervalRow>,
    pub events_csv: String,
}

enum Stream {
    Synthetic(Box<SyntheticStream>),
    Replay(std::vec::IntoIter<CacheRequest>),
}

impl Iterator for Stream {
    type Item = CacheRequest;

    fn next(&mut self) -> Option<CacheRequest> {
        match self {
            Stream::Synthetic(s) => s.next(),
            Stream::Replay(v) => v.next(),
        }
    }
}

fn placement_label(p: Placement) -> String {
    match p {
        Placement::Default => "default".to_string(),
        Placement::Pid(pid) => format!("rg{}/ruh{}", pid.rg_id, pid.ruh_id),
    }
}

fn build_stream(
    inst: &InstanceConfig,
    run_seed: u64,
    index: usize,
) -> Result<(Stream, u64), ScenarioError> {
    match &inst.workload {
        WorkloadConfig::Trace { path, write_only } => {
            let file = fs::File::open(path)?;
            let (rows, stats) = parse_trace(std::io::BufReader::new(file))?;
            let rows = if *write_only {
                strip_gets(rows.into_iter()).collect()
            } else {
                rows
            };
            Ok((Stream::Replay(rows.into_iter()), stats.malformed))
        }
        _ => {
            let mut spec = inst
                .workload
                .synthetic_spec()?
                .expect("profile/synthetic workloads have a spec");
            spec.seed = mix2(mix2(run_seed, index as u64), spec.seed);
            Ok((Stream::Synthetic(Box::new(gen_synthetic(spec)?)), 0))
        }
    }
}

struct InstanceState {
    cache: HybridCache,
    stream: Stream,
    done: bool,
    skipped: u64,
    malformed: u64,
    /// LOC flushes at replay start; prefill does not count toward warm-up.
    loc_flush_baseline: u64,
}

impl InstanceState {
    /// Warm-up is done when every engine that has seen traffic has cycled
    /// once: the SOC has written one full span's worth of bucket volume and
    /// the LOC ring has wrapped.
    fn warmed_up(&self) -> bool {
        let soc_ready = self.cache.soc_write_volume() == 0
            || self.cache.soc_write_volume() >= self.cache.geometry().soc_bytes;
        let loc_ready =
            self.cache.loc_flushes() == self.loc_flush_baseline || self.cache.loc_wrapped();
        soc_ready && loc_ready
    }
}

fn apply_request(
    cache: &mut HybridCache,
    device: &mut Device,
    req: CacheRequest,
    skipped: &mut u64,
) -> Result<(), ScenarioError> {
    match req.op {
        Op::Get => {
            cache.get(device, req.key)?;
        }
        Op::Set => match cache.set(device, req.key, req.value_size_bytes) {
            Err(CacheError::ItemTooLarge { .. }) => *skipped += 1,
            other => {
                other?;
            }
        },
        Op::Delete => {
            cache.delete(device, req.key)?;
        }
    }
    Ok(())
}

/// Run a scenario to completion. Deterministic for a fixed config.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutcome, ScenarioError> {
    cfg.validate()?;
    let mut device = Device::new(cfg.device.clone())?;
    let mut allocator = HandleAllocator::new(DeviceCaps::from(&cfg.device));

    let mut instances = Vec::with_capacity(cfg.instances.len());
    for (idx, inst) in cfg.instances.iter().enumerate() {
        let cache = HybridCache::new(
            inst.cache_config(),
            &device,
            &mut allocator,
            mix2(cfg.run.seed, 0x50c0 + idx as u64),
        )?;
        let (stream, malformed) = build_stream(inst, cfg.run.seed, idx)?;
        instances.push(InstanceState {
            cache,
            stream,
            done: false,
            skipped: 0,
            malformed,
            loc_flush_baseline: 0,
        });
    }

    // Prefill before replay so the ring holds resident data from the start.
    for (idx, state) in instances.iter_mut().enumerate() {
        if cfg.instances[idx].prefill_loc {
            state.cache.prefill_loc(&mut device)?;
        }
        state.loc_flush_baseline = state.cache.loc_flushes();
    }

    let target_host_bytes = cfg
        .run
        .total_host_gib
        .map(|g| (g * (1u64 << 30) as f64) as u64);
    let target_ops = cfg.run.total_ops;
    let window = cfg.snapshot_window();

    let mut intervals = Vec::new();
    let mut next_snapshot = device.counters().host_bytes_written + window;
    let mut ops: u64 = 0;
    let mut warmup: Option<(u64, u64)> = None; // (host, nand) at warm-up

    'replay: loop {
        let mut progressed = false;
        for i in 0..instances.len() {
            if target_ops.is_some_and(|t| ops >= t) {
                break 'replay;
            }
            if target_host_bytes.is_some_and(|t| device.counters().host_bytes_written >= t) {
                break 'replay;
            }
            if instances[i].done {
                continue;
            }
            let Some(req) = instances[i].stream.next() else {
                instances[i].done = true;
                continue;
            };
            progressed = true;
            let state = &mut instances[i];
            apply_request(&mut state.cache, &mut device, req, &mut state.skipped)?;
            ops += 1;

            if cfg!(debug_assertions) && ops % 10_000 == 0 {
                device
                    .check_counters()
                    .expect("device counter invariants must hold during replay");
            }

            let host = device.counters().host_bytes_written;
            if host >= next_snapshot {
                let snap = device.snapshot_interval();
                let c = device.counters();
                intervals.push(IntervalRow {
                    host_gib: c.host_bytes_written as f64 / (1u64 << 30) as f64,
                    interval_dlwa: snap.interval_dlwa,
                    cumulative_dlwa: c.dlwa().unwrap_or(1.0),
                });
                while next_snapshot <= host {
                    next_snapshot += window;
                }
                if warmup.is_none() && instances.iter().all(|s| s.warmed_up()) {
                    warmup = Some((c.host_bytes_written, c.nand_bytes_written));
                }
            }
        }
        if !progressed {
            break;
        }
    }

    // Close out the final partial interval.
    let snap = device.snapshot_interval();
    if snap.interval_host_bytes > 0 {
        let c = device.counters();
        intervals.push(IntervalRow {
            host_gib: c.host_bytes_written as f64 / (1u64 << 30) as f64,
            interval_dlwa: snap.interval_dlwa,
            cumulative_dlwa: c.dlwa().unwrap_or(1.0),
        });
    }
    if warmup.is_none() && instances.iter().all(|s| s.warmed_up()) {
        let c = device.counters();
        warmup = Some((c.host_bytes_written, c.nand_bytes_written));
    }

    if cfg!(debug_assertions) {
        device
            .check_invariants()
            .expect("device invariants must hold at run end");
        let cache_flash: u64 = instances
            .iter()
            .map(|s| s.cache.metrics().flash_bytes_written)
            .sum();
        assert_eq!(
            cache_flash,
            device.counters().host_bytes_written,
            "accounting closure: cache flash bytes must equal device host bytes"
        );
    }

    let counters = *device.counters();
    let steady_state_dlwa = warmup.and_then(|(h, n)| {
        let dh = counters.host_bytes_written.saturating_sub(h);
        if dh == 0 {
            None
        } else {
            Some((counters.nand_bytes_written - n) as f64 / dh as f64)
        }
    });

    let instance_reports: Vec<InstanceReport> = instances
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let m = *s.cache.metrics();
            let wanted_isolation = cfg.instances[index].segregate && cfg.device.fdp_enabled;
            InstanceReport {
                index,
                geometry: *s.cache.geometry(),
                metrics: m,
                alwa: m.alwa().ok(),
                nvm_hit_ratio: if m.gets > 0 {
                    m.nvm_hits as f64 / m.gets as f64
                } else {
                    0.0
                },
                soc_flash_bytes: s.cache.soc_write_volume(),
                loc_flash_bytes: s.cache.loc_flushes()
                    * cfg.instances[index].region_bytes,
                handles: HandleAudit {
                    soc: placement_label(s.cache.soc_placement()),
                    loc: placement_label(s.cache.loc_placement()),
                    degraded: wanted_isolation
                        && (s.cache.soc_handle().is_default()
                            || s.cache.loc_handle().is_default()),
                },
                skipped_requests: s.skipped,
                malformed_trace_rows: s.malformed,
            }
        })
        .collect();

    let mut events_csv = Vec::new();
    device.write_events_csv(&mut events_csv)?;

    let report = RunReport {
        config: cfg.clone(),
        instances: instance_reports,
        device: DeviceReport {
            counters,
            dlwa: counters.dlwa().ok(),
            steady_state_dlwa,
            steady_state_reached: warmup.is_some(),
            warmup_host_bytes: warmup.map(|(h, _)| h).unwrap_or(0),
            physical_ru_count: device.physical_ru_count(),
            free_rus: device.free_ru_count(),
            event_summary: device.event_summary(),
            energy_proxy: gc_energy_proxy(
                counters.host_bytes_written / cfg.device.page_size_bytes,
                counters.relocated_bytes / cfg.device.page_size_bytes,
            ),
        },
        generated_unix_ms: 0,
    };

    Ok(RunOutcome {
        report,
        intervals,
        events_csv: String::from_utf8(events_csv).expect("event csv is utf-8"),
    })
}

/// Multi-tenant entry point: several instances sharing one device. With a
/// single instance this degenerates to [`run_scenario`].
pub fn run_multi_tenant(cfg: &ScenarioConfig) -> Result<RunOutcome, ScenarioError> {
    run_scenario(cfg)
}

/// Serialize a report with a fixed timestamp. Two runs of the same config
/// render byte-identically for the same `timestamp_ms`.
pub fn render_report(report: &RunReport, timestamp_ms: u64) -> String {
    let mut stamped = report.clone();
    stamped.generated_unix_ms = timestamp_ms;
    let mut text = serde_json::to_string_pretty(&stamped).expect("report serializes");
    text.push('\n');
    text
}

pub fn intervals_csv(rows: &[IntervalRow]) -> String {
    let mut out = String::from("host_gib,interval_dlwa,cumulative_dlwa\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6},{:.6},{:.6}\n",
            r.host_gib, r.interval_dlwa, r.cumulative_dlwa
        ));
    }
    out
}

/// Write `report.json`, `intervals.csv` and `events.csv` under `dir`.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>, ScenarioError> {
    fs::create_dir_all(dir)?;
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    let report_path = dir.join("report.json");
    fs::write(&report_path, render_report(&outcome.report, ts))?;
    let intervals_path = dir.join("intervals.csv");
    fs::write(&intervals_path, intervals_csv(&outcome.intervals))?;
    let events_path = dir.join("events.csv");
    fs::write(&events_path, &outcome.events_csv)?;
    Ok(vec![report_path, intervals_path, events_path])
}
