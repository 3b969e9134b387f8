//! Acceptance suite: one test per claim the artifact must reproduce, each
//! printing a PASS line with the measured numbers (run with `--nocapture`
//! to see them).
//!
//! The heavyweight scenario pairs are shared between criteria through
//! lazily-initialized fixtures, so the suite stays within a desk-scale time
//! budget on a single core.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use common::reference_ftl::ReferenceFtl;
use fdpsim::ftl::{Device, DeviceConfig, PageState, RuhType};
use fdpsim::model;
use fdpsim::placement::{Placement, PlacementIdentifier};
use fdpsim::rng::SplitMix64;
use fdpsim::scenario::{
    render_report, run_multi_tenant, run_scenario, segregation_pair, InstanceConfig, RunConfig,
    RunOutcome, ScenarioConfig, WorkloadConfig,
};
use fdpsim::workload::{SizeDist, SyntheticSpec};

// ---------------------------------------------------------------------------
// Desk-scale scenario builders
// ---------------------------------------------------------------------------

const GIB: u64 = 1 << 30;

/// Desk-scale device: 8 GiB usable, 4 MiB reclaim units, 4 KiB pages, 7%
/// overprovisioning, 8 initially-isolated handles.
fn desk_device() -> DeviceConfig {
    DeviceConfig::default()
}

/// SET-only small-object-dominant workload. Uniform keys over a universe far
/// larger than any SOC capacity in the sweep, so bucket churn stays in the
/// high-invalidation regime the analysis targets at every SOC size.
fn desk_workload() -> WorkloadConfig {
    WorkloadConfig::Profile {
        name: "kv-cache-wo".into(),
        num_keys: Some(32_000_000),
        zipf_alpha: Some(0.0),
        total_ops: None,
    }
}

/// One cache instance over `util` of the device, with the production-default
/// 4% SOC share unless overridden. Regions are 1 MiB so each reclaim unit holds
/// several regions, as on the evaluated hardware where regions are a tiny
/// fraction of a reclaim unit.
fn desk_instance(util: f64, soc_fraction: f64) -> InstanceConfig {
    let usable = desk_device().usable_capacity_bytes;
    let flash = ((usable as f64 * util) as u64 / 4096) * 4096;
    InstanceConfig {
        dram_bytes: 256 << 20,
        flash_bytes: flash,
        soc_fraction,
        bucket_bytes: 4096,
        region_bytes: 1 << 20,
        small_item_threshold_bytes: 2048,
        lba_base: 0,
        segregate: true,
        prefill_loc: false,
        workload: desk_workload(),
    }
}

fn desk_scenario(util: f64, soc_fraction: f64, host_gib: f64) -> ScenarioConfig {
    ScenarioConfig {
        device: desk_device(),
        instances: vec![desk_instance(util, soc_fraction)],
        run: RunConfig {
            total_host_gib: Some(host_gib),
            total_ops: None,
            snapshot_window_bytes: 0,
            seed: 42,
        },
        output: Default::default(),
    }
}

#[derive(Debug, Clone, Copy)]
struct RunSummary {
    steady_dlwa: f64,
    relocation_events: u64,
    host_bytes: u64,
    elapsed_s: f64,
}

fn summarize(outcome: &RunOutcome, elapsed_s: f64) -> RunSummary {
    RunSummary {
        steady_dlwa: outcome
            .report
            .device
            .steady_state_dlwa
            .or(outcome.report.device.dlwa)
            .expect("acceptance runs write host data"),
        relocation_events: outcome.report.device.counters.relocation_events,
        host_bytes: outcome.report.device.counters.host_bytes_written,
        elapsed_s,
    }
}

fn run_pair(cfg: &ScenarioConfig) -> (RunSummary, RunSummary) {
    let (fdp_cfg, nonfdp_cfg) = segregation_pair(cfg);
    let t = Instant::now();
    let fdp = run_scenario(&fdp_cfg).expect("segregated run");
    let fdp_elapsed = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let nonfdp = run_scenario(&nonfdp_cfg).expect("unsegregated run");
    let nonfdp_elapsed = t.elapsed().as_secs_f64();
    (
        summarize(&fdp, fdp_elapsed),
        summarize(&nonfdp, nonfdp_elapsed),
    )
}

/// Segregated/unsegregated pairs at SOC 4% across utilizations; shared by
/// criteria 1, 2, 3 (its 4% point) and 7. Host volume: 8x usable capacity.
fn util_pairs() -> &'static Vec<(f64, RunSummary, RunSummary)> {
    static PAIRS: OnceLock<Vec<(f64, RunSummary, RunSummary)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        [0.5, 0.9, 0.95, 1.0]
            .iter()
            .map(|&util| {
                let cfg = desk_scenario(util, 0.04, 64.0);
                let (seg, unseg) = run_pair(&cfg);
                (util, seg, unseg)
            })
            .collect()
    })
}

/// SOC-fraction sweep pairs at 100% utilization. Host volume scales with the
/// SOC span so every point is measured at steady state.
fn soc_pairs() -> &'static Vec<(f64, RunSummary, RunSummary)> {
    static PAIRS: OnceLock<Vec<(f64, RunSummary, RunSummary)>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        [(0.16, 64.0), (0.32, 64.0), (0.64, 96.0), (0.90, 128.0), (0.96, 144.0)]
            .iter()
            .map(|&(fraction, host_gib)| {
                let cfg = desk_scenario(1.0, fraction, host_gib);
                let (seg, unseg) = run_pair(&cfg);
                (fraction, seg, unseg)
            })
            .collect()
    })
}

fn util_point(util: f64) -> (RunSummary, RunSummary) {
    let (_, seg, unseg) = util_pairs()
        .iter()
        .find(|(u, _, _)| (*u - util).abs() < 1e-9)
        .copied()
        .expect("utilization point present");
    (seg, unseg)
}

// ---------------------------------------------------------------------------
// Criterion 1: segregation cuts DLWA to ~1 at full utilization
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_segregation_benefit() {
    let (seg, unseg) = util_point(1.0);
    println!(
        "criterion 1: steady DLWA segregated {:.4} (<= 1.10), unsegregated {:.4} (>= 2.0, \
         >= 2x segregated); pair runtime {:.1}s (< 300s)",
        seg.steady_dlwa,
        unseg.steady_dlwa,
        seg.elapsed_s + unseg.elapsed_s
    );
    assert!(
        seg.steady_dlwa <= 1.10,
        "segregated steady DLWA {} above 1.10",
        seg.steady_dlwa
    );
    assert!(
        unseg.steady_dlwa >= 2.0,
        "unsegregated steady DLWA {} below 2.0",
        unseg.steady_dlwa
    );
    assert!(
        unseg.steady_dlwa >= 2.0 * seg.steady_dlwa,
        "unsegregated {} not at least twice segregated {}",
        unseg.steady_dlwa,
        seg.steady_dlwa
    );
    assert!(
        seg.elapsed_s + unseg.elapsed_s < 300.0,
        "criterion-1 scenario pair exceeded 5 minutes"
    );
    println!("criterion 1: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 2: DLWA is flat across utilization when segregated
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_utilization_flatness() {
    let pairs = util_pairs();
    let seg: Vec<f64> = pairs.iter().map(|(_, s, _)| s.steady_dlwa).collect();
    let unseg: Vec<f64> = pairs.iter().map(|(_, _, u)| u.steady_dlwa).collect();
    let spread = seg.iter().cloned().fold(f64::MIN, f64::max)
        - seg.iter().cloned().fold(f64::MAX, f64::min);
    println!(
        "criterion 2: segregated DLWA across utilizations {seg:.4?} (spread {spread:.4} <= 0.05); \
         unsegregated {unseg:.4?} nondecreasing"
    );
    assert!(spread <= 0.05, "segregated DLWA spread {spread} above 0.05");
    for w in unseg.windows(2) {
        assert!(
            w[1] >= w[0],
            "unsegregated DLWA not nondecreasing: {unseg:?}"
        );
    }
    println!("criterion 2: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 3: DLWA grows with SOC share; segregation stops paying at 90%+
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_soc_size_sweep() {
    let (seg4, _) = util_point(1.0);
    let mut fractions = vec![0.04];
    let mut seg = vec![seg4.steady_dlwa];
    let mut unseg_by_fraction = vec![];
    for (fraction, s, u) in soc_pairs() {
        fractions.push(*fraction);
        seg.push(s.steady_dlwa);
        unseg_by_fraction.push((*fraction, s.steady_dlwa, u.steady_dlwa));
    }
    println!("criterion 3: segregated DLWA over SOC fractions {fractions:?}: {seg:.4?}");
    assert!(seg[0] <= 1.1, "DLWA at 4% SOC is {} (> 1.1)", seg[0]);
    for w in seg.windows(2) {
        assert!(
            w[1] >= w[0],
            "segregated DLWA not nondecreasing over SOC fractions: {seg:?}"
        );
    }
    for (fraction, s, u) in unseg_by_fraction {
        if fraction >= 0.90 {
            let gap = (s - u).abs() / u;
            println!(
                "criterion 3: at SOC {fraction}: segregated {s:.4} vs unsegregated {u:.4} \
                 (gap {:.1}% <= 15%)",
                100.0 * gap
            );
            assert!(
                gap <= 0.15,
                "segregation still changes DLWA by {:.1}% at SOC {fraction}",
                100.0 * gap
            );
        }
    }
    println!("criterion 3: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 4: the closed-form model predicts the simulator
// ---------------------------------------------------------------------------

/// Uniform single-page overwrites over a span of `span_rus` reclaim units on
/// a device with physical capacity `x` times the span. Returns steady-state
/// DLWA measured over three spans after a two-span warm-up.
fn ftl_uniform_dlwa(x: f64, ru_pages: u64, span_rus: u64, seed: u64) -> f64 {
    let span_pages = span_rus * ru_pages;
    let cfg = DeviceConfig {
        page_size_bytes: 4096,
        ru_size_bytes: ru_pages * 4096,
        usable_capacity_bytes: span_pages * 4096,
        op_fraction: 1.0 - 1.0 / x,
        num_ruhs: 1,
        ruh_type: RuhType::InitiallyIsolated,
        num_rgs: 1,
        fdp_enabled: true,
        gc_trigger_free_rus: 0,
        rng_seed: 0,
    };
    let mut dev = Device::new(cfg).unwrap();
    let pid = Placement::Pid(PlacementIdentifier { rg_id: 0, ruh_id: 0 });
    let mut rng = SplitMix64::new(seed);
    for _ in 0..(2 * span_pages) {
        dev.write(pid, rng.next_range(span_pages), 1).unwrap();
    }
    let base = *dev.counters();
    for _ in 0..(3 * span_pages) {
        dev.write(pid, rng.next_range(span_pages), 1).unwrap();
    }
    let c = dev.counters();
    (c.nand_bytes_written - base.nand_bytes_written) as f64
        / (c.host_bytes_written - base.host_bytes_written) as f64
}

#[test]
fn criterion_4_model_validation() {
    // Uniform workload: simulated steady-state DLWA within 5% of the model.
    // 8192-page reclaim units keep valid-count fluctuations small relative
    // to the mean, which is the continuum regime the model describes (the
    // evaluated hardware holds ~1.5M buckets per reclaim unit).
    for &x in &[1.25, 1.5, 2.0, 5.0] {
        let sim = ftl_uniform_dlwa(x, 8192, 48, 42);
        let model = model::dlwa_estimate(1.0, x).unwrap();
        let err = (sim - model) / model;
        println!(
            "criterion 4: x={x}: sim {sim:.4} vs model {model:.4} (error {:+.2}% within 5%)",
            100.0 * err
        );
        assert!(
            err.abs() <= 0.05,
            "x={x}: simulator {sim} deviates {:.2}% from model {model}",
            100.0 * err
        );
    }

    // Skewed keys at a high SOC share: the model assumes uniformity, so the
    // simulator must come in at or below its prediction.
    let mut cfg = desk_scenario(1.0, 0.5, 32.0);
    cfg.instances[0].prefill_loc = true;
    cfg.instances[0].workload = WorkloadConfig::Synthetic {
        spec: SyntheticSpec {
            num_keys: 16_000_000,
            zipf_alpha: 1.0,
            get_fraction: 0.0,
            small_size_dist: SizeDist::LogUniform { min: 100, max: 2000 },
            large_size_dist: SizeDist::LogUniform { min: 4096, max: 262_144 },
            small_object_op_fraction: 1.0,
            total_ops: u64::MAX,
            seed: 0,
        },
    };
    let outcome = run_scenario(&cfg).unwrap();
    let sim = outcome
        .report
        .device
        .steady_state_dlwa
        .expect("skew run reaches steady state");
    let dev = Device::new(cfg.device.clone()).unwrap();
    let s_soc = outcome.report.instances[0].geometry.soc_bytes as f64;
    let s_op = (dev.physical_bytes() - cfg.device.usable_capacity_bytes) as f64;
    let model = model::dlwa_estimate(s_soc, s_soc + s_op).unwrap();
    println!(
        "criterion 4: zipf(alpha=1) at SOC 50%: sim {sim:.4} <= model {model:.4} \
         (skew lowers observed DLWA)"
    );
    assert!(
        sim <= model,
        "skewed simulation {sim} should not exceed the uniform model {model}"
    );
    println!("criterion 4: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 5: Lambert W and the victim-liveness root
// ---------------------------------------------------------------------------

/// Independent bisection for `ln d = x (d - 1)` on (0, 1).
fn delta_bisect(x: f64) -> f64 {
    let mut lo = 1e-300_f64;
    let mut hi = (1.0_f64 - 1e-12).min(1.0 / x);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.ln() - x * (mid - 1.0) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_5_lambert_w_and_delta() {
    // Round trip over 10^4 samples in [-1, 20].
    let mut rng = SplitMix64::new(0x1a4be1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let w = -1.0 + 21.0 * rng.next_f64();
        let back = model::lambert_w0(w * w.exp()).unwrap();
        worst = worst.max((back - w).abs());
    }
    println!("criterion 5: W0 round-trip worst error {worst:.2e} (<= 1e-9)");
    assert!(worst <= 1e-9);

    // Root residual across the spare-ratio range.
    let mut worst_residual = 0.0f64;
    for i in 1..=100 {
        let x = 1.0 + 0.25 * i as f64;
        let d = model::live_victim_fraction(1.0, x).unwrap();
        worst_residual = worst_residual.max((d.ln() - x * (d - 1.0)).abs());
    }
    println!("criterion 5: delta root residual worst {worst_residual:.2e} (<= 1e-9)");
    assert!(worst_residual <= 1e-9);

    // x = 1.25 against the independent bisection oracle. The oracle puts the
    // root at delta = 0.628630, giving DLWA = 2.6927.
    let oracle = delta_bisect(1.25);
    let d = model::live_victim_fraction(800.0, 1000.0).unwrap();
    println!("criterion 5: delta(x=1.25) {d:.9} vs bisection oracle {oracle:.9}");
    assert!((d - oracle).abs() <= 1e-6);
    let dlwa = model::dlwa_estimate(800.0, 1000.0).unwrap();
    let dlwa_oracle = 1.0 / (1.0 - oracle);
    println!("criterion 5: DLWA(x=1.25) {dlwa:.6} vs oracle {dlwa_oracle:.6} (+- 0.01)");
    assert!((dlwa - dlwa_oracle).abs() <= 0.01);
    println!("criterion 5: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 6: a pure log-structured workload is free
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_sequential_ideal() {
    // All items above the threshold, region size dividing the RU size.
    let mut cfg = desk_scenario(1.0, 0.04, 24.0);
    cfg.instances[0].region_bytes = 2 << 20;
    cfg.instances[0].workload = WorkloadConfig::Synthetic {
        spec: SyntheticSpec {
            num_keys: 200_000,
            zipf_alpha: 0.0,
            get_fraction: 0.0,
            small_size_dist: SizeDist::Fixed { bytes: 1024 },
            large_size_dist: SizeDist::LogUniform { min: 4096, max: 262_144 },
            small_object_op_fraction: 0.0,
            total_ops: u64::MAX,
            seed: 0,
        },
    };
    for segregate in [true, false] {
        let mut c = cfg.clone();
        c.device.fdp_enabled = segregate;
        c.instances[0].segregate = segregate;
        let out = run_scenario(&c).unwrap();
        let counters = &out.report.device.counters;
        let dlwa = out.report.device.dlwa.unwrap();
        println!(
            "criterion 6: LOC-only segregate={segregate}: DLWA {dlwa} relocations {} \
             (host {:.1} GiB)",
            counters.relocation_events,
            counters.host_bytes_written as f64 / GIB as f64
        );
        assert_eq!(counters.relocation_events, 0);
        assert_eq!(counters.relocated_bytes, 0);
        assert_eq!(dlwa, 1.0, "sequential workload must be amplification-free");
    }
    println!("criterion 6: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 7: segregation cuts GC events several-fold
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_gc_event_reduction() {
    let (seg, unseg) = util_point(1.0);
    assert_eq!(
        seg.host_bytes, unseg.host_bytes,
        "event comparison requires equal host bytes"
    );
    let ratio = unseg.relocation_events as f64 / seg.relocation_events.max(1) as f64;
    println!(
        "criterion 7: relocation events unsegregated {} vs segregated {} (ratio {ratio:.2} >= 3)",
        unseg.relocation_events, seg.relocation_events
    );
    assert!(
        ratio >= 3.0,
        "unsegregated GC events only {ratio:.2}x the segregated count"
    );
    println!("criterion 7: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 8: carbon arithmetic
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_carbon_arithmetic() {
    let params = model::CarbonParams {
        dlwa: 3.5,
        device_cap_gb: 1880.0,
        lifecycle_years: 5.0,
        warranty_years: 5.0,
        c_ssd_kg_per_gb: 0.16,
        host_op_fraction: 0.0,
        device_op_fraction: 0.07,
    };
    let kg = model::embodied_co2e(&params);
    println!("criterion 8: embodied_co2e(3.5, 1880 GB, 5y/5y, 0.16) = {kg} kg (= 1052.8)");
    assert_eq!(kg, 3.5 * 1880.0 * (5.0 / 5.0) * 0.16);
    assert!((kg - 1052.8).abs() < 1e-9);

    let mut rng = SplitMix64::new(8);
    for _ in 0..1_000 {
        let dlwa = 1.0 + 9.0 * rng.next_f64();
        let cap = 8000.0 * rng.next_f64();
        let k = 0.1 + 4.0 * rng.next_f64();
        let base = model::embodied_co2e(&model::CarbonParams { dlwa, device_cap_gb: cap, ..params.clone() });
        let via_dlwa = model::embodied_co2e(&model::CarbonParams { dlwa: k * dlwa, device_cap_gb: cap, ..params.clone() });
        let via_cap = model::embodied_co2e(&model::CarbonParams { dlwa, device_cap_gb: k * cap, ..params.clone() });
        assert!((via_dlwa - k * base).abs() <= 1e-9 * base.max(1.0));
        assert!((via_cap - k * base).abs() <= 1e-9 * base.max(1.0));
    }
    println!("criterion 8: linearity in DLWA and capacity holds");
    println!("criterion 8: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 9: multi-tenant sharing keeps DLWA at ~1 with segregation
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_multi_tenant() {
    let usable = desk_device().usable_capacity_bytes;
    let tenant = |lba_base: u64| InstanceConfig {
        dram_bytes: 128 << 20,
        flash_bytes: usable / 2,
        lba_base,
        ..desk_instance(1.0, 0.04)
    };
    let cfg = ScenarioConfig {
        device: desk_device(),
        instances: vec![tenant(0), tenant(usable / 2)],
        run: RunConfig {
            total_host_gib: Some(48.0),
            total_ops: None,
            snapshot_window_bytes: 0,
            seed: 42,
        },
        output: Default::default(),
    };
    let (seg_cfg, unseg_cfg) = segregation_pair(&cfg);
    let seg = run_multi_tenant(&seg_cfg).unwrap();
    let unseg = run_multi_tenant(&unseg_cfg).unwrap();
    let seg_dlwa = seg.report.device.steady_state_dlwa.unwrap();
    let unseg_dlwa = unseg.report.device.steady_state_dlwa.unwrap();
    println!(
        "criterion 9: two tenants: segregated DLWA {seg_dlwa:.4} (<= 1.1), \
         unsegregated {unseg_dlwa:.4} (>= 2.0)"
    );
    // Four isolation handles were available and taken.
    for inst in &seg.report.instances {
        assert!(!inst.handles.degraded);
        assert_ne!(inst.handles.soc, inst.handles.loc);
    }
    assert!(seg_dlwa <= 1.1, "multi-tenant segregated DLWA {seg_dlwa}");
    assert!(unseg_dlwa >= 2.0, "multi-tenant unsegregated DLWA {unseg_dlwa}");
    println!("criterion 9: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism and conservation
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_determinism_and_conservation() {
    // Same config, same seed: byte-identical reports. Conservation and
    // event-log invariants are enforced throughout every acceptance run by
    // the replay driver (aggregate checks every 10^4 requests, full
    // structural verification at run end) — a violation panics the run.
    let cfg = desk_scenario(1.0, 0.04, 16.0);
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(render_report(&a.report, 0), render_report(&b.report, 0));
    assert_eq!(a.intervals, b.intervals);
    assert_eq!(a.events_csv, b.events_csv);
    println!(
        "criterion 10: identical reports for repeated seed-42 runs \
         ({} interval rows, {} event-log bytes)",
        a.intervals.len(),
        a.events_csv.len()
    );
    assert!(cfg!(debug_assertions), "acceptance must run with debug assertions");
    println!("criterion 10: PASS");
}

// ---------------------------------------------------------------------------
// Criterion 11: the engine is byte-equivalent to a naive reference FTL
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_oracle_equivalence() {
    // 62 physical RUs, two handles, 10^5 random single-page writes per seed.
    let cfg = DeviceConfig {
        page_size_bytes: 4096,
        ru_size_bytes: 64 * 4096,
        usable_capacity_bytes: 40 * 64 * 4096,
        op_fraction: 0.35,
        num_ruhs: 2,
        ruh_type: RuhType::InitiallyIsolated,
        num_rgs: 1,
        fdp_enabled: true,
        gc_trigger_free_rus: 0,
        rng_seed: 0,
    };
    for seed in 0..20u64 {
        let mut dev = Device::new(cfg.clone()).unwrap();
        assert!(dev.physical_ru_count() <= 64);
        let mut reference = ReferenceFtl::new(&cfg);
        let mut rng = SplitMix64::new(0xace0 + seed);
        let span = dev.usable_pages();
        for _ in 0..100_000u64 {
            let lba = rng.next_range(span);
            let handle = rng.next_range(2) as u16;
            dev.write(
                Placement::Pid(PlacementIdentifier { rg_id: 0, ruh_id: handle }),
                lba,
                1,
            )
            .unwrap();
            reference.write(handle, lba);
        }
        let c = dev.counters();
        let r = &reference.counters;
        assert_eq!(c.host_bytes_written, r.host_bytes_written, "seed {seed}");
        assert_eq!(c.nand_bytes_written, r.nand_bytes_written, "seed {seed}");
        assert_eq!(c.relocated_bytes, r.relocated_bytes, "seed {seed}");
        assert_eq!(c.relocation_events, r.relocation_events, "seed {seed}");
        assert_eq!(c.gc_victim_count, r.gc_victim_count, "seed {seed}");
        assert_eq!(c.ru_overfill_events, r.ru_overfill_events, "seed {seed}");
        assert_eq!(dev.free_ru_count(), reference.free_rus(), "seed {seed}");
        for lba in 0..span {
            let got = match dev.read(lba).unwrap() {
                PageState::Mapped { ru_id, page_index } => Some((ru_id, page_index)),
                PageState::Unmapped => None,
            };
            assert_eq!(got, reference.read(lba), "seed {seed}: mapping of lba {lba}");
        }
        dev.check_invariants().unwrap();
    }
    println!("criterion 11: engine matches the naive reference FTL on 20 seeds");
    println!("criterion 11: PASS");
}
