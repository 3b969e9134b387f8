//! Parameter sweeps and model-vs-simulation comparison tables.

use serde::Serialize;

use crate::model;
use crate::workload::SyntheticSpec;

use super::runner::run_scenario;
use super::{ScenarioConfig, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepDimension {
    /// Fraction of the device's usable capacity the cache occupies.
    Utilization,
    /// SOC share of the instance's flash partition.
    SocFraction,
}

impl std::str::FromStr for SweepDimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "utilization" => Ok(SweepDimension::Utilization),
            "soc_fraction" => Ok(SweepDimension::SocFraction),
            other => Err(format!(
                "unknown sweep dimension {other:?} (expected utilization or soc_fraction)"
            )),
        }
    }
}

/// One sweep point, run twice: FDP segregation on, then off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub dlwa_fdp: f64,
    pub dlwa_nonfdp: f64,
    pub nvm_hit_ratio: f64,
    pub alwa: f64,
    pub relocation_events_fdp: u64,
    pub relocation_events_nonfdp: u64,
}

fn steady_dlwa(report: &super::runner::RunReport) -> f64 {
    report
        .device
        .steady_state_dlwa
        .or(report.device.dlwa)
        .unwrap_or(1.0)
}

fn configure_point(
    base: &ScenarioConfig,
    dim: SweepDimension,
    value: f64,
) -> Result<ScenarioConfig, ScenarioError> {
    if base.instances.len() != 1 {
        return Err(ScenarioError::Config(
            "sweeps require a single-instance scenario".into(),
        ));
    }
    let mut cfg = base.clone();
    let inst = &mut cfg.instances[0];
    match dim {
        SweepDimension::Utilization => {
            if !(value > 0.0 && value <= 1.0) {
                return Err(ScenarioError::Config(format!(
                    "utilization {value} outside (0, 1]"
                )));
            }
            let page = cfg.device.page_size_bytes;
            let bytes = (cfg.device.usable_capacity_bytes as f64 * value) as u64;
            inst.flash_bytes = (bytes / page) * page;
            inst.lba_base = 0;
        }
        SweepDimension::SocFraction => {
            if !(value > 0.0 && value < 1.0) {
                return Err(ScenarioError::Config(format!(
                    "soc_fraction {value} outside (0, 1)"
                )));
            }
            inst.soc_fraction = value;
        }
    }
    Ok(cfg)
}

/// Derive the segregated / unsegregated pair for one point. The unsegregated
/// baseline disables FDP on the device and drops handle separation in the
/// cache, mirroring a conventional SSD deployment.
pub fn segregation_pair(cfg: &ScenarioConfig) -> (ScenarioConfig, ScenarioConfig) {
    let mut fdp = cfg.clone();
    fdp.device.fdp_enabled = true;
    for inst in &mut fdp.instances {
        inst.segregate = true;
    }
    let mut nonfdp = cfg.clone();
    nonfdp.device.fdp_enabled = false;
    for inst in &mut nonfdp.instances {
        inst.segregate = false;
    }
    (fdp, nonfdp)
}

/// Run `base` across `values` of `dim`; every point runs twice (segregation
/// on/off) under the same seed.
pub fn sweep(
    base: &ScenarioConfig,
    dim: SweepDimension,
    values: &[f64],
) -> Result<Vec<SweepRow>, ScenarioError> {
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let point = configure_point(base, dim, value)?;
        let (fdp_cfg, nonfdp_cfg) = segregation_pair(&point);
        let fdp = run_scenario(&fdp_cfg)?;
        let nonfdp = run_scenario(&nonfdp_cfg)?;

        // Segregation must be invisible to cache-level metrics.
        debug_assert_eq!(
            fdp.report.instances[0].metrics, nonfdp.report.instances[0].metrics,
            "segregation neutrality violated at {dim:?}={value}"
        );

        rows.push(SweepRow {
            value,
            dlwa_fdp: steady_dlwa(&fdp.report),
            dlwa_nonfdp: steady_dlwa(&nonfdp.report),
            nvm_hit_ratio: fdp.report.instances[0].nvm_hit_ratio,
            alwa: fdp.report.instances[0].alwa.unwrap_or(0.0),
            relocation_events_fdp: fdp.report.device.counters.relocation_events,
            relocation_events_nonfdp: nonfdp.report.device.counters.relocation_events,
        });
    }
    Ok(rows)
}

pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "value,dlwa_fdp,dlwa_nonfdp,nvm_hit_ratio,alwa,relocation_events_fdp,relocation_events_nonfdp\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{:.6},{:.6},{:.6},{:.6},{:.6},{},{}\n",
            r.value,
            r.dlwa_fdp,
            r.dlwa_nonfdp,
            r.nvm_hit_ratio,
            r.alwa,
            r.relocation_events_fdp,
            r.relocation_events_nonfdp
        ));
    }
    out
}

/// One row of the model-validation table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub soc_fraction: f64,
    pub s_soc_bytes: u64,
    pub s_p_soc_bytes: u64,
    pub dlwa_sim: f64,
    pub dlwa_model: f64,
    pub relative_error: f64,
    pub excluded: bool,
    pub reason: String,
}

fn is_uniform_set_only(spec: &SyntheticSpec) -> bool {
    spec.zipf_alpha == 0.0 && spec.get_fraction == 0.0 && spec.small_object_op_fraction >= 1.0
}

/// Replicate the cache's SOC sizing rule without building the cache.
fn derived_soc_bytes(flash_bytes: u64, soc_fraction: f64, bucket_bytes: u64) -> u64 {
    let buckets =
        ((soc_fraction * flash_bytes as f64 / bucket_bytes as f64).round() as u64).max(1);
    buckets * bucket_bytes
}

/// Run the simulator against the closed-form DLWA estimate across SOC
/// fractions. Requires a uniform SET-only small-object workload — the
/// regime the model is built for. The LOC ring is prefilled so device spare
/// space serves the SOC alone.
pub fn compare_model_sim(
    base: &ScenarioConfig,
    soc_fractions: &[f64],
) -> Result<Vec<CompareRow>, ScenarioError> {
    if base.instances.len() != 1 {
        return Err(ScenarioError::Config(
            "compare requires a single-instance scenario".into(),
        ));
    }
    let spec = base.instances[0]
        .workload
        .synthetic_spec()?
        .ok_or_else(|| {
            ScenarioError::Config("compare requires a synthetic workload".into())
        })?;
    if !is_uniform_set_only(&spec) {
        return Err(ScenarioError::Config(
            "compare requires a uniform (zipf_alpha=0) SET-only small-object-only profile"
                .into(),
        ));
    }

    let physical_bytes = physical_bytes_for(&base.device)?;
    let s_op = physical_bytes.saturating_sub(base.device.usable_capacity_bytes);

    let mut rows = Vec::with_capacity(soc_fractions.len());
    for &fraction in soc_fractions {
        let mut cfg = configure_point(base, SweepDimension::SocFraction, fraction)?;
        cfg.device.fdp_enabled = true;
        cfg.instances[0].segregate = true;
        cfg.instances[0].prefill_loc = true;

        let s_soc = derived_soc_bytes(
            cfg.instances[0].flash_bytes,
            fraction,
            cfg.instances[0].bucket_bytes,
        );
        let s_p_soc = s_soc + s_op;
        if s_op == 0 {
            rows.push(CompareRow {
                soc_fraction: fraction,
                s_soc_bytes: s_soc,
                s_p_soc_bytes: s_p_soc,
                dlwa_sim: 0.0,
                dlwa_model: 0.0,
                relative_error: 0.0,
                excluded: true,
                reason: "model domain requires s_p_soc > s_soc (no device OP)".into(),
            });
            continue;
        }

        let dlwa_model = model::dlwa_estimate(s_soc as f64, s_p_soc as f64)?;
        let outcome = run_scenario(&cfg)?;
        let dlwa_sim = steady_dlwa(&outcome.report);
        rows.push(CompareRow {
            soc_fraction: fraction,
            s_soc_bytes: s_soc,
            s_p_soc_bytes: s_p_soc,
            dlwa_sim,
            dlwa_model,
            relative_error: (dlwa_sim - dlwa_model) / dlwa_model,
            excluded: false,
            reason: String::new(),
        });
    }
    Ok(rows)
}

/// Physical capacity the device will round up to, without building it.
fn physical_bytes_for(cfg: &crate::ftl::DeviceConfig) -> Result<u64, ScenarioError> {
    let dev = crate::ftl::Device::new(cfg.clone())?;
    Ok(dev.physical_bytes())
}

pub fn write_compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(
        "soc_fraction,s_soc_bytes,s_p_soc_bytes,dlwa_sim,dlwa_model,relative_error,excluded,reason\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{:.6},{},{},{:.6},{:.6},{:.6},{},{}\n",
            r.soc_fraction,
            r.s_soc_bytes,
            r.s_p_soc_bytes,
            r.dlwa_sim,
            r.dlwa_model,
            r.relative_error,
            r.excluded,
            r.reason
        ));
    }
    out
}
