//! Closed-form models: steady-state DLWA of a segregated small-object cache
//! under greedy garbage collection, and the carbon estimators built on top.
//!
//! The DLWA model reduces to a single transcendental root: the average
//! fraction `delta` of still-valid buckets in a GC victim satisfies
//! `ln(delta) = x * (delta - 1)` with `x = s_p_soc / s_soc`, solved on the
//! principal branch of the Lambert W function. DLWA is then `1 / (1 - delta)`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("argument {0} is below -1/e, outside the W0 domain")]
    OutsideW0Domain(f64),
    #[error(
        "physical SOC space ({s_p_soc}) must exceed logical SOC space ({s_soc}); \
         with no spare space DLWA is unbounded"
    )]
    NoSpareSpace { s_soc: f64, s_p_soc: f64 },
}

const NEG_INV_E: f64 = -0.367_879_441_171_442_33;

/// Principal branch of the Lambert W function: the `w >= -1` solution of
/// `w * exp(w) = z`, for `z >= -1/e`.
///
/// A bracketing bisection supplies the starting point and Halley iteration
/// refines it; the residual satisfies `|w*e^w - z| <= 1e-12 * max(1, |z|)`.
pub fn lambert_w0(z: f64) -> Result<f64, ModelError> {
    if !z.is_finite() || z < NEG_INV_E - 1e-12 {
        return Err(ModelError::OutsideW0Domain(z));
    }
    if z <= NEG_INV_E + 1e-15 {
        return Ok(-1.0);
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    // f(w) = w*e^w - z is strictly increasing on [-1, inf).
    let mut lo = -1.0_f64;
    let mut hi = if z < 0.0 {
        0.0
    } else {
        let mut h = 1.0_f64;
        while h * h.exp() < z {
            h *= 2.0;
        }
        h
    };

    let tol = 1e-13 * z.abs().max(1.0);
    for _ in 0..24 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > z {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mut w = 0.5 * (lo + hi);
    // Halley steps degenerate near the branch point (the denominator carries
    // a factor w+1), so fall back to plain bisection there.
    if w > -0.99 {
        for _ in 0..20 {
            let ew = w.exp();
            let f = w * ew - z;
            if f.abs() <= tol {
                return Ok(w);
            }
            let d1 = ew * (w + 1.0);
            let denom = d1 - (w + 2.0) * f / (2.0 * w + 2.0);
            let step = if denom != 0.0 { f / denom } else { f / d1 };
            let next = w - step;
            if !next.is_finite() || next < -1.0 {
                break;
            }
            w = next;
        }
    }
    for _ in 0..80 {
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > z {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Average fraction of still-valid buckets in a greedy-GC victim, for a
/// uniform-random bucket rewrite workload over `s_soc` logical bytes cycling
/// through `s_p_soc` physical bytes.
///
/// Solves `ln(delta) = x * (delta - 1)` on `(0, 1)` via
/// `delta = -(1/x) * W0(-x * exp(-x))` with `x = s_p_soc / s_soc`.
pub fn live_victim_fraction(s_soc: f64, s_p_soc: f64) -> Result<f64, ModelError> {
    if !(s_soc > 0.0) || !(s_p_soc > s_soc) {
        return Err(ModelError::NoSpareSpace { s_soc, s_p_soc });
    }
    let x = s_p_soc / s_soc;
    // For large x the argument underflows to -0.0 and W0 correctly gives 0.
    let w = lambert_w0(-x * (-x).exp())?;
    let delta = -w / x;
    debug_assert!(
        delta < 1.0 && (delta > 0.0 || x > 30.0),
        "delta {delta} out of range for x {x}"
    );
    Ok(delta)
}

/// Steady-state device-level write amplification of a fully segregated
/// small-object cache: `1 / (1 - delta)`. The log-structured large-object
/// engine contributes no relocations, so this is also the whole-cache DLWA
/// under segregation.
pub fn dlwa_estimate(s_soc: f64, s_p_soc: f64) -> Result<f64, ModelError> {
    let delta = live_victim_fraction(s_soc, s_p_soc)?;
    Ok(1.0 / (1.0 - delta))
}

/// Full set of system variables for the DLWA model. Only `s_soc` and
/// `s_p_soc` enter the formula; the rest document the geometry a given
/// estimate was derived from and are echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    /// SOC logical bytes.
    pub s_soc: f64,
    /// Bucket size in bytes.
    pub s_bucket: f64,
    /// Physical bytes available to SOC data, including device OP.
    pub s_p_soc: f64,
    /// Total physical bytes.
    pub s_total: f64,
    /// Exposed (usable) bytes.
    pub s_usable: f64,
    /// Device overprovisioning bytes.
    pub s_op: f64,
    /// LOC logical bytes.
    pub s_loc: f64,
    /// Physical bytes available to LOC data (equal to `s_loc`: the LOC needs
    /// no spare space).
    pub s_p_loc: f64,
    /// Logical bytes of the whole flash cache.
    pub s_nvm: f64,
    /// Number of SOC buckets.
    pub n_b: f64,
    /// Buckets per GC block (reclaim unit).
    pub n_bb: f64,
}

impl ModelParams {
    /// Derive the model variables from device and cache geometry, assuming no
    /// host overprovisioning (the whole usable space backs the cache).
    pub fn from_geometry(
        s_usable: f64,
        s_total: f64,
        s_soc: f64,
        s_bucket: f64,
        gc_block_bytes: f64,
    ) -> Self {
        let s_op = s_total - s_usable;
        let s_nvm = s_usable;
        let s_loc = s_nvm - s_soc;
        Self {
            s_soc,
            s_bucket,
            s_p_soc: s_soc + s_op,
            s_total,
            s_usable,
            s_op,
            s_loc,
            s_p_loc: s_loc,
            s_nvm,
            n_b: s_soc / s_bucket,
            n_bb: gc_block_bytes / s_bucket,
        }
    }

    pub fn live_victim_fraction(&self) -> Result<f64, ModelError> {
        live_victim_fraction(self.s_soc, self.s_p_soc)
    }

    pub fn dlwa(&self) -> Result<f64, ModelError> {
        dlwa_estimate(self.s_soc, self.s_p_soc)
    }
}

/// Inputs of the embodied-carbon estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarbonParams {
    pub dlwa: f64,
    /// Physical device capacity in GB.
    pub device_cap_gb: f64,
    /// System lifecycle in years.
    pub lifecycle_years: f64,
    /// Rated SSD warranty in years.
    pub warranty_years: f64,
    /// kg CO2e per GB of SSD manufactured.
    pub c_ssd_kg_per_gb: f64,
    /// Host overprovisioning fraction, in [0, 1).
    pub host_op_fraction: f64,
    /// Device overprovisioning fraction, in [0, 1).
    pub device_op_fraction: f64,
}

/// Embodied CO2e (kg) of SSD replacements over the system lifecycle:
/// `dlwa * device_cap * (lifecycle / warranty) * c_ssd`. Write amplification
/// shortens device life proportionally, so it multiplies the replacement
/// count directly.
pub fn embodied_co2e(p: &CarbonParams) -> f64 {
    p.dlwa * p.device_cap_gb * (p.lifecycle_years / p.warranty_years) * p.c_ssd_kg_per_gb
}

/// Capacity the host actually uses once host and device overprovisioning are
/// taken out.
pub fn host_capacity_gb(p: &CarbonParams) -> f64 {
    let total_op = p.host_op_fraction + p.device_op_fraction;
    p.device_cap_gb * (1.0 - total_op)
}

/// Unitless operational-energy proxy: active time is proportional to the
/// total number of device operations, i.e. host operations plus GC
/// migrations. No physical constant is applied; compare runs at equal
/// `host_ops`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GcEnergyProxy {
    pub host_ops: u64,
    pub device_migrations: u64,
    pub total: u64,
}

pub fn gc_energy_proxy(host_ops: u64, device_migrations: u64) -> GcEnergyProxy {
    GcEnergyProxy {
        host_ops,
        device_migrations,
        total: host_ops + device_migrations,
    }
}
