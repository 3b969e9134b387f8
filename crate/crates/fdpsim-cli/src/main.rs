//! `fdpsim` — run hybrid-cache SSD simulations from scenario configs and
//! emit plot-ready reports.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fdpsim::model;
use fdpsim::scenario::{
    compare_model_sim, run_multi_tenant, run_scenario, sweep, write_compare_csv, write_outputs,
    write_sweep_csv, RunOutcome, ScenarioConfig, SweepDimension,
};

#[derive(Parser)]
#[command(name = "fdpsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write report.json / intervals.csv / events.csv.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Sweep utilization or SOC fraction; each point runs with and without
    /// FDP segregation.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        dim: SweepDimensionArg,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate the closed-form DLWA model for one geometry.
    Model {
        #[arg(long)]
        s_soc: u64,
        #[arg(long)]
        s_p_soc: u64,
    },
    /// Compare simulated DLWA against the model across SOC fractions.
    Compare {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        soc_fractions: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a multi-tenant scenario (several instances sharing the device).
    MultiTenant {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SweepDimensionArg {
    Utilization,
    #[value(name = "soc_fraction", alias = "soc-fraction")]
    SocFraction,
}

impl From<SweepDimensionArg> for SweepDimension {
    fn from(v: SweepDimensionArg) -> Self {
        match v {
            SweepDimensionArg::Utilization => SweepDimension::Utilization,
            SweepDimensionArg::SocFraction => SweepDimension::SocFraction,
        }
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut cfg = ScenarioConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.run.seed = s;
    }
    Ok(cfg)
}

fn out_dir(cfg: &ScenarioConfig, flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn print_outcome(outcome: &RunOutcome) {
    let d = &outcome.report.device;
    println!(
        "host {:.3} GiB, nand {:.3} GiB",
        d.counters.host_bytes_written as f64 / (1u64 << 30) as f64,
        d.counters.nand_bytes_written as f64 / (1u64 << 30) as f64
    );
    match d.dlwa {
        Some(v) => println!("cumulative DLWA {v:.4}"),
        None => println!("cumulative DLWA undefined (no host writes)"),
    }
    match d.steady_state_dlwa {
        Some(v) => println!("steady-state DLWA {v:.4}"),
        None => println!("steady-state DLWA unavailable"),
    }
    println!(
        "relocation events {}, gc victims {}, relocated {:.3} GiB",
        d.counters.relocation_events,
        d.counters.gc_victim_count,
        d.counters.relocated_bytes as f64 / (1u64 << 30) as f64
    );
    for inst in &outcome.report.instances {
        println!(
            "instance {}: soc={} loc={}{} alwa={} nvm_hit_ratio={:.4}",
            inst.index,
            inst.handles.soc,
            inst.handles.loc,
            if inst.handles.degraded {
                " (degraded to default)"
            } else {
                ""
            },
            inst.alwa
                .map(|a| format!("{a:.3}"))
                .unwrap_or_else(|| "n/a".into()),
            inst.nvm_hit_ratio
        );
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            out_dir: dir,
        } => {
            let cfg = load_config(&config, seed)?;
            let outcome = run_scenario(&cfg)?;
            let dir = out_dir(&cfg, dir);
            let paths = write_outputs(&outcome, &dir)?;
            print_outcome(&outcome);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Sweep {
            config,
            dim,
            values,
            seed,
            out_dir: dir,
        } => {
            let cfg = load_config(&config, seed)?;
            if values.is_empty() {
                bail!("--values must list at least one point");
            }
            let rows = sweep(&cfg, dim.into(), &values)?;
            let dir = out_dir(&cfg, dir);
            fs::create_dir_all(&dir)?;
            let path = dir.join("sweep.csv");
            fs::write(&path, write_sweep_csv(&rows))?;
            for r in &rows {
                println!(
                    "value {:.4}: dlwa fdp {:.4} vs non-fdp {:.4} (relocation events {} vs {})",
                    r.value,
                    r.dlwa_fdp,
                    r.dlwa_nonfdp,
                    r.relocation_events_fdp,
                    r.relocation_events_nonfdp
                );
            }
            println!("wrote {}", path.display());
        }
        Command::Model { s_soc, s_p_soc } => {
            let delta = model::live_victim_fraction(s_soc as f64, s_p_soc as f64)?;
            let dlwa = model::dlwa_estimate(s_soc as f64, s_p_soc as f64)?;
            println!("s_soc {s_soc} bytes, s_p_soc {s_p_soc} bytes");
            println!("spare ratio x = {:.6}", s_p_soc as f64 / s_soc as f64);
            println!("delta (avg live fraction in GC victim) = {delta:.6}");
            println!("model DLWA = {dlwa:.6}");
        }
        Command::Compare {
            config,
            soc_fractions,
            seed,
            out_dir: dir,
        } => {
            let cfg = load_config(&config, seed)?;
            let rows = compare_model_sim(&cfg, &soc_fractions)?;
            let dir = out_dir(&cfg, dir);
            fs::create_dir_all(&dir)?;
            let path = dir.join("compare.csv");
            fs::write(&path, write_compare_csv(&rows))?;
            for r in &rows {
                if r.excluded {
                    println!("soc_fraction {:.4}: excluded ({})", r.soc_fraction, r.reason);
                } else {
                    println!(
                        "soc_fraction {:.4}: sim {:.4} model {:.4} (error {:+.2}%)",
                        r.soc_fraction,
                        r.dlwa_sim,
                        r.dlwa_model,
                        100.0 * r.relative_error
                    );
                }
            }
            println!("wrote {}", path.display());
        }
        Command::MultiTenant {
            config,
            seed,
            out_dir: dir,
        } => {
            let cfg = load_config(&config, seed)?;
            if cfg.instances.len() < 2 {
                eprintln!(
                    "note: multi-tenant scenario has {} instance(s); running anyway",
                    cfg.instances.len()
                );
            }
            let outcome = run_multi_tenant(&cfg)?;
            let dir = out_dir(&cfg, dir);
            let paths = write_outputs(&outcome, &dir)?;
            print_outcome(&outcome);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}
