//! Monte Carlo parameter sweeps.
//!
//! For every sweep value and run index one scenario is drawn and handed to
//! every selected scheduler, so algorithms are always compared on identical
//! topologies. Runs execute in parallel; aggregation sorts before summing so
//! results do not depend on thread count or completion order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::framing::FrameConfig;
use crate::oracle;
use crate::radio::RadioConfig;
use crate::scenario::{generate_scenario, ScenarioConfig};
use crate::schedulers::{served_count, system_throughput, Algorithm, LinkTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    NumUe,
    AccessSlots,
    BackhaulSlots,
    /// Access transmit power, W.
    PtAccess,
    /// Backhaul transmit power, W.
    PtBackhaul,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::NumUe => "num_ue",
            SweepVariable::AccessSlots => "access_slots",
            SweepVariable::BackhaulSlots => "backhaul_slots",
            SweepVariable::PtAccess => "pt_access",
            SweepVariable::PtBackhaul => "pt_backhaul",
        }
    }

    fn is_count(&self) -> bool {
        matches!(
            self,
            SweepVariable::NumUe | SweepVariable::AccessSlots | SweepVariable::BackhaulSlots
        )
    }

    /// Returns `base` with this variable set to `value`.
    pub fn apply(&self, value: f64, base: &BaseConfig) -> Result<BaseConfig> {
        if self.is_count() && !(value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
            return Err(Error::config(
                "sweep_values",
                format!("{} takes whole numbers, got {value}", self.as_str()),
            ));
        }
        let mut cfg = base.clone();
        match self {
            SweepVariable::NumUe => cfg.scenario.num_ue = value as usize,
            SweepVariable::AccessSlots => cfg.frame.n_access = value as u64,
            SweepVariable::BackhaulSlots => cfg.frame.m_backhaul = value as u64,
            SweepVariable::PtAccess => cfg.radio.pt_access = value,
            SweepVariable::PtBackhaul => cfg.radio.pt_backhaul = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "num_ue" => SweepVariable::NumUe,
            "access_slots" => SweepVariable::AccessSlots,
            "backhaul_slots" => SweepVariable::BackhaulSlots,
            "pt_access" => SweepVariable::PtAccess,
            "pt_backhaul" => SweepVariable::PtBackhaul,
            other => {
                return Err(Error::config(
                    "sweep_variable",
                    format!("unknown sweep variable `{other}`"),
                ))
            }
        })
    }
}

/// Scenario, radio and frame parameters shared by every run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BaseConfig {
    pub scenario: ScenarioConfig,
    pub radio: RadioConfig,
    pub frame: FrameConfig,
}

impl BaseConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.radio.validate()?;
        self.frame.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub runs_per_point: u32,
    pub base: BaseConfig,
    pub algorithms: Vec<Algorithm>,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sweep_values.is_empty() {
            return Err(Error::config("sweep_values", "at least one sweep value is required"));
        }
        if self.sweep_values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config("sweep_values", "values must be strictly increasing"));
        }
        if self.runs_per_point == 0 {
            return Err(Error::config(
                "runs_per_point",
                "at least one run per point is required",
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "at least one algorithm is required"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "thread count must be positive"));
        }
        for &v in &self.sweep_values {
            self.sweep_variable.apply(v, &self.base)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub algorithm: Algorithm,
    pub sweep_variable: SweepVariable,
    pub sweep_value: f64,
    pub runs: u32,
    pub mean_served: f64,
    pub std_served: f64,
    /// bit/s
    pub mean_throughput: f64,
    /// bit/s
    pub std_throughput: f64,
}

/// Outcome of one scheduler on one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSample {
    pub algorithm: Algorithm,
    pub sweep_value: f64,
    pub run: u32,
    pub scenario_seed: u64,
    pub served: usize,
    pub throughput: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Scenario seed of run `run` at `sweep_value`.
pub fn scenario_seed(master_seed: u64, sweep_value: f64, run: u32) -> u64 {
    master_seed ^ splitmix64(sweep_value.to_bits() ^ splitmix64(u64::from(run)))
}

/// Seed for the random baseline, derived from the scenario seed.
pub fn riab_seed(scenario_seed: u64) -> u64 {
    splitmix64(scenario_seed ^ 0x5249_4142)
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("threads", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Runs every (sweep value, run) pair and returns one sample per algorithm,
/// ordered by sweep value, run and then the order of `config.algorithms`.
pub fn collect_samples(config: &ExperimentConfig) -> Result<Vec<RunSample>> {
    config.validate()?;
    let jobs: Vec<(f64, u32)> = config
        .sweep_values
        .iter()
        .flat_map(|&v| (0..config.runs_per_point).map(move |r| (v, r)))
        .collect();

    let per_job: Vec<Result<Vec<RunSample>>> = in_pool(config.threads, || {
        jobs.par_iter()
            .map(|&(value, run)| {
                let mut base = config.sweep_variable.apply(value, &config.base)?;
                let seed = scenario_seed(config.master_seed, value, run);
                base.scenario.seed = seed;
                let scenario = generate_scenario(&base.scenario)?;
                let table = LinkTable::new(&scenario, &base.radio, &base.frame)?;
                config
                    .algorithms
                    .iter()
                    .map(|&algorithm| {
                        let result = algorithm.schedule_links(&table, &base.frame, riab_seed(seed))?;
                        Ok(RunSample {
                            algorithm,
                            sweep_value: value,
                            run,
                            scenario_seed: seed,
                            served: served_count(&result),
                            throughput: system_throughput(&result),
                        })
                    })
                    .collect()
            })
            .collect()
    })?;

    let mut samples = Vec::with_capacity(jobs.len() * config.algorithms.len());
    for job in per_job {
        samples.extend(job?);
    }
    Ok(samples)
}

/// Mean and sample standard deviation, summed in sorted order.
fn mean_std(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    sq.sort_by(f64::total_cmp);
    (mean, (sq.iter().sum::<f64>() / (n - 1.0)).sqrt())
}

/// Aggregates samples into one record per (algorithm, sweep value), ordered
/// by algorithm and then sweep value.
pub fn aggregate(sweep_variable: SweepVariable, samples: &[RunSample]) -> Vec<MetricsRecord> {
    let mut keys: Vec<(Algorithm, f64)> = samples.iter().map(|s| (s.algorithm, s.sweep_value)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();

    keys.into_iter()
        .map(|(algorithm, value)| {
            let group: Vec<&RunSample> = samples
                .iter()
                .filter(|s| s.algorithm == algorithm && s.sweep_value == value)
                .collect();
            let mut served: Vec<f64> = group.iter().map(|s| s.served as f64).collect();
            let mut thr: Vec<f64> = group.iter().map(|s| s.throughput).collect();
            let (mean_served, std_served) = mean_std(&mut served);
            let (mean_throughput, std_throughput) = mean_std(&mut thr);
            MetricsRecord {
                algorithm,
                sweep_variable,
                sweep_value: value,
                runs: group.len() as u32,
                mean_served,
                std_served,
                mean_throughput,
                std_throughput,
            }
        })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<MetricsRecord>> {
    let samples = collect_samples(config)?;
    Ok(aggregate(config.sweep_variable, &samples))
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 10] = [
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12",
];

/// Full-scale sweep presets. Figures come in pairs (served UEs, system
/// throughput) that share one experiment.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let base = BaseConfig::default();
    let slots = vec![500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0];
    let (sweep_variable, sweep_values, base) = match name {
        "fig3" | "fig4" => (SweepVariable::NumUe, vec![100.0, 200.0, 300.0, 400.0, 500.0], base),
        "fig5" | "fig6" => (SweepVariable::AccessSlots, slots, base),
        "fig7" | "fig8" => (SweepVariable::BackhaulSlots, slots, base),
        "fig9" | "fig10" => {
            let mut b = base;
            b.frame.n_access = 3000;
            b.frame.m_backhaul = 2000;
            (SweepVariable::PtAccess, vec![0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4], b)
        }
        "fig11" | "fig12" => {
            let mut b = base;
            b.radio.pt_access = 0.8;
            b.frame.n_access = 3000;
            b.frame.m_backhaul = 1500;
            (SweepVariable::PtBackhaul, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0], b)
        }
        _ => return None,
    };
    Some(ExperimentConfig {
        sweep_variable,
        sweep_values,
        runs_per_point: 50,
        base,
        algorithms: Algorithm::ALL.to_vec(),
        master_seed: 2023,
        threads: None,
    })
}

/// Tiny instances for exact comparison: 2 SBSs, 6 UEs, 20 access and 5
/// backhaul slots.
pub fn tiny_base() -> BaseConfig {
    let mut b = BaseConfig::default();
    b.scenario.num_sbs = 2;
    b.scenario.num_ue = 6;
    b.frame.n_access = 20;
    b.frame.m_backhaul = 5;
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleRow {
    pub instance: u32,
    pub seed: u64,
    pub optimum: usize,
    pub mqr: usize,
    pub msnr: usize,
    pub riab: usize,
    pub explored: u64,
}

impl OracleRow {
    pub fn dominated(&self) -> bool {
        self.mqr <= self.optimum && self.msnr <= self.optimum && self.riab <= self.optimum
    }
}

/// Solves `instances` random instances exactly and runs every heuristic on
/// each. Instance `i` uses scenario seed `seed + i`.
pub fn oracle_check(base: &BaseConfig, instances: u32, seed: u64) -> Result<Vec<OracleRow>> {
    base.validate()?;
    (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut cfg = base.scenario.clone();
            cfg.seed = seed.wrapping_add(u64::from(i));
            let scenario = generate_scenario(&cfg)?;
            let table = LinkTable::new(&scenario, &base.radio, &base.frame)?;
            let exact = oracle::exact_max_served_links(&table, &base.frame)?;
            let run = |a: Algorithm| -> Result<usize> {
                Ok(served_count(&a.schedule_links(
                    &table,
                    &base.frame,
                    riab_seed(cfg.seed),
                )?))
            };
            Ok(OracleRow {
                instance: i,
                seed: cfg.seed,
                optimum: exact.optimum,
                mqr: run(Algorithm::Mqr)?,
                msnr: run(Algorithm::Msnr)?,
                riab: run(Algorithm::Riab)?,
                explored: exact.explored,
            })
        })
        .collect()
}
