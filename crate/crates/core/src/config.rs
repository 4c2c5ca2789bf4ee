//! TOML configuration file.
//!
//! Every key is optional and falls back to the defaults of the underlying
//! config type. Units are part of the key names. Unknown keys are rejected.
//!
//! ```toml
//! [scenario]
//! area_width_m = 100.0
//! area_height_m = 100.0
//! num_sbs = 8
//! num_ue = 500
//! qos_min_bps = 2e9
//! qos_max_bps = 5e9
//! seed = 1
//!
//! [radio]
//! pt_access_watts = 1.0
//! pt_backhaul_watts = 1.0
//! bw_access_hz = 2e9
//! bw_backhaul_hz = 20e9
//! f_access_hz = 63e9
//! f_backhaul_hz = 310e9
//! noise_psd_dbm_per_mhz = -134.0
//! path_loss_exponent = 2.0
//! efficiency = 0.9
//! absorption_per_m = 0.0033
//! mmwave_theta_3db_deg = 30.0
//! thz_gmax_dbi = 47.0
//! thz_d_over_lambda = 152.0
//!
//! [frame]
//! scheduling_phase_s = 850e-6
//! slot_s = 18e-6
//! access_slots = 2000
//! backhaul_slots = 2000
//!
//! [experiment]
//! preset = "fig3"            # optional starting point
//! sweep_variable = "num_ue"  # num_ue | access_slots | backhaul_slots | pt_access | pt_backhaul
//! sweep_values = [100, 200, 300, 400, 500]
//! runs_per_point = 50
//! algorithms = ["mqr", "msnr", "riab"]
//! master_seed = 2023
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::framing::FrameConfig;
use crate::harness::{self, BaseConfig, ExperimentConfig};
use crate::radio::{dbm_per_mhz_to_watts_per_hz, RadioConfig};
use crate::scenario::ScenarioConfig;
use crate::schedulers::Algorithm;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub frame: FrameSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub area_width_m: Option<f64>,
    pub area_height_m: Option<f64>,
    pub num_sbs: Option<usize>,
    pub num_ue: Option<usize>,
    pub qos_min_bps: Option<f64>,
    pub qos_max_bps: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub pt_access_watts: Option<f64>,
    pub pt_backhaul_watts: Option<f64>,
    pub bw_access_hz: Option<f64>,
    pub bw_backhaul_hz: Option<f64>,
    pub f_access_hz: Option<f64>,
    pub f_backhaul_hz: Option<f64>,
    pub noise_psd_dbm_per_mhz: Option<f64>,
    pub path_loss_exponent: Option<f64>,
    pub efficiency: Option<f64>,
    pub absorption_per_m: Option<f64>,
    pub mmwave_theta_3db_deg: Option<f64>,
    pub thz_gmax_dbi: Option<f64>,
    pub thz_d_over_lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub scheduling_phase_s: Option<f64>,
    pub slot_s: Option<f64>,
    pub access_slots: Option<u64>,
    pub backhaul_slots: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub preset: Option<String>,
    pub sweep_variable: Option<String>,
    pub sweep_values: Option<Vec<f64>>,
    pub runs_per_point: Option<u32>,
    pub algorithms: Option<Vec<String>>,
    pub master_seed: Option<u64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies the scenario, radio and frame sections on top of `base`.
    pub fn apply_base(&self, base: &BaseConfig) -> Result<BaseConfig> {
        let mut out = base.clone();
        let s = &self.scenario;
        let sc = &mut out.scenario;
        set(&mut sc.area_width, s.area_width_m);
        set(&mut sc.area_height, s.area_height_m);
        set(&mut sc.num_sbs, s.num_sbs);
        set(&mut sc.num_ue, s.num_ue);
        set(&mut sc.qos_min, s.qos_min_bps);
        set(&mut sc.qos_max, s.qos_max_bps);
        set(&mut sc.seed, s.seed);

        let r = &self.radio;
        let rc = &mut out.radio;
        set(&mut rc.pt_access, r.pt_access_watts);
        set(&mut rc.pt_backhaul, r.pt_backhaul_watts);
        set(&mut rc.bw_access, r.bw_access_hz);
        set(&mut rc.bw_backhaul, r.bw_backhaul_hz);
        set(&mut rc.f_access, r.f_access_hz);
        set(&mut rc.f_backhaul, r.f_backhaul_hz);
        set(
            &mut rc.noise_psd,
            r.noise_psd_dbm_per_mhz.map(dbm_per_mhz_to_watts_per_hz),
        );
        set(&mut rc.alpha, r.path_loss_exponent);
        set(&mut rc.eta, r.efficiency);
        set(&mut rc.k_abs, r.absorption_per_m);
        set(&mut rc.mmwave_ant.theta_3db, r.mmwave_theta_3db_deg);
        set(&mut rc.thz_ant.g_max, r.thz_gmax_dbi);
        set(&mut rc.thz_ant.d_over_lambda, r.thz_d_over_lambda);

        let f = &self.frame;
        let fc = &mut out.frame;
        set(&mut fc.t_s, f.scheduling_phase_s);
        set(&mut fc.delta, f.slot_s);
        set(&mut fc.n_access, f.access_slots);
        set(&mut fc.m_backhaul, f.backhaul_slots);

        out.validate()?;
        Ok(out)
    }

    pub fn scenario_config(&self) -> Result<ScenarioConfig> {
        Ok(self.apply_base(&BaseConfig::default())?.scenario)
    }

    pub fn radio_config(&self) -> Result<RadioConfig> {
        Ok(self.apply_base(&BaseConfig::default())?.radio)
    }

    pub fn frame_config(&self) -> Result<FrameConfig> {
        Ok(self.apply_base(&BaseConfig::default())?.frame)
    }

    /// Builds an experiment. The starting point is the `preset` key if set,
    /// else `fallback`, else the `fig3` sweep; the file's base
    /// sections and experiment keys are then layered on top.
    pub fn experiment_config(&self, fallback: Option<ExperimentConfig>) -> Result<ExperimentConfig> {
        let e = &self.experiment;
        let mut exp = match &e.preset {
            Some(name) => {
                harness::preset(name).ok_or_else(|| Error::config("preset", format!("unknown preset `{name}`")))?
            }
            None => match fallback {
                Some(exp) => exp,
                None => harness::preset("fig3").expect("fig3 preset exists"),
            },
        };
        exp.base = self.apply_base(&exp.base)?;
        if let Some(v) = &e.sweep_variable {
            exp.sweep_variable = v.parse()?;
        }
        set(&mut exp.sweep_values, e.sweep_values.clone());
        set(&mut exp.runs_per_point, e.runs_per_point);
        set(&mut exp.master_seed, e.master_seed);
        if let Some(names) = &e.algorithms {
            exp.algorithms = names.iter().map(|n| n.parse()).collect::<Result<Vec<Algorithm>>>()?;
        }
        exp.validate()?;
        Ok(exp)
    }
}
