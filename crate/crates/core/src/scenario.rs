//! Random network topologies: one macro base station (MBS), `L` small base
//! stations (SBSs) and `K` user equipments (UEs) with individual QoS demands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Positions closer than this to a base station are re-drawn.
pub const MIN_SEPARATION_M: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Euclidean distance in meters.
pub fn distance(a: Point2D, b: Point2D) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub area_width: f64,
    pub area_height: f64,
    pub num_sbs: usize,
    pub num_ue: usize,
    /// Lower bound of the per-UE QoS demand, bit/s.
    pub qos_min: f64,
    /// Upper bound of the per-UE QoS demand, bit/s.
    pub qos_max: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    /// 100 m x 100 m, 8 SBSs, 500 UEs, QoS uniform in [2, 5] Gbit/s.
    fn default() -> Self {
        Self {
            area_width: 100.0,
            area_height: 100.0,
            num_sbs: 8,
            num_ue: 500,
            qos_min: 2e9,
            qos_max: 5e9,
            seed: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.area_width.is_finite() && self.area_width > 0.0) {
            return Err(Error::config(
                "area_width",
                format!("must be > 0, got {}", self.area_width),
            ));
        }
        if !(self.area_height.is_finite() && self.area_height > 0.0) {
            return Err(Error::config(
                "area_height",
                format!("must be > 0, got {}", self.area_height),
            ));
        }
        if self.num_sbs == 0 {
            return Err(Error::config("num_sbs", "at least one SBS is required"));
        }
        if self.num_ue == 0 {
            return Err(Error::config("num_ue", "at least one UE is required"));
        }
        if !(self.qos_min.is_finite() && self.qos_min > 0.0) {
            return Err(Error::config("qos_min", format!("must be > 0, got {}", self.qos_min)));
        }
        if !(self.qos_max.is_finite() && self.qos_max >= self.qos_min) {
            return Err(Error::config(
                "qos_max",
                format!("must be >= qos_min ({}), got {}", self.qos_min, self.qos_max),
            ));
        }
        // The rejection step needs somewhere to put a UE.
        if self.area_width.min(self.area_height) <= 4.0 * MIN_SEPARATION_M {
            return Err(Error::config(
                "area_width",
                "area too small for the minimum base-station separation",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mbs: Point2D,
    pub sbs: Vec<Point2D>,
    pub ue: Vec<Point2D>,
    /// Per-UE QoS demand in bit/s, indexed like `ue`.
    pub qos: Vec<f64>,
}

impl Scenario {
    pub fn num_sbs(&self) -> usize {
        self.sbs.len()
    }

    pub fn num_ue(&self) -> usize {
        self.ue.len()
    }
}

/// Draws a scenario. The result is a pure function of `config`, seed included.
///
/// The MBS sits at the centre of the area. SBSs and UEs are i.i.d. uniform
/// over the area, with any draw within [`MIN_SEPARATION_M`] of an already
/// placed base station rejected and re-drawn. QoS demands are i.i.d.
/// uniform over `[qos_min, qos_max]`.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mbs = Point2D::new(config.area_width / 2.0, config.area_height / 2.0);

    let draw = |rng: &mut ChaCha8Rng, avoid: &[Point2D], also: Point2D| loop {
        let p = Point2D::new(
            rng.gen_range(0.0..=config.area_width),
            rng.gen_range(0.0..=config.area_height),
        );
        let clear = distance(p, also) >= MIN_SEPARATION_M && avoid.iter().all(|&b| distance(p, b) >= MIN_SEPARATION_M);
        if clear {
            break p;
        }
    };

    let mut sbs = Vec::with_capacity(config.num_sbs);
    for _ in 0..config.num_sbs {
        let p = draw(&mut rng, &[], mbs);
        sbs.push(p);
    }

    let mut ue = Vec::with_capacity(config.num_ue);
    for _ in 0..config.num_ue {
        ue.push(draw(&mut rng, &sbs, mbs));
    }

    let qos = (0..config.num_ue)
        .map(|_| {
            if config.qos_min == config.qos_max {
                config.qos_min
            } else {
                rng.gen_range(config.qos_min..=config.qos_max)
            }
        })
        .collect();

    Ok(Scenario { mbs, sbs, ue, qos })
}
