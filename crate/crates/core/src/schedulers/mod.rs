//! User association and slot scheduling.
//!
//! Three schedulers share the same two-phase skeleton: an association phase
//! that admits UEs against each SBS's access budget of `N` slots, and a
//! backhaul phase that drops UEs until the total backhaul demand fits in `M`
//! slots. They differ in how candidates are picked and dropped:
//!
//! - [`mqr_schedule`] picks the UE with the smallest QoS-to-rate ratio,
//!   drops the UEs with the largest backhaul demand, and afterwards spreads
//!   each SBS's whole access frame over its surviving UEs.
//! - [`msnr_schedule`] picks the UE with the highest access SNR and keeps the
//!   initial access allocation.
//! - [`riab_schedule`] associates and drops at random.

mod mqr;
mod msnr;
mod riab;
mod timeline;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::framing::{self, FrameConfig, SlotDemand};
use crate::radio::{self, RadioConfig};
use crate::scenario::{distance, Scenario};

pub use mqr::mqr_schedule;
pub use msnr::msnr_schedule;
pub use riab::riab_schedule;
pub use timeline::{materialize_timeline, verify_timeline, SlotRange, Timeline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Mqr,
    Msnr,
    Riab,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Mqr, Algorithm::Msnr, Algorithm::Riab];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Mqr => "mqr",
            Algorithm::Msnr => "msnr",
            Algorithm::Riab => "riab",
        }
    }

    /// Runs this scheduler. `seed` is only consumed by RIAB.
    pub fn schedule(
        &self,
        scenario: &Scenario,
        radio: &RadioConfig,
        frame: &FrameConfig,
        seed: u64,
    ) -> Result<ScheduleResult> {
        match self {
            Algorithm::Mqr => mqr_schedule(scenario, radio, frame),
            Algorithm::Msnr => msnr_schedule(scenario, radio, frame),
            Algorithm::Riab => riab_schedule(scenario, radio, frame, seed),
        }
    }

    /// Runs this scheduler on a precomputed link table.
    pub fn schedule_links(&self, table: &LinkTable, frame: &FrameConfig, seed: u64) -> Result<ScheduleResult> {
        match self {
            Algorithm::Mqr => mqr::schedule_links(table, frame),
            Algorithm::Msnr => msnr::schedule_links(table, frame),
            Algorithm::Riab => riab::schedule_links(table, frame, seed),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mqr" | "iab-mqr" => Ok(Algorithm::Mqr),
            "msnr" | "iab-msnr" => Ok(Algorithm::Msnr),
            "riab" => Ok(Algorithm::Riab),
            other => Err(Error::config(
                "algorithm",
                format!("unknown algorithm `{other}` (expected mqr, msnr or riab)"),
            )),
        }
    }
}

/// Per-UE association: the index of the serving SBS, if any.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Association(pub Vec<Option<usize>>);

impl Association {
    pub fn unassociated(num_ue: usize) -> Self {
        Self(vec![None; num_ue])
    }

    pub fn get(&self, ue: usize) -> Option<usize> {
        self.0[ue]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// UEs associated with `sbs`, in index order.
    pub fn members(&self, sbs: usize) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, a)| **a == Some(sbs))
            .map(|(k, _)| k)
    }
}

/// Link rates and slot demands for every (SBS, UE) pair of a scenario.
#[derive(Debug, Clone)]
pub struct LinkTable {
    pub qos: Vec<f64>,
    /// `[sbs][ue]`, bit/s. Zero when the pair is geometrically degenerate.
    pub access_rate: Vec<Vec<f64>>,
    /// `[sbs][ue]`, linear.
    pub access_snr: Vec<Vec<f64>>,
    /// `[sbs]`, bit/s.
    pub backhaul_rate: Vec<f64>,
    /// `[sbs][ue]`; `None` when the UE cannot be admitted at that SBS at all
    /// (zero rate, or a single link that needs more than a whole frame).
    pub demand: Vec<Vec<Option<SlotDemand>>>,
}

impl LinkTable {
    pub fn new(scenario: &Scenario, radio: &RadioConfig, frame: &FrameConfig) -> Result<Self> {
        radio.validate()?;
        frame.validate()?;
        let num_sbs = scenario.num_sbs();
        let num_ue = scenario.num_ue();
        if scenario.qos.len() != num_ue {
            return Err(Error::config("qos", "one QoS value per UE is required"));
        }

        let backhaul_rate: Vec<f64> = scenario
            .sbs
            .iter()
            .map(|&b| radio::backhaul_rate(distance(scenario.mbs, b), radio).unwrap_or(0.0))
            .collect();

        let mut access_rate = vec![vec![0.0; num_ue]; num_sbs];
        let mut access_snr = vec![vec![0.0; num_ue]; num_sbs];
        for (l, &b) in scenario.sbs.iter().enumerate() {
            for (k, &u) in scenario.ue.iter().enumerate() {
                let d = distance(b, u);
                if let (Ok(snr), Ok(rate)) = (radio::access_snr(d, radio), radio::access_rate(d, radio)) {
                    access_snr[l][k] = snr;
                    access_rate[l][k] = rate;
                }
            }
        }
        Ok(Self::with_demands(
            scenario.qos.clone(),
            access_rate,
            access_snr,
            backhaul_rate,
            frame,
        ))
    }

    /// Builds a table from explicit rates. The SNR column is filled with the
    /// access rates, which rank candidates identically.
    pub fn from_rates(
        qos: Vec<f64>,
        access_rate: Vec<Vec<f64>>,
        backhaul_rate: Vec<f64>,
        frame: &FrameConfig,
    ) -> Result<Self> {
        frame.validate()?;
        if access_rate.len() != backhaul_rate.len() || access_rate.iter().any(|row| row.len() != qos.len()) {
            return Err(Error::Precondition("rate table dimensions do not match".into()));
        }
        let snr = access_rate.clone();
        Ok(Self::with_demands(qos, access_rate, snr, backhaul_rate, frame))
    }

    fn with_demands(
        qos: Vec<f64>,
        access_rate: Vec<Vec<f64>>,
        access_snr: Vec<Vec<f64>>,
        backhaul_rate: Vec<f64>,
        frame: &FrameConfig,
    ) -> Self {
        let demand = access_rate
            .iter()
            .zip(&backhaul_rate)
            .map(|(row, &rb)| {
                row.iter()
                    .zip(&qos)
                    .map(|(&ra, &q)| SlotDemand::new(q, ra, rb, frame).ok().filter(|d| d.fits(frame)))
                    .collect()
            })
            .collect();
        Self {
            qos,
            access_rate,
            access_snr,
            backhaul_rate,
            demand,
        }
    }

    pub fn num_sbs(&self) -> usize {
        self.backhaul_rate.len()
    }

    pub fn num_ue(&self) -> usize {
        self.qos.len()
    }
}

/// Schedule outcome for a single UE.
#[derive(Debug, Clone, PartialEq)]
pub struct UeOutcome {
    pub qos: f64,
    /// Final association; cleared for UEs dropped in the backhaul phase.
    pub sbs: Option<usize>,
    /// Demand at the SBS chosen during association, kept even if dropped.
    pub demand: Option<SlotDemand>,
    /// Dropped in the backhaul phase.
    pub pruned: bool,
    /// Access slots actually held: the redistributed count for MQR, the
    /// initial ceiling allocation otherwise, zero when unassociated.
    pub access_slots: u64,
    /// Backhaul slots actually held, zero when unassociated.
    pub backhaul_slots: u64,
    pub access_throughput: f64,
    pub backhaul_throughput: f64,
    pub served: bool,
}

impl UeOutcome {
    fn idle(qos: f64) -> Self {
        Self {
            qos,
            sbs: None,
            demand: None,
            pruned: false,
            access_slots: 0,
            backhaul_slots: 0,
            access_throughput: 0.0,
            backhaul_throughput: 0.0,
            served: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleResult {
    pub algorithm: Algorithm,
    pub frame: FrameConfig,
    pub num_sbs: usize,
    pub ues: Vec<UeOutcome>,
}

impl ScheduleResult {
    pub fn association(&self) -> Association {
        Association(self.ues.iter().map(|u| u.sbs).collect())
    }

    /// Access slots in use at each SBS.
    pub fn access_load(&self) -> Vec<u64> {
        let mut load = vec![0; self.num_sbs];
        for u in &self.ues {
            if let Some(l) = u.sbs {
                load[l] += u.access_slots;
            }
        }
        load
    }

    pub fn backhaul_load(&self) -> u64 {
        self.ues
            .iter()
            .filter(|u| u.sbs.is_some())
            .map(|u| u.backhaul_slots)
            .sum()
    }

    /// Checks slot budgets and QoS soundness of the served flags.
    pub fn check_invariants(&self) -> Result<()> {
        for (l, load) in self.access_load().into_iter().enumerate() {
            if load > self.frame.n_access {
                return Err(Error::Consistency(format!(
                    "SBS {l} uses {load} access slots, budget is {}",
                    self.frame.n_access
                )));
            }
        }
        let bh = self.backhaul_load();
        if bh > self.frame.m_backhaul {
            return Err(Error::Consistency(format!(
                "{bh} backhaul slots in use, budget is {}",
                self.frame.m_backhaul
            )));
        }
        for (k, u) in self.ues.iter().enumerate() {
            if u.served && (u.sbs.is_none() || !framing::is_served(u.access_throughput, u.backhaul_throughput, u.qos)) {
                return Err(Error::Consistency(format!(
                    "UE {k} is flagged served but misses its QoS"
                )));
            }
            if u.sbs.is_some() && u.pruned {
                return Err(Error::Consistency(format!("UE {k} is dropped but still associated")));
            }
        }
        Ok(())
    }
}

/// Sum over associated UEs of the bottleneck throughput, bit/s.
pub fn system_throughput(result: &ScheduleResult) -> f64 {
    result
        .ues
        .iter()
        .filter(|u| u.sbs.is_some())
        .map(|u| u.access_throughput.min(u.backhaul_throughput))
        .sum()
}

pub fn served_count(result: &ScheduleResult) -> usize {
    result.ues.iter().filter(|u| u.served).count()
}

/// State of the association phase.
struct Admission {
    assoc: Vec<Option<usize>>,
    access_used: Vec<u64>,
}

impl Admission {
    fn new(num_sbs: usize, num_ue: usize) -> Self {
        Self {
            assoc: vec![None; num_ue],
            access_used: vec![0; num_sbs],
        }
    }
}

/// Greedy association shared by MQR and MSNR.
///
/// Each round visits the still-active SBSs in index order. An SBS picks the
/// unassociated UE minimising `key(sbs, ue)` among those it could ever
/// admit. The candidate is committed if it fits in the SBS's remaining
/// access budget; otherwise, or when no candidate exists, the SBS leaves
/// the active set for good.
fn associate_greedy(table: &LinkTable, frame: &FrameConfig, key: impl Fn(usize, usize) -> f64) -> Admission {
    let (num_sbs, num_ue) = (table.num_sbs(), table.num_ue());
    let mut state = Admission::new(num_sbs, num_ue);
    let mut active = vec![true; num_sbs];
    let mut pool = num_ue;

    while pool > 0 && active.iter().any(|&a| a) {
        for l in 0..num_sbs {
            if !active[l] || pool == 0 {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for k in 0..num_ue {
                if state.assoc[k].is_some() || table.demand[l][k].is_none() {
                    continue;
                }
                let v = key(l, k);
                if !v.is_finite() {
                    continue;
                }
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((k, v));
                }
            }
            let Some((k, _)) = best else {
                active[l] = false;
                continue;
            };
            let t_access = table.demand[l][k].expect("candidate has a demand").alloc_access;
            if state.access_used[l] + t_access <= frame.n_access {
                state.access_used[l] += t_access;
                state.assoc[k] = Some(l);
                pool -= 1;
            } else {
                active[l] = false;
            }
        }
    }
    state
}

/// Drops the UE with the largest backhaul demand (smallest index on ties)
/// until the associated UEs fit in `M` backhaul slots. Returns the dropped
/// UEs with the SBS they were associated with.
fn prune_largest_backhaul(assoc: &mut [Option<usize>], table: &LinkTable, frame: &FrameConfig) -> Vec<(usize, usize)> {
    let backhaul_of = |k: usize, l: usize| table.demand[l][k].expect("associated UE has a demand").alloc_backhaul;
    let mut total: u64 = assoc
        .iter()
        .enumerate()
        .filter_map(|(k, a)| a.map(|l| backhaul_of(k, l)))
        .sum();
    let mut dropped = Vec::new();
    while total > frame.m_backhaul {
        let (k, l, t) = assoc
            .iter()
            .enumerate()
            .filter_map(|(k, a)| a.map(|l| (k, l, backhaul_of(k, l))))
            .fold(None, |best: Option<(usize, usize, u64)>, cur| match best {
                Some(b) if b.2 >= cur.2 => Some(b),
                _ => Some(cur),
            })
            .expect("positive total implies an associated UE");
        assoc[k] = None;
        total -= t;
        dropped.push((k, l));
    }
    dropped
}

/// Builds the final per-UE outcomes.
///
/// `access_slots[k]` is the access allocation held by each surviving UE;
/// `dropped` lists UEs removed in the backhaul phase with their former SBS.
fn finish(
    algorithm: Algorithm,
    table: &LinkTable,
    frame: &FrameConfig,
    assoc: &[Option<usize>],
    access_slots: &[u64],
    dropped: &[(usize, usize)],
) -> Result<ScheduleResult> {
    let mut ues: Vec<UeOutcome> = table.qos.iter().map(|&q| UeOutcome::idle(q)).collect();
    for &(k, l) in dropped {
        ues[k].demand = table.demand[l][k];
        ues[k].pruned = true;
    }
    for (k, a) in assoc.iter().enumerate() {
        let Some(l) = *a else { continue };
        let demand = table.demand[l][k].expect("associated UE has a demand");
        let c_access = framing::access_throughput(table.access_rate[l][k], access_slots[k], frame)?;
        let c_backhaul = framing::backhaul_throughput(table.backhaul_rate[l], demand.alloc_backhaul, frame)?;
        let u = &mut ues[k];
        u.sbs = Some(l);
        u.demand = Some(demand);
        u.access_slots = access_slots[k];
        u.backhaul_slots = demand.alloc_backhaul;
        u.access_throughput = c_access;
        u.backhaul_throughput = c_backhaul;
        u.served = framing::is_served(c_access, c_backhaul, u.qos);
    }
    Ok(ScheduleResult {
        algorithm,
        frame: *frame,
        num_sbs: table.num_sbs(),
        ues,
    })
}

/// Initial ceiling allocation for each associated UE.
fn initial_access_slots(assoc: &[Option<usize>], table: &LinkTable) -> Vec<u64> {
    assoc
        .iter()
        .enumerate()
        .map(|(k, a)| a.and_then(|l| table.demand[l][k]).map_or(0, |d| d.alloc_access))
        .collect()
}

#[cfg(test)]
pub(crate) mod test_support {
    use crate::scenario::{Point2D, Scenario};

    /// One SBS at the origin side, MBS 30 m away, UEs on a line.
    pub fn line_scenario(ue_x: &[f64], qos: &[f64]) -> Scenario {
        Scenario {
            mbs: Point2D::new(0.0, 0.0),
            sbs: vec![Point2D::new(30.0, 0.0)],
            ue: ue_x.iter().map(|&x| Point2D::new(30.0 + x, 0.0)).collect(),
            qos: qos.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::line_scenario;
    use super::*;
    use crate::scenario::Point2D;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("greedy".parse::<Algorithm>().is_err());
    }

    #[test]
    fn link_table_marks_oversized_demands() {
        let s = line_scenario(&[10.0, 10.0], &[2e9, 1e13]);
        let t = LinkTable::new(&s, &RadioConfig::default(), &FrameConfig::default()).unwrap();
        assert!(t.demand[0][0].is_some());
        assert!(t.demand[0][1].is_none());
    }

    #[test]
    fn colocated_ue_is_never_eligible() {
        let s = Scenario {
            mbs: Point2D::new(0.0, 0.0),
            sbs: vec![Point2D::new(10.0, 0.0)],
            ue: vec![Point2D::new(10.0, 0.0)],
            qos: vec![2e9],
        };
        let t = LinkTable::new(&s, &RadioConfig::default(), &FrameConfig::default()).unwrap();
        assert_eq!(t.access_rate[0][0], 0.0);
        assert!(t.demand[0][0].is_none());
        for a in Algorithm::ALL {
            let r = a
                .schedule(&s, &RadioConfig::default(), &FrameConfig::default(), 0)
                .unwrap();
            assert_eq!(served_count(&r), 0);
        }
    }

    #[test]
    fn system_throughput_sums_bottlenecks() {
        let mut r = ScheduleResult {
            algorithm: Algorithm::Mqr,
            frame: FrameConfig::default(),
            num_sbs: 2,
            ues: vec![],
        };
        assert_eq!(system_throughput(&r), 0.0);
        assert_eq!(served_count(&r), 0);

        let ue = |sbs, ca: f64, cb: f64, served| UeOutcome {
            sbs,
            access_throughput: ca,
            backhaul_throughput: cb,
            served,
            ..UeOutcome::idle(2e9)
        };
        r.ues = vec![ue(Some(0), 2.2e9, 2.05e9, true)];
        assert_eq!(system_throughput(&r), 2.05e9);

        r.ues = vec![
            ue(Some(0), 2.2e9, 2.05e9, true),
            ue(Some(1), 3.0e9, 3.5e9, true),
            ue(None, 9.0e9, 9.0e9, false),
            ue(Some(1), 4.25e9, 4.5e9, true),
        ];
        assert!((system_throughput(&r) - (2.05e9 + 3.0e9 + 4.25e9)).abs() < 1.0);
        assert_eq!(served_count(&r), 3);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let s = line_scenario(&[5.0], &[2e9]);
        let bad = FrameConfig {
            n_access: 0,
            ..FrameConfig::default()
        };
        for a in Algorithm::ALL {
            assert!(a.schedule(&s, &RadioConfig::default(), &bad, 0).is_err());
        }
    }

    #[test]
    fn empty_scenario_gives_empty_result() {
        let s = Scenario {
            mbs: Point2D::new(0.0, 0.0),
            sbs: vec![Point2D::new(10.0, 0.0)],
            ue: vec![],
            qos: vec![],
        };
        for a in Algorithm::ALL {
            let r = a
                .schedule(&s, &RadioConfig::default(), &FrameConfig::default(), 3)
                .unwrap();
            assert!(r.ues.is_empty());
            assert_eq!(system_throughput(&r), 0.0);
        }
    }
}
