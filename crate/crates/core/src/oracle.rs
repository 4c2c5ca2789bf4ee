//! Exact served-user maximisation for tiny instances.
//!
//! Once a UE's SBS is fixed, serving it costs exactly its ceiling access
//! allocation at that SBS and its ceiling backhaul allocation on the MBS.
//! Contiguous packing then always realises the slot counts, so the problem
//! reduces to choosing an SBS (or none) per UE subject to one knapsack per
//! SBS and one shared backhaul knapsack.

use crate::error::{Error, Result};
use crate::framing::{FrameConfig, SlotDemand};
use crate::radio::RadioConfig;
use crate::scenario::Scenario;
use crate::schedulers::{Association, LinkTable};

/// Largest number of association vectors an instance may have.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub optimum: usize,
    /// A feasible association serving `optimum` UEs.
    pub witness: Association,
    /// Slot demand of each associated UE in the witness.
    pub slots: Vec<Option<SlotDemand>>,
    /// Search nodes (branch and bound) or association vectors (exhaustive)
    /// that were evaluated.
    pub explored: u64,
}

fn check_size(num_sbs: usize, num_ue: usize) -> Result<u64> {
    let base = num_sbs as u64 + 1;
    match u32::try_from(num_ue).ok().and_then(|k| base.checked_pow(k)) {
        Some(n) if n <= ENUMERATION_BUDGET => Ok(n),
        _ => Err(Error::Size {
            configurations: (base as f64).powf(num_ue as f64),
            budget: ENUMERATION_BUDGET,
        }),
    }
}

pub fn exact_max_served(scenario: &Scenario, radio: &RadioConfig, frame: &FrameConfig) -> Result<OracleResult> {
    check_size(scenario.num_sbs(), scenario.num_ue())?;
    let table = LinkTable::new(scenario, radio, frame)?;
    exact_max_served_links(&table, frame)
}

fn witness(table: &LinkTable, assoc: Vec<Option<usize>>) -> (Association, Vec<Option<SlotDemand>>) {
    let slots = assoc
        .iter()
        .enumerate()
        .map(|(k, a)| a.and_then(|l| table.demand[l][k]))
        .collect();
    (Association(assoc), slots)
}

struct Search<'a> {
    table: &'a LinkTable,
    frame: &'a FrameConfig,
    /// `reachable[k]`: UEs at index >= k that have at least one admissible SBS.
    reachable: Vec<usize>,
    access_used: Vec<u64>,
    backhaul_used: u64,
    current: Vec<Option<usize>>,
    best: usize,
    best_assoc: Vec<Option<usize>>,
    explored: u64,
}

impl Search<'_> {
    fn visit(&mut self, k: usize, served: usize) {
        self.explored += 1;
        if served > self.best {
            self.best = served;
            self.best_assoc.clone_from(&self.current);
        }
        if k == self.current.len() || served + self.reachable[k] <= self.best {
            return;
        }
        for l in 0..self.table.num_sbs() {
            let Some(d) = self.table.demand[l][k] else { continue };
            if self.access_used[l] + d.alloc_access > self.frame.n_access
                || self.backhaul_used + d.alloc_backhaul > self.frame.m_backhaul
            {
                continue;
            }
            self.access_used[l] += d.alloc_access;
            self.backhaul_used += d.alloc_backhaul;
            self.current[k] = Some(l);
            self.visit(k + 1, served + 1);
            self.current[k] = None;
            self.access_used[l] -= d.alloc_access;
            self.backhaul_used -= d.alloc_backhaul;
        }
        self.visit(k + 1, served);
    }
}

/// Depth-first branch and bound over per-UE choices, pruned by the number
/// of UEs that could still be added.
pub fn exact_max_served_links(table: &LinkTable, frame: &FrameConfig) -> Result<OracleResult> {
    let (num_sbs, num_ue) = (table.num_sbs(), table.num_ue());
    check_size(num_sbs, num_ue)?;
    let mut reachable = vec![0; num_ue + 1];
    for k in (0..num_ue).rev() {
        let admissible = (0..num_sbs).any(|l| table.demand[l][k].is_some());
        reachable[k] = reachable[k + 1] + usize::from(admissible);
    }
    let mut search = Search {
        table,
        frame,
        reachable,
        access_used: vec![0; num_sbs],
        backhaul_used: 0,
        current: vec![None; num_ue],
        best: 0,
        best_assoc: vec![None; num_ue],
        explored: 0,
    };
    search.visit(0, 0);
    let (witness, slots) = witness(table, search.best_assoc);
    Ok(OracleResult {
        optimum: search.best,
        witness,
        slots,
        explored: search.explored,
    })
}

/// Plain enumeration of all `(L + 1)^K` association vectors.
pub fn exhaustive_max_served_links(table: &LinkTable, frame: &FrameConfig) -> Result<OracleResult> {
    let (num_sbs, num_ue) = (table.num_sbs(), table.num_ue());
    let total = check_size(num_sbs, num_ue)?;
    let base = num_sbs as u64 + 1;
    let mut best = 0;
    let mut best_assoc = vec![None; num_ue];
    let mut assoc = vec![None; num_ue];
    let mut access = vec![0u64; num_sbs];

    'vectors: for code in 0..total {
        access.iter_mut().for_each(|a| *a = 0);
        let mut backhaul = 0u64;
        let mut served = 0;
        let mut rest = code;
        for (k, slot) in assoc.iter_mut().enumerate() {
            let digit = (rest % base) as usize;
            rest /= base;
            *slot = None;
            if digit == 0 {
                continue;
            }
            let l = digit - 1;
            let Some(d) = table.demand[l][k] else { continue 'vectors };
            access[l] += d.alloc_access;
            backhaul += d.alloc_backhaul;
            *slot = Some(l);
            served += 1;
        }
        let feasible = backhaul <= frame.m_backhaul && access.iter().all(|&a| a <= frame.n_access);
        if feasible && served > best {
            best = served;
            best_assoc.clone_from(&assoc);
        }
    }

    let (witness, slots) = witness(table, best_assoc);
    Ok(OracleResult {
        optimum: best,
        witness,
        slots,
        explored: total,
    })
}
