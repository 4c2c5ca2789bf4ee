//! Random association baseline.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{finish, initial_access_slots, Algorithm, LinkTable, ScheduleResult};
use crate::error::Result;
use crate::framing::FrameConfig;
use crate::radio::RadioConfig;
use crate::scenario::Scenario;

/// UEs are visited in random order and each joins a uniformly chosen SBS
/// among those whose remaining access budget admits it. Backhaul overflow
/// is resolved by dropping uniformly chosen associated UEs. Deterministic
/// in `seed`.
pub fn riab_schedule(
    scenario: &Scenario,
    radio: &RadioConfig,
    frame: &FrameConfig,
    seed: u64,
) -> Result<ScheduleResult> {
    let table = LinkTable::new(scenario, radio, frame)?;
    schedule_links(&table, frame, seed)
}

pub(super) fn schedule_links(table: &LinkTable, frame: &FrameConfig, seed: u64) -> Result<ScheduleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (num_sbs, num_ue) = (table.num_sbs(), table.num_ue());
    let mut assoc = vec![None; num_ue];
    let mut used = vec![0u64; num_sbs];

    let mut order: Vec<usize> = (0..num_ue).collect();
    order.shuffle(&mut rng);
    for k in order {
        let options: Vec<usize> = (0..num_sbs)
            .filter(|&l| table.demand[l][k].is_some_and(|d| used[l] + d.alloc_access <= frame.n_access))
            .collect();
        if let Some(&l) = options.choose(&mut rng) {
            used[l] += table.demand[l][k].expect("option has a demand").alloc_access;
            assoc[k] = Some(l);
        }
    }

    let mut members: Vec<usize> = (0..num_ue).filter(|&k| assoc[k].is_some()).collect();
    let backhaul_of = |k: usize, l: usize| table.demand[l][k].expect("associated UE has a demand").alloc_backhaul;
    let mut total: u64 = members.iter().map(|&k| backhaul_of(k, assoc[k].unwrap())).sum();
    let mut dropped = Vec::new();
    while total > frame.m_backhaul {
        let k = members.remove(rng.gen_range(0..members.len()));
        let l = assoc[k].take().expect("member is associated");
        total -= backhaul_of(k, l);
        dropped.push((k, l));
    }

    let slots = initial_access_slots(&assoc, table);
    finish(Algorithm::Riab, table, frame, &assoc, &slots, &dropped)
}
