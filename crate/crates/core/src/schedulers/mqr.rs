//! Minimum rate-ratio association and scheduling.

use super::{
    associate_greedy, finish, initial_access_slots, prune_largest_backhaul, Algorithm, LinkTable, ScheduleResult,
};
use crate::error::Result;
use crate::framing::{update_access_slots, FrameConfig};
use crate::radio::RadioConfig;
use crate::scenario::Scenario;

/// Schedules `scenario` with the minimum rate-ratio heuristic.
///
/// 1. Association pre-decision: every active SBS in turn takes the
///    unassociated UE with the smallest `qos / access_rate` and keeps it if
///    its ceiling allocation still fits in the SBS's `N` access slots;
///    otherwise the SBS stops associating.
/// 2. Backhaul scheduling: while the backhaul allocations of all associated
///    UEs exceed `M`, the UE holding the most backhaul slots is dropped.
/// 3. Update: each SBS's `N` access slots are shared among its surviving
///    UEs in proportion to their initial allocations, rounded down.
pub fn mqr_schedule(scenario: &Scenario, radio: &RadioConfig, frame: &FrameConfig) -> Result<ScheduleResult> {
    let table = LinkTable::new(scenario, radio, frame)?;
    schedule_links(&table, frame)
}

pub(super) fn schedule_links(table: &LinkTable, frame: &FrameConfig) -> Result<ScheduleResult> {
    let mut admission = associate_greedy(table, frame, |l, k| table.qos[k] / table.access_rate[l][k]);
    let dropped = prune_largest_backhaul(&mut admission.assoc, table, frame);

    let initial = initial_access_slots(&admission.assoc, table);
    let mut updated = vec![0; table.num_ue()];
    for l in 0..table.num_sbs() {
        let members: Vec<usize> = (0..table.num_ue()).filter(|&k| admission.assoc[k] == Some(l)).collect();
        if members.is_empty() {
            continue;
        }
        let allocs: Vec<u64> = members.iter().map(|&k| initial[k]).collect();
        for (k, t) in members.into_iter().zip(update_access_slots(&allocs, frame.n_access)?) {
            updated[k] = t;
        }
    }

    finish(Algorithm::Mqr, table, frame, &admission.assoc, &updated, &dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedulers::test_support::line_scenario;
    use crate::schedulers::{served_count, system_throughput};

    fn unit_frame() -> FrameConfig {
        // with t_s = 0 a UE needs N * qos / rate access slots
        FrameConfig {
            t_s: 0.0,
            delta: 1e-3,
            n_access: 100,
            m_backhaul: 100,
        }
    }

    #[test]
    fn single_ue_gets_the_whole_frame() {
        let s = line_scenario(&[10.0], &[3e9]);
        let frame = FrameConfig::default();
        let r = mqr_schedule(&s, &RadioConfig::default(), &frame).unwrap();
        let ue = &r.ues[0];
        assert_eq!(ue.sbs, Some(0));
        assert!(ue.served);
        assert!(ue.demand.unwrap().alloc_access < frame.n_access);
        assert_eq!(ue.access_slots, frame.n_access);
        assert_eq!(served_count(&r), 1);
    }

    #[test]
    fn largest_backhaul_demand_is_dropped() {
        let frame = unit_frame();
        // backhaul demands 5, 6 and 95 slots; access demands equal
        let qos = vec![0.05e10, 0.06e10, 0.95e10];
        let table = LinkTable::from_rates(qos, vec![vec![1e11; 3], vec![1e11; 3]], vec![1e10, 1e10], &frame).unwrap();
        let backhaul: Vec<u64> = (0..3).map(|k| table.demand[0][k].unwrap().alloc_backhaul).collect();
        assert_eq!(backhaul, vec![5, 6, 95]);

        let r = schedule_links(&table, &frame).unwrap();
        // round 1: SBS0 takes UE0, SBS1 takes UE1; round 2: SBS0 takes UE2
        assert!(r.ues[2].pruned);
        assert_eq!(r.ues[2].sbs, None);
        assert!(!r.ues[2].served);
        assert_eq!(r.association().0, vec![Some(0), Some(1), None]);
        assert_eq!(served_count(&r), 2);
        assert_eq!(r.ues[0].access_slots, 100);
        assert_eq!(r.ues[1].access_slots, 100);
        assert_eq!(r.backhaul_load(), 11);
        r.check_invariants().unwrap();
    }

    #[test]
    fn oversized_backhaul_demand_is_never_associated() {
        let frame = unit_frame();
        // the third UE would need 1000 backhaul slots out of 100
        let qos = vec![0.05e10, 0.06e10, 10e10];
        let table = LinkTable::from_rates(qos, vec![vec![1e12; 3], vec![1e12; 3]], vec![1e10, 1e10], &frame).unwrap();
        assert!(table.demand[0][2].is_none());
        let r = schedule_links(&table, &frame).unwrap();
        assert_eq!(r.association().0, vec![Some(0), Some(1), None]);
        assert!(!r.ues[2].pruned);
        assert_eq!(served_count(&r), 2);
    }

    #[test]
    fn all_infeasible_serves_nobody() {
        let s = line_scenario(&[5.0, 10.0, 20.0], &[1e14, 2e14, 3e14]);
        let r = mqr_schedule(&s, &RadioConfig::default(), &FrameConfig::default()).unwrap();
        assert_eq!(served_count(&r), 0);
        assert_eq!(system_throughput(&r), 0.0);
    }

    #[test]
    fn failed_candidate_deactivates_the_sbs() {
        let frame = unit_frame();
        // smallest ratio first: UE1 (30 slots), UE0 (40), then UE2 (50) overflows
        let qos = vec![0.4e10, 0.3e10, 0.5e10, 0.1e10];
        let rates = vec![vec![1e10, 1e10, 1e10, 1e9 / 0.6]];
        let table = LinkTable::from_rates(qos, rates, vec![1e12], &frame).unwrap();
        let r = schedule_links(&table, &frame).unwrap();
        // UE3 needs 60 slots; it ranks last and is never tried
        assert_eq!(r.association().0, vec![Some(0), Some(0), None, None]);
        // update: floor(100 * 40 / 70) and floor(100 * 30 / 70)
        assert_eq!(r.ues[0].access_slots, 57);
        assert_eq!(r.ues[1].access_slots, 42);
    }

    #[test]
    fn update_never_shrinks_allocations() {
        let cfg = crate::scenario::ScenarioConfig {
            seed: 5,
            ..Default::default()
        };
        let s = crate::scenario::generate_scenario(&cfg).unwrap();
        let r = mqr_schedule(&s, &RadioConfig::default(), &FrameConfig::default()).unwrap();
        r.check_invariants().unwrap();
        assert!(served_count(&r) > 0);
        for u in r.ues.iter().filter(|u| u.sbs.is_some()) {
            assert!(u.access_slots >= u.demand.unwrap().alloc_access);
        }
    }
}
