//! Maximum-SNR association baseline.

use super::{
    associate_greedy, finish, initial_access_slots, prune_largest_backhaul, Algorithm, LinkTable, ScheduleResult,
};
use crate::error::Result;
use crate::framing::FrameConfig;
use crate::radio::RadioConfig;
use crate::scenario::Scenario;

/// Same association loop as MQR, but each SBS takes the unassociated UE with
/// the highest access SNR. Backhaul dropping is shared with MQR; the access
/// allocation is left at its initial ceiling value.
pub fn msnr_schedule(scenario: &Scenario, radio: &RadioConfig, frame: &FrameConfig) -> Result<ScheduleResult> {
    let table = LinkTable::new(scenario, radio, frame)?;
    schedule_links(&table, frame)
}

pub(super) fn schedule_links(table: &LinkTable, frame: &FrameConfig) -> Result<ScheduleResult> {
    let mut admission = associate_greedy(table, frame, |l, k| -table.access_snr[l][k]);
    let dropped = prune_largest_backhaul(&mut admission.assoc, table, frame);
    let slots = initial_access_slots(&admission.assoc, table);
    finish(Algorithm::Msnr, table, frame, &admission.assoc, &slots, &dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedulers::test_support::line_scenario;
    use crate::schedulers::{mqr_schedule, served_count};

    #[test]
    fn near_hungry_ue_blocks_far_light_one() {
        let frame = FrameConfig {
            t_s: 0.0,
            delta: 1e-3,
            n_access: 100,
            m_backhaul: 100,
        };
        // UE0 is near (fast) but needs the whole frame; UE1 is far and light
        let table = LinkTable::from_rates(vec![4e10, 1e9], vec![vec![4e10, 2e10]], vec![1e12], &frame).unwrap();
        assert_eq!(table.demand[0][0].unwrap().alloc_access, 100);
        assert_eq!(table.demand[0][1].unwrap().alloc_access, 5);

        let msnr = schedule_links(&table, &frame).unwrap();
        assert_eq!(msnr.association().0, vec![Some(0), None]);
        assert_eq!(served_count(&msnr), 1);

        let mqr = Algorithm::Mqr.schedule_links(&table, &frame, 0).unwrap();
        assert_eq!(mqr.association().0, vec![None, Some(0)]);
        assert_eq!(served_count(&mqr), 1);
    }

    #[test]
    fn coincides_with_mqr_when_nearest_is_also_cheapest() {
        // equal QoS: the highest SNR is also the smallest rate ratio
        let s = line_scenario(&[3.0, 8.0, 15.0, 40.0], &[3e9; 4]);
        let radio = RadioConfig::default();
        let frame = FrameConfig::default();
        let a = msnr_schedule(&s, &radio, &frame).unwrap();
        let b = mqr_schedule(&s, &radio, &frame).unwrap();
        assert_eq!(a.association(), b.association());
    }

    #[test]
    fn keeps_ceiling_allocation_and_meets_qos() {
        let s = line_scenario(&[3.0, 8.0, 15.0, 40.0], &[2e9, 3e9, 4e9, 5e9]);
        let r = msnr_schedule(&s, &RadioConfig::default(), &FrameConfig::default()).unwrap();
        for u in r.ues.iter().filter(|u| u.sbs.is_some()) {
            assert_eq!(u.access_slots, u.demand.unwrap().alloc_access);
            assert!(u.served);
            assert!(u.access_throughput >= u.qos);
        }
        r.check_invariants().unwrap();
    }
}
