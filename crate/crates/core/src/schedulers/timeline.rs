//! Concrete slot assignments.
//!
//! Schedulers only decide slot *counts*. Packing them back to back yields a
//! timeline in which no SBS serves two access links in the same slot and the
//! MBS serves one backhaul link per slot.

use super::ScheduleResult;
use crate::error::{Error, Result};
use crate::framing::FrameConfig;

/// Half-open slot interval `[start, end)` held by one UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRange {
    pub ue: usize,
    pub start: u64,
    pub end: u64,
}

impl SlotRange {
    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeline {
    /// Access ranges per SBS, within `[0, N)`.
    pub access: Vec<Vec<SlotRange>>,
    /// Backhaul ranges within `[0, M)`.
    pub backhaul: Vec<SlotRange>,
}

/// Packs every associated UE's slots contiguously in UE-index order and
/// verifies the result.
pub fn materialize_timeline(result: &ScheduleResult, frame: &FrameConfig) -> Result<Timeline> {
    let mut access = vec![Vec::new(); result.num_sbs];
    let mut next_access = vec![0u64; result.num_sbs];
    let mut backhaul = Vec::new();
    let mut next_backhaul = 0u64;

    for (k, u) in result.ues.iter().enumerate() {
        let Some(l) = u.sbs else { continue };
        if l >= result.num_sbs {
            return Err(Error::Consistency(format!("UE {k} points at missing SBS {l}")));
        }
        let start = next_access[l];
        next_access[l] += u.access_slots;
        access[l].push(SlotRange {
            ue: k,
            start,
            end: next_access[l],
        });

        let start = next_backhaul;
        next_backhaul += u.backhaul_slots;
        backhaul.push(SlotRange {
            ue: k,
            start,
            end: next_backhaul,
        });
    }

    let timeline = Timeline { access, backhaul };
    verify_timeline(&timeline, frame)?;
    Ok(timeline)
}

fn check_lane(ranges: &[SlotRange], budget: u64, lane: &str) -> Result<()> {
    let mut sorted: Vec<SlotRange> = ranges.to_vec();
    sorted.sort_by_key(|r| (r.start, r.end));
    for r in &sorted {
        if r.start > r.end {
            return Err(Error::Consistency(format!("{lane}: UE {} has a reversed range", r.ue)));
        }
        if r.end > budget {
            return Err(Error::Consistency(format!(
                "{lane}: UE {} ends at slot {} beyond the {budget}-slot frame",
                r.ue, r.end
            )));
        }
    }
    for pair in sorted.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !a.is_empty() && !b.is_empty() && a.end > b.start {
            return Err(Error::Consistency(format!(
                "{lane}: UEs {} and {} share slot {}",
                a.ue, b.ue, b.start
            )));
        }
    }
    Ok(())
}

/// Checks that no slot is booked twice on any SBS or on the backhaul, and
/// that every range lies inside its frame.
pub fn verify_timeline(timeline: &Timeline, frame: &FrameConfig) -> Result<()> {
    let mut owner = std::collections::HashMap::new();
    for (l, lane) in timeline.access.iter().enumerate() {
        check_lane(lane, frame.n_access, &format!("SBS {l}"))?;
        for r in lane {
            if let Some(prev) = owner.insert(r.ue, l) {
                return Err(Error::Consistency(format!(
                    "UE {} is scheduled on SBS {prev} and SBS {l}",
                    r.ue
                )));
            }
        }
    }
    check_lane(&timeline.backhaul, frame.m_backhaul, "backhaul")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::RadioConfig;
    use crate::scenario::{generate_scenario, ScenarioConfig};
    use crate::schedulers::{mqr_schedule, Algorithm, UeOutcome};

    fn ue(sbs: Option<usize>, access: u64, backhaul: u64) -> UeOutcome {
        UeOutcome {
            qos: 1.0,
            sbs,
            demand: None,
            pruned: false,
            access_slots: access,
            backhaul_slots: backhaul,
            access_throughput: 0.0,
            backhaul_throughput: 0.0,
            served: false,
        }
    }

    fn frame(n: u64, m: u64) -> FrameConfig {
        FrameConfig {
            n_access: n,
            m_backhaul: m,
            ..FrameConfig::default()
        }
    }

    #[test]
    fn sequential_packing() {
        let r = ScheduleResult {
            algorithm: Algorithm::Mqr,
            frame: frame(10, 10),
            num_sbs: 1,
            ues: vec![ue(Some(0), 3, 1), ue(None, 0, 0), ue(Some(0), 2, 4)],
        };
        let t = materialize_timeline(&r, &r.frame).unwrap();
        assert_eq!(
            t.access[0],
            vec![
                SlotRange {
                    ue: 0,
                    start: 0,
                    end: 3
                },
                SlotRange {
                    ue: 2,
                    start: 3,
                    end: 5
                }
            ]
        );
        assert_eq!(
            t.backhaul,
            vec![
                SlotRange {
                    ue: 0,
                    start: 0,
                    end: 1
                },
                SlotRange {
                    ue: 2,
                    start: 1,
                    end: 5
                }
            ]
        );
    }

    #[test]
    fn overlap_is_detected() {
        let t = Timeline {
            access: vec![vec![
                SlotRange {
                    ue: 0,
                    start: 0,
                    end: 3,
                },
                SlotRange {
                    ue: 1,
                    start: 2,
                    end: 4,
                },
            ]],
            backhaul: vec![],
        };
        assert!(matches!(
            verify_timeline(&t, &frame(10, 10)),
            Err(Error::Consistency(_))
        ));

        let t = Timeline {
            access: vec![vec![]],
            backhaul: vec![
                SlotRange {
                    ue: 0,
                    start: 0,
                    end: 3,
                },
                SlotRange {
                    ue: 1,
                    start: 0,
                    end: 1,
                },
            ],
        };
        assert!(verify_timeline(&t, &frame(10, 10)).is_err());
    }

    #[test]
    fn double_association_is_detected() {
        let t = Timeline {
            access: vec![
                vec![SlotRange {
                    ue: 0,
                    start: 0,
                    end: 1,
                }],
                vec![SlotRange {
                    ue: 0,
                    start: 0,
                    end: 1,
                }],
            ],
            backhaul: vec![],
        };
        assert!(verify_timeline(&t, &frame(10, 10)).is_err());
    }

    #[test]
    fn budget_overflow_is_an_error() {
        let r = ScheduleResult {
            algorithm: Algorithm::Msnr,
            frame: frame(4, 10),
            num_sbs: 1,
            ues: vec![ue(Some(0), 3, 1), ue(Some(0), 2, 1)],
        };
        assert!(matches!(materialize_timeline(&r, &r.frame), Err(Error::Consistency(_))));
    }

    #[test]
    fn full_mqr_result_verifies() {
        let s = generate_scenario(&ScenarioConfig::default()).unwrap();
        let f = FrameConfig::default();
        let r = mqr_schedule(&s, &RadioConfig::default(), &f).unwrap();
        let t = materialize_timeline(&r, &f).unwrap();
        let scheduled: usize = t.access.iter().map(Vec::len).sum();
        assert_eq!(scheduled, t.backhaul.len());
        assert!(scheduled > 0);
    }
}
