//! Superframe slot arithmetic.
//!
//! A superframe is a scheduling phase of length `t_s` followed by `N`
//! (access) or `M` (backhaul) transmission slots of length `delta`.

use crate::error::{Error, Result};

/// Relative distance within which a required slot count is treated as the
/// nearest integer before rounding.
pub const SLOT_SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConfig {
    /// Scheduling-phase duration, s.
    pub t_s: f64,
    /// Slot duration, s.
    pub delta: f64,
    /// Access slots per superframe.
    pub n_access: u64,
    /// Backhaul slots per superframe.
    pub m_backhaul: u64,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            t_s: 850e-6,
            delta: 18e-6,
            n_access: 2000,
            m_backhaul: 2000,
        }
    }
}

impl FrameConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_s >= 0.0 && self.t_s.is_finite()) {
            return Err(Error::config("t_s", format!("must be >= 0, got {}", self.t_s)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("delta", format!("must be > 0, got {}", self.delta)));
        }
        if self.n_access == 0 {
            return Err(Error::config("n_access", "at least one access slot is required"));
        }
        if self.m_backhaul == 0 {
            return Err(Error::config("m_backhaul", "at least one backhaul slot is required"));
        }
        Ok(())
    }

    pub fn access_superframe(&self) -> f64 {
        self.t_s + self.n_access as f64 * self.delta
    }

    pub fn backhaul_superframe(&self) -> f64 {
        self.t_s + self.m_backhaul as f64 * self.delta
    }
}

/// Slot requirement of one UE on one (SBS, backhaul) path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotDemand {
    pub required_access: f64,
    pub alloc_access: u64,
    pub required_backhaul: f64,
    pub alloc_backhaul: u64,
}

impl SlotDemand {
    pub fn new(qos: f64, access_rate: f64, backhaul_rate: f64, frame: &FrameConfig) -> Result<Self> {
        let required_access = required_access_slots(qos, access_rate, frame)?;
        let required_backhaul = required_backhaul_slots(qos, backhaul_rate, frame)?;
        Ok(Self {
            required_access,
            alloc_access: ceil_slots(required_access),
            required_backhaul,
            alloc_backhaul: ceil_slots(required_backhaul),
        })
    }

    /// Whether each link fits in its own frame at all.
    pub fn fits(&self, frame: &FrameConfig) -> bool {
        self.alloc_access <= frame.n_access && self.alloc_backhaul <= frame.m_backhaul
    }
}

fn required_slots(qos: f64, rate: f64, superframe: f64, delta: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::InfeasibleLink { rate });
    }
    if !(qos > 0.0 && qos.is_finite()) {
        return Err(Error::Domain {
            name: "qos",
            value: qos,
            domain: "(0, inf) bit/s",
        });
    }
    Ok(qos * superframe / (rate * delta))
}

/// Real-valued number of access slots needed to carry `qos` at `rate`.
pub fn required_access_slots(qos: f64, rate: f64, frame: &FrameConfig) -> Result<f64> {
    required_slots(qos, rate, frame.access_superframe(), frame.delta)
}

/// Real-valued number of backhaul slots needed to carry `qos` at `rate`.
pub fn required_backhaul_slots(qos: f64, rate: f64, frame: &FrameConfig) -> Result<f64> {
    required_slots(qos, rate, frame.backhaul_superframe(), frame.delta)
}

/// Ceiling with floating-point noise around integers removed first.
pub fn ceil_slots(required: f64) -> u64 {
    let nearest = required.round();
    let snapped = if (required - nearest).abs() <= SLOT_SNAP_TOLERANCE * nearest.abs().max(1.0) {
        nearest
    } else {
        required
    };
    if snapped >= u64::MAX as f64 {
        u64::MAX
    } else {
        snapped.ceil().max(0.0) as u64
    }
}

pub fn alloc_access_slots(qos: f64, rate: f64, frame: &FrameConfig) -> Result<u64> {
    required_access_slots(qos, rate, frame).map(ceil_slots)
}

pub fn alloc_backhaul_slots(qos: f64, rate: f64, frame: &FrameConfig) -> Result<u64> {
    required_backhaul_slots(qos, rate, frame).map(ceil_slots)
}

/// Access-link throughput of a UE holding `slots` of the `N` access slots.
pub fn access_throughput(rate: f64, slots: u64, frame: &FrameConfig) -> Result<f64> {
    if slots > frame.n_access {
        return Err(Error::BudgetViolation {
            used: slots,
            budget: frame.n_access,
        });
    }
    Ok(rate * slots as f64 * frame.delta / frame.access_superframe())
}

/// Backhaul throughput of a UE holding `slots` of the `M` backhaul slots.
pub fn backhaul_throughput(rate: f64, slots: u64, frame: &FrameConfig) -> Result<f64> {
    if slots > frame.m_backhaul {
        return Err(Error::BudgetViolation {
            used: slots,
            budget: frame.m_backhaul,
        });
    }
    Ok(rate * slots as f64 * frame.delta / frame.backhaul_superframe())
}

/// Redistributes an SBS's whole access frame proportionally to the
/// current allocations: each entry becomes `floor(N * T / sum(T))`.
pub fn update_access_slots(allocs: &[u64], n_access: u64) -> Result<Vec<u64>> {
    if allocs.is_empty() {
        return Err(Error::Precondition("no allocations to update".into()));
    }
    if allocs.contains(&0) {
        return Err(Error::Precondition("allocations must be positive".into()));
    }
    let total: u128 = allocs.iter().map(|&t| t as u128).sum();
    if total > n_access as u128 {
        return Err(Error::Precondition(format!(
            "allocations sum to {total}, more than the {n_access} available slots"
        )));
    }
    Ok(allocs
        .iter()
        .map(|&t| (n_access as u128 * t as u128 / total) as u64)
        .collect())
}

/// A UE is served when both of its links carry at least its QoS demand.
pub fn is_served(c_access: f64, c_backhaul: f64, qos: f64) -> bool {
    c_access >= qos && c_backhaul >= qos
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn default_frame() -> FrameConfig {
        FrameConfig::default()
    }

    #[test]
    fn required_access_slot_examples() {
        let f = default_frame();
        let t = required_access_slots(2e9, 4e9, &f).unwrap();
        assert!((t - 1_023.611_111_111_111).abs() < 1e-9);
        assert_eq!(alloc_access_slots(2e9, 4e9, &f).unwrap(), 1024);

        let unit = FrameConfig {
            t_s: 0.0,
            n_access: 1,
            ..f
        };
        assert_eq!(required_access_slots(3e9, 3e9, &unit).unwrap(), 1.0);
        assert_eq!(alloc_access_slots(3e9, 3e9, &unit).unwrap(), 1);

        let doubled = required_access_slots(4e9, 4e9, &f).unwrap();
        assert!((doubled - 2.0 * t).abs() < 1e-9);
    }

    #[test]
    fn backhaul_slot_example() {
        let f = default_frame();
        let t = required_backhaul_slots(5e9, 6e11, &f).unwrap();
        assert!((t - 17.060_185_185_185_185).abs() < 1e-9);
        assert_eq!(alloc_backhaul_slots(5e9, 6e11, &f).unwrap(), 18);
    }

    #[test]
    fn nonpositive_rate_is_infeasible() {
        let f = default_frame();
        assert!(matches!(
            required_access_slots(1e9, 0.0, &f),
            Err(Error::InfeasibleLink { .. })
        ));
        assert!(matches!(
            alloc_backhaul_slots(1e9, -1.0, &f),
            Err(Error::InfeasibleLink { .. })
        ));
    }

    #[test]
    fn ceiling_snaps_float_noise() {
        assert_eq!(ceil_slots(7.0), 7);
        assert_eq!(ceil_slots(7.0 * (1.0 + 1e-13)), 7);
        assert_eq!(ceil_slots(7.0 * (1.0 - 1e-13)), 7);
        assert_eq!(ceil_slots(7.001), 8);
        assert_eq!(ceil_slots(0.2), 1);
    }

    #[test]
    fn throughput_examples() {
        let f = default_frame();
        assert_eq!(access_throughput(4e9, 0, &f).unwrap(), 0.0);
        let c = access_throughput(4e9, 1024, &f).unwrap();
        assert!((c - 2_000_759_837.177_747_6).abs() < 1e-3);
        assert!(c >= 2e9);
        assert!(matches!(
            access_throughput(4e9, 2001, &f),
            Err(Error::BudgetViolation {
                used: 2001,
                budget: 2000
            })
        ));
    }

    #[test]
    fn throughput_is_linear() {
        let f = default_frame();
        let a = access_throughput(3e9, 100, &f).unwrap();
        assert_eq!(access_throughput(3e9, 200, &f).unwrap(), 2.0 * a);
        assert_eq!(access_throughput(6e9, 100, &f).unwrap(), 2.0 * a);
        let b = backhaul_throughput(3e11, 10, &f).unwrap();
        assert_eq!(backhaul_throughput(3e11, 20, &f).unwrap(), 2.0 * b);
    }

    #[test]
    fn update_examples() {
        assert_eq!(update_access_slots(&[500, 300], 2000).unwrap(), vec![1250, 750]);
        assert_eq!(update_access_slots(&[2000], 2000).unwrap(), vec![2000]);
        assert_eq!(update_access_slots(&[1, 1, 1], 4).unwrap(), vec![1, 1, 1]);
        assert!(update_access_slots(&[1500, 600], 2000).is_err());
        assert!(update_access_slots(&[], 2000).is_err());
    }

    #[test]
    fn served_examples() {
        assert!(is_served(2.1e9, 2.1e9, 2e9));
        assert!(!is_served(2.1e9, 1.9e9, 2e9));
        assert!(!is_served(1.9e9, 2.1e9, 2e9));
        assert!(is_served(2e9, 2e9, 2e9));
    }

    #[test]
    fn frame_validation() {
        assert!(default_frame().validate().is_ok());
        let bad = FrameConfig {
            delta: 0.0,
            ..default_frame()
        };
        assert!(matches!(bad.validate(), Err(Error::Config { field: "delta", .. })));
        let bad = FrameConfig {
            m_backhaul: 0,
            ..default_frame()
        };
        assert!(matches!(
            bad.validate(),
            Err(Error::Config {
                field: "m_backhaul",
                ..
            })
        ));
    }

    proptest! {
        #[test]
        fn ceiling_allocation_meets_qos(
            qos in 1e8f64..1e10,
            rate in 1e9f64..1e12,
            n in 1u64..5000,
            t_s in 0.0f64..2e-3,
        ) {
            let f = FrameConfig { t_s, delta: 18e-6, n_access: n, m_backhaul: n };
            let t = alloc_access_slots(qos, rate, &f).unwrap();
            prop_assume!(t <= n);
            // exact check in rational terms: rate*T*delta >= qos*superframe
            let c = access_throughput(rate, t, &f).unwrap();
            prop_assert!(c >= qos * (1.0 - 1e-9));
            let tb = alloc_backhaul_slots(qos, rate, &f).unwrap();
            prop_assert!(backhaul_throughput(rate, tb, &f).unwrap() >= qos * (1.0 - 1e-9));
        }

        #[test]
        fn update_never_shrinks_or_overflows(
            allocs in proptest::collection::vec(1u64..300, 1..20),
            slack in 0u64..3000,
        ) {
            let n = allocs.iter().sum::<u64>() + slack;
            let out = update_access_slots(&allocs, n).unwrap();
            prop_assert!(out.iter().sum::<u64>() <= n);
            for (a, b) in allocs.iter().zip(&out) {
                prop_assert!(b >= a);
            }
        }
    }
}
