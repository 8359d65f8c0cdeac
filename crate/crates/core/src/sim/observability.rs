//! Which switch faults can manifest at a given grid angle.
//!
//! With unity-power-factor references, an upper-switch fault only
//! distorts the phase's negative half cycle and a lower-switch fault
//! the positive one, so the fundamental period splits into 60° regions
//! with a fixed observable triple each.

use crate::sim::switch::{SwitchId, SwitchSet};

/// Switches whose open-circuit fault is observable at this reference
/// angle: the upper switch of a phase when its healthy reference
/// current is negative, the lower when positive, neither at an exact
/// zero crossing.
pub fn observable_switches(reference_angle: f64) -> SwitchSet {
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let mut set = SwitchSet::EMPTY;
    for phase in 0..3 {
        let s = (reference_angle - phase as f64 * third).sin();
        let (upper, lower) = (
            SwitchId::from_index(2 * phase).unwrap(),
            SwitchId::from_index(2 * phase + 1).unwrap(),
        );
        if s < 0.0 {
            set.insert(upper);
        } else if s > 0.0 {
            set.insert(lower);
        }
    }
    set
}
