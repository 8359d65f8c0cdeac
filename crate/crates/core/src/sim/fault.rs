use crate::error::{CoreError, Result};
use crate::sim::pwm::GateCommand;
use crate::sim::switch::{SwitchId, SwitchSet};

/// One open-circuit fault: the switch stops conducting at `onset_time`
/// and, if `clear_time` is set, recovers afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultEntry {
    pub switch: SwitchId,
    pub onset_time: f64,
    pub clear_time: Option<f64>,
}

impl FaultEntry {
    pub fn covers(&self, t: f64) -> bool {
        t >= self.onset_time && self.clear_time.map_or(true, |c| t < c)
    }
}

/// Which IGBTs are open-circuited and when.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaultScenario {
    pub faults: Vec<FaultEntry>,
}

impl FaultScenario {
    pub fn healthy() -> Self {
        FaultScenario::default()
    }

    /// Permanent faults on the given switches from `onset` on.
    pub fn at(onset: f64, switches: &[SwitchId]) -> Self {
        FaultScenario {
            faults: switches
                .iter()
                .map(|&switch| FaultEntry {
                    switch,
                    onset_time: onset,
                    clear_time: None,
                })
                .collect(),
        }
    }

    /// Checks invariants: onset < clear when present, no duplicate switches.
    pub fn validate(&self) -> Result<()> {
        let mut seen = SwitchSet::EMPTY;
        for f in &self.faults {
            if seen.contains(f.switch) {
                return Err(CoreError::InvalidConfig(format!(
                    "duplicate fault entry for {}",
                    f.switch
                )));
            }
            seen.insert(f.switch);
            if let Some(c) = f.clear_time {
                if !(f.onset_time < c) {
                    return Err(CoreError::InvalidConfig(format!(
                        "fault on {} has onset {} >= clear {}",
                        f.switch, f.onset_time, c
                    )));
                }
            }
            if !f.onset_time.is_finite() {
                return Err(CoreError::InvalidConfig("non-finite onset time".into()));
            }
        }
        Ok(())
    }

    /// Switches whose fault covers time `t`.
    pub fn active_at(&self, t: f64) -> SwitchSet {
        self.faults
            .iter()
            .filter(|f| f.covers(t))
            .map(|f| f.switch)
            .collect()
    }

    /// All switches that fault at some point.
    pub fn switch_set(&self) -> SwitchSet {
        self.faults.iter().map(|f| f.switch).collect()
    }

    pub fn is_healthy(&self) -> bool {
        self.faults.is_empty()
    }
}

/// Effective per-switch conduction permissions, wire order
/// SaP, SaN, SbP, SbN, ScP, ScN.
pub type GatePermissions = [bool; 6];

/// Masks the commanded gates with the faults active at time `t`.
///
/// A switch's permission is false iff a fault covers `t`; otherwise it
/// mirrors the command (lower gate is the complement of the upper).
pub fn apply_faults(cmd: GateCommand, scenario: &FaultScenario, t: f64) -> GatePermissions {
    let active = scenario.active_at(t);
    let mut perms = [false; 6];
    for leg in 0..3 {
        perms[2 * leg] = cmd.upper_on[leg];
        perms[2 * leg + 1] = !cmd.upper_on[leg];
    }
    for sw in active.iter() {
        perms[sw.index()] = false;
    }
    perms
}
