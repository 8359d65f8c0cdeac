//! Fault codes F0–F7 and their switch-set bijection.

use std::fmt;

use crate::error::{CoreError, Result};
use crate::sim::{SwitchId, SwitchSet};

/// Fault code: 0 = normal, 1–6 = single-switch faults in wire order,
/// 7 = the SaP+SbP double fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaultLabel(u8);

pub const NUM_LABELS: usize = 8;

impl FaultLabel {
    pub const NORMAL: FaultLabel = FaultLabel(0);

    pub fn new(value: u8) -> Result<FaultLabel> {
        if value < NUM_LABELS as u8 {
            Ok(FaultLabel(value))
        } else {
            Err(CoreError::MalformedFile(format!("label {value} outside 0..7")))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = FaultLabel> {
        (0..NUM_LABELS as u8).map(FaultLabel)
    }

    /// The faulted switches this code stands for.
    pub fn switches(self) -> SwitchSet {
        match self.0 {
            0 => SwitchSet::EMPTY,
            1 => [SwitchId::SaP].into_iter().collect(),
            2 => [SwitchId::SaN].into_iter().collect(),
            3 => [SwitchId::SbP].into_iter().collect(),
            4 => [SwitchId::SbN].into_iter().collect(),
            5 => [SwitchId::ScP].into_iter().collect(),
            6 => [SwitchId::ScN].into_iter().collect(),
            _ => [SwitchId::SaP, SwitchId::SbP].into_iter().collect(),
        }
    }

    /// The code of a switch set, if it has one.
    pub fn from_switch_set(set: SwitchSet) -> Option<FaultLabel> {
        FaultLabel::all().find(|label| label.switches() == set)
    }
}

impl fmt::Display for FaultLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}
