use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// One of the six IGBTs of the rectifier bridge, upper/lower per phase leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwitchId {
    SaP,
    SaN,
    SbP,
    SbN,
    ScP,
    ScN,
}

impl SwitchId {
    /// All six switches in wire order (SaP, SaN, SbP, SbN, ScP, ScN).
    pub const ALL: [SwitchId; 6] = [
        SwitchId::SaP,
        SwitchId::SaN,
        SwitchId::SbP,
        SwitchId::SbN,
        SwitchId::ScP,
        SwitchId::ScN,
    ];

    /// Index in wire order, 0..6.
    pub fn index(self) -> usize {
        match self {
            SwitchId::SaP => 0,
            SwitchId::SaN => 1,
            SwitchId::SbP => 2,
            SwitchId::SbN => 3,
            SwitchId::ScP => 4,
            SwitchId::ScN => 5,
        }
    }

    /// Phase leg, 0 = a, 1 = b, 2 = c.
    pub fn phase(self) -> usize {
        self.index() / 2
    }

    /// True for the upper switch of a leg.
    pub fn is_upper(self) -> bool {
        self.index() % 2 == 0
    }

    pub fn from_index(i: usize) -> Option<SwitchId> {
        SwitchId::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            SwitchId::SaP => "SaP",
            SwitchId::SaN => "SaN",
            SwitchId::SbP => "SbP",
            SwitchId::SbN => "SbN",
            SwitchId::ScP => "ScP",
            SwitchId::ScN => "ScN",
        }
    }
}

impl fmt::Display for SwitchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SwitchId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SwitchId::ALL
            .iter()
            .copied()
            .find(|sw| sw.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CoreError::InvalidConfig(format!("unknown switch name '{s}'")))
    }
}

/// A set of switches backed by a 6-bit mask, in wire order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SwitchSet(u8);

impl SwitchSet {
    pub const EMPTY: SwitchSet = SwitchSet(0);

    pub fn insert(&mut self, sw: SwitchId) {
        self.0 |= 1 << sw.index();
    }

    pub fn remove(&mut self, sw: SwitchId) {
        self.0 &= !(1 << sw.index());
    }

    pub fn contains(self, sw: SwitchId) -> bool {
        self.0 & (1 << sw.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: SwitchSet) -> SwitchSet {
        SwitchSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SwitchSet) -> SwitchSet {
        SwitchSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = SwitchId> {
        SwitchId::ALL.into_iter().filter(move |sw| self.contains(*sw))
    }
}

impl FromIterator<SwitchId> for SwitchSet {
    fn from_iter<I: IntoIterator<Item = SwitchId>>(iter: I) -> Self {
        let mut set = SwitchSet::EMPTY;
        for sw in iter {
            set.insert(sw);
        }
        set
    }
}

impl fmt::Display for SwitchSet {
    /// `+`-joined names in wire order, empty set prints as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut first = true;
        for sw in self.iter() {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{sw}")?;
            first = false;
        }
        Ok(())
    }
}
