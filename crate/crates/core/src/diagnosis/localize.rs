use crate::diagnosis::window::WindowReport;
use crate::sim::{SwitchId, SwitchSet};

/// Default debounce: two consecutive windows (40 ms) to confirm or
/// retire a switch.
pub const DEFAULT_DEBOUNCE: u8 = 2;

/// Debounced per-switch confirmation over a stream of window reports.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationState {
    hits: [u8; 6],
    misses: [u8; 6],
    confirmed: SwitchSet,
    debounce: u8,
}

impl LocalizationState {
    pub fn new(debounce: u8) -> LocalizationState {
        assert!(debounce >= 1);
        LocalizationState {
            hits: [0; 6],
            misses: [0; 6],
            confirmed: SwitchSet::EMPTY,
            debounce,
        }
    }

    pub fn confirmed(&self) -> SwitchSet {
        self.confirmed
    }

    /// Feeds the next (time-ordered) window report. A switch is
    /// confirmed after showing up in `debounce` consecutive windows and
    /// retired after being absent for as many.
    pub fn update(&mut self, report: &WindowReport) -> SwitchSet {
        for sw in SwitchId::ALL {
            let i = sw.index();
            if report.fault_switches.contains(sw) {
                self.hits[i] = (self.hits[i] + 1).min(self.debounce);
                self.misses[i] = 0;
                if self.hits[i] >= self.debounce {
                    self.confirmed.insert(sw);
                }
            } else {
                self.misses[i] = (self.misses[i] + 1).min(self.debounce);
                self.hits[i] = 0;
                if self.misses[i] >= self.debounce {
                    self.confirmed.remove(sw);
                }
            }
        }
        self.confirmed
    }
}

/// Runs a whole report sequence through a fresh state.
pub fn localize(reports: &[WindowReport], debounce: u8) -> (LocalizationState, SwitchSet) {
    let mut state = LocalizationState::new(debounce);
    for report in reports {
        state.update(report);
    }
    let confirmed = state.confirmed();
    (state, confirmed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnosis::decide::DiagnosisResult;
    use crate::diagnosis::window::aggregate_window;
    use crate::features::FaultLabel;

    fn report_with(switch_labels: &[u8]) -> WindowReport {
        // a window dominated by the given labels plus normal filler
        let mut results = Vec::new();
        for &l in switch_labels {
            results.extend(vec![DiagnosisResult::Label(FaultLabel::new(l).unwrap()); 60]);
        }
        results.resize(200.max(results.len()), DiagnosisResult::Label(FaultLabel::NORMAL));
        aggregate_window(&results, 0.1)
    }

    fn set(switches: &[SwitchId]) -> SwitchSet {
        switches.iter().copied().collect()
    }

    #[test]
    fn two_consecutive_windows_confirm() {
        let mut state = LocalizationState::new(2);
        assert!(state.update(&report_with(&[1])).is_empty());
        assert_eq!(state.update(&report_with(&[1])), set(&[SwitchId::SaP]));
    }

    #[test]
    fn non_consecutive_hits_never_confirm() {
        let reports = [report_with(&[1]), report_with(&[]), report_with(&[1])];
        let (_, confirmed) = localize(&reports, 2);
        assert!(confirmed.is_empty());
    }

    #[test]
    fn confirmed_switch_retires_after_absences() {
        let mut state = LocalizationState::new(2);
        state.update(&report_with(&[4]));
        state.update(&report_with(&[4]));
        assert_eq!(state.confirmed(), set(&[SwitchId::SbN]));
        state.update(&report_with(&[]));
        assert_eq!(state.confirmed(), set(&[SwitchId::SbN]), "one absence keeps it");
        state.update(&report_with(&[]));
        assert!(state.confirmed().is_empty(), "two absences retire it");
    }

    #[test]
    fn composite_label_confirms_both_switches() {
        let reports = [report_with(&[1, 3, 7]), report_with(&[7])];
        let (_, confirmed) = localize(&reports, 2);
        assert_eq!(confirmed, set(&[SwitchId::SaP, SwitchId::SbP]));
    }

    #[test]
    fn superset_windows_never_retire() {
        let mut state = LocalizationState::new(2);
        state.update(&report_with(&[2]));
        state.update(&report_with(&[2]));
        let before = state.confirmed();
        // next window's switches are a superset
        state.update(&report_with(&[2, 5]));
        assert!(state.confirmed().contains(SwitchId::SaN));
        assert_eq!(state.confirmed().intersection(before), before);
    }
}
