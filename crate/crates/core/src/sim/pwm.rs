//! Triangular-carrier PWM comparison.

/// Commanded upper-gate states, one per leg; the lower gate is always
/// the complement (ideal complementary switching, no dead time).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCommand {
    pub upper_on: [bool; 3],
}

/// Symmetric triangle over one carrier period, phase in [0, 1):
/// +1 at phase 0, −1 at phase 0.5, back to +1.
pub fn triangle(carrier_phase: f64) -> f64 {
    let p = carrier_phase.rem_euclid(1.0);
    if p < 0.5 {
        1.0 - 4.0 * p
    } else {
        4.0 * p - 3.0
    }
}

/// Compares the held modulation against the carrier:
/// `upper_on[k] = modulation[k] >= triangle(carrier_phase)`.
pub fn pwm_compare(modulation: [f64; 3], carrier_phase: f64) -> GateCommand {
    let tri = triangle(carrier_phase);
    GateCommand {
        upper_on: [
            modulation[0] >= tri,
            modulation[1] >= tri,
            modulation[2] >= tri,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Duty ratio of the upper gate over one carrier period, sampled at
    /// cell midpoints (avoids the isolated carrier extrema).
    fn duty(m: f64, n: usize) -> f64 {
        let on = (0..n)
            .filter(|&k| {
                let p = (k as f64 + 0.5) / n as f64;
                pwm_compare([m, 0.0, 0.0], p).upper_on[0]
            })
            .count();
        on as f64 / n as f64
    }

    #[test]
    fn saturation_and_symmetry() {
        assert_eq!(duty(1.0, 80), 1.0);
        assert_eq!(duty(-1.0, 80), 0.0);
        assert!((duty(0.0, 80) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn duty_monotone_in_modulation() {
        let mut prev = 0.0;
        for i in 0..=20 {
            let m = -1.0 + i as f64 * 0.1;
            let d = duty(m, 400);
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn triangle_sweeps_full_range() {
        assert_eq!(triangle(0.0), 1.0);
        assert_eq!(triangle(0.5), -1.0);
        assert!((triangle(0.25) - 0.0).abs() < 1e-12);
        assert!((triangle(1.25) - 0.0).abs() < 1e-12);
    }
}
