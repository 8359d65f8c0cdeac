//! Switched-plant integration: per-leg conduction, common-mode voltage,
//! diode turn-on and the fixed-step state update.
//!
//! Devices are ideal: zero drop, zero on-resistance, instantaneous
//! switching, no dead time. A gated healthy IGBT pair ties its pole to a
//! rail for both current directions (IGBT one way, antiparallel diode
//! the other); with the commanded device open-circuited only the diodes
//! remain, so the pole follows the current sign, and a leg at exactly
//! zero current with no gated path stays open until a diode is forward
//! biased.

use crate::error::{CoreError, Result};
use crate::sim::fault::{apply_faults, FaultScenario, GatePermissions};
use crate::sim::params::SimParams;
use crate::sim::pwm::pwm_compare;
use crate::sim::state::SimState;

/// Leg output voltage relative to the negative DC rail, by
/// conduction-path enumeration. Total on its inputs; the zero-current
/// open-leg case (resolved by [`step`] with the full common-mode
/// picture) falls on the upper-diode side here.
pub fn leg_pole_voltage(
    upper_cmd: bool,
    fault_upper: bool,
    fault_lower: bool,
    phase_current: f64,
    u_dc: f64,
) -> f64 {
    let upper_perm = upper_cmd && !fault_upper;
    let lower_perm = !upper_cmd && !fault_lower;
    if upper_perm {
        u_dc
    } else if lower_perm {
        0.0
    } else if phase_current >= 0.0 {
        u_dc // D1 carries
    } else {
        0.0 // D2 carries
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LegConduction {
    /// Pole clamped to a rail. `gated` legs (healthy commanded IGBT
    /// pair) conduct both directions; diode-tied legs block at the
    /// current zero crossing.
    Tied { v: f64, positive: bool, gated: bool },
    /// No forward-biased path; current held at zero.
    Open,
}

fn classify_leg(upper_perm: bool, lower_perm: bool, i: f64, u_dc: f64) -> LegConduction {
    if upper_perm {
        LegConduction::Tied { v: u_dc, positive: true, gated: true }
    } else if lower_perm {
        LegConduction::Tied { v: 0.0, positive: false, gated: true }
    } else if i > 0.0 {
        LegConduction::Tied { v: u_dc, positive: true, gated: false }
    } else if i < 0.0 {
        LegConduction::Tied { v: 0.0, positive: false, gated: false }
    } else {
        LegConduction::Open
    }
}

/// Common-mode voltage of the conducting legs; `None` when no leg
/// conducts. Derived from the three-wire constraint: the conducting
/// subset satisfies Σ di/dt = 0, giving v_nN = Σ(v_kN − e_k)/m.
fn common_mode(legs: &[LegConduction; 3], emf: &[f64; 3]) -> Option<f64> {
    let mut sum = 0.0;
    let mut m = 0;
    for k in 0..3 {
        if let LegConduction::Tied { v, .. } = legs[k] {
            sum += v - emf[k];
            m += 1;
        }
    }
    (m > 0).then(|| sum / m as f64)
}

/// Closes diodes on open legs until a fixed point: an open leg's D1
/// turns on when its prospective floating pole voltage exceeds the DC
/// link, D2 when it falls below the negative rail. From the all-open
/// state conduction can only start pairwise through a line-line path.
fn resolve_diode_turn_on(legs: &mut [LegConduction; 3], emf: &[f64; 3], u_dc: f64) {
    for _ in 0..3 {
        let mut changed = false;
        match common_mode(legs, emf) {
            None => {
                for j in 0..3 {
                    for k in 0..3 {
                        if j != k
                            && legs[j] == LegConduction::Open
                            && legs[k] == LegConduction::Open
                            && emf[j] - emf[k] > u_dc
                        {
                            legs[j] = LegConduction::Tied { v: u_dc, positive: true, gated: false };
                            legs[k] = LegConduction::Tied { v: 0.0, positive: false, gated: false };
                            changed = true;
                        }
                    }
                }
            }
            Some(v_nn) => {
                for k in 0..3 {
                    if legs[k] == LegConduction::Open {
                        let v_float = emf[k] + v_nn;
                        if v_float > u_dc {
                            legs[k] = LegConduction::Tied { v: u_dc, positive: true, gated: false };
                            changed = true;
                        } else if v_float < 0.0 {
                            legs[k] = LegConduction::Tied { v: 0.0, positive: false, gated: false };
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Advances the state by one `sim_step` using the modulation held in
/// `state.ctrl` (the controller itself runs only at control instants).
pub fn step(state: &SimState, params: &SimParams, scenario: &FaultScenario) -> Result<SimState> {
    let dt = params.sim_step;
    let emf = params.emf(state.grid_angle(params));
    let cmd = pwm_compare(state.ctrl.modulation, state.carrier_phase);
    let perms: GatePermissions = apply_faults(cmd, scenario, state.t);

    let mut legs = [LegConduction::Open; 3];
    for k in 0..3 {
        legs[k] = classify_leg(perms[2 * k], perms[2 * k + 1], state.i_abc[k], state.u_dc);
    }
    resolve_diode_turn_on(&mut legs, &emf, state.u_dc);

    // AC side: L·di_k/dt = e_k − v_kN + v_nN for conducting legs.
    let v_nn = common_mode(&legs, &emf);
    let mut i_new = state.i_abc;
    let mut forced_zero = [false; 3];
    for k in 0..3 {
        match legs[k] {
            LegConduction::Tied { v, gated, .. } => {
                let di = (emf[k] - v + v_nn.unwrap_or(0.0)) / params.filter_inductance;
                i_new[k] = state.i_abc[k] + dt * di;
                // Ideal diode blocking: a diode-tied leg cannot carry
                // current through zero; hold it at the crossing.
                if !gated && state.i_abc[k] != 0.0 && i_new[k] * state.i_abc[k] < 0.0 {
                    forced_zero[k] = true;
                }
            }
            LegConduction::Open => forced_zero[k] = true,
        }
    }

    // Re-impose the three-wire constraint around clamped legs.
    let n_zero = forced_zero.iter().filter(|z| **z).count();
    match n_zero {
        0 => {}
        1 => {
            let z = forced_zero.iter().position(|z| *z).unwrap();
            i_new[z] = 0.0;
            let (a, b) = match z {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let s = (i_new[a] + i_new[b]) / 2.0;
            i_new[a] -= s;
            i_new[b] -= s;
        }
        _ => i_new = [0.0; 3], // a single leg cannot close a loop
    }

    // DC side: C·du/dt = (current into the positive rail) − u/R.
    let mut i_pos = 0.0;
    for k in 0..3 {
        if let LegConduction::Tied { positive: true, .. } = legs[k] {
            i_pos += state.i_abc[k];
        }
    }
    let du = (i_pos - state.u_dc / params.load_resistance) / params.dc_capacitance;
    let u_new = (state.u_dc + dt * du).max(0.0);

    let step_index = state.step_index + 1;
    let t = step_index as f64 * dt;
    let next = SimState {
        t,
        step_index,
        i_abc: i_new,
        u_dc: u_new,
        ctrl: state.ctrl,
        carrier_phase: (t * params.switching_freq + state.carrier_offset).rem_euclid(1.0),
        carrier_offset: state.carrier_offset,
    };
    if !next.is_finite() {
        return Err(CoreError::NonFinite { t, what: "currents or DC-link voltage" });
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::switch::SwitchId;

    #[test]
    fn table_conduction_rows() {
        let u = 100.0;
        // i >= 0, upper commanded, upper faulted: D1 carries
        assert_eq!(leg_pole_voltage(true, true, false, 5.0, u), u);
        // i < 0, upper commanded, healthy: upper IGBT carries
        assert_eq!(leg_pole_voltage(true, false, false, -5.0, u), u);
        // i < 0, upper commanded but faulted, lower off: D2 carries
        assert_eq!(leg_pole_voltage(true, true, false, -5.0, u), 0.0);
        // i >= 0, lower commanded, healthy: lower IGBT carries
        assert_eq!(leg_pole_voltage(false, false, false, 5.0, u), 0.0);
        // i >= 0, lower commanded but faulted: D1 forced
        assert_eq!(leg_pole_voltage(false, false, true, 5.0, u), u);
        // i < 0, lower commanded: D2 carries either way
        assert_eq!(leg_pole_voltage(false, false, false, -5.0, u), 0.0);
        assert_eq!(leg_pole_voltage(false, false, true, -5.0, u), 0.0);
    }

    #[test]
    fn all_zero_equilibrium() {
        // Zero grid EMF, zero currents, zero DC link, every gate blocked.
        let mut params = SimParams::default();
        params.grid_voltage = 0.0;
        params.initial_udc = 0.0;
        let scenario = FaultScenario::at(0.0, &SwitchId::ALL);
        let mut state = SimState::initial(&params, 0.0);
        for _ in 0..1000 {
            state = step(&state, &params, &scenario).unwrap();
        }
        assert_eq!(state.i_abc, [0.0; 3]);
        assert_eq!(state.u_dc, 0.0);
    }

    #[test]
    fn diode_pair_turns_on_above_dc_link() {
        // All gates blocked, line-line EMF above u_dc: a pair conducts.
        let params = SimParams::default();
        let scenario = FaultScenario::at(0.0, &SwitchId::ALL);
        let mut state = SimState::initial(&params, 0.0);
        state.u_dc = 10.0; // far below the 56.6 V line-line peak
        state.t = 0.005; // θ = 90°, e_a at +peak, b and c negative
        state.step_index = (state.t / params.sim_step).round() as u64;

        let next = step(&state, &params, &scenario).unwrap();
        assert!(next.i_abc[0] > 0.0, "phase a should start conducting");
        assert!((next.i_abc[0] + next.i_abc[1] + next.i_abc[2]).abs() < 1e-12);
    }

    #[test]
    fn open_leg_clamp_holds_zero_current() {
        // Blocked bridge with EMF below the DC link: nothing conducts.
        let params = SimParams::default();
        let scenario = FaultScenario::at(0.0, &SwitchId::ALL);
        let mut state = SimState::initial(&params, 0.0);
        state.u_dc = 200.0;
        state.t = 0.005;
        state.step_index = (state.t / params.sim_step).round() as u64;

        let next = step(&state, &params, &scenario).unwrap();
        assert_eq!(next.i_abc, [0.0; 3]);
    }
}
