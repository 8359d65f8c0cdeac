//! Outer DC-voltage PI loop and inner per-phase proportional-resonant
//! current loops, executed at the control frequency.

use crate::sim::params::SimParams;
use crate::sim::state::SimState;

/// Runs one control-loop update and returns the per-phase modulation in
/// [−1, 1]. Mutates the controller accumulators inside `state`.
///
/// The outer PI turns the DC-link voltage error into a current-amplitude
/// reference; the inner loops track `i_ref · sin(θ_k)` (unity power
/// factor) with a proportional term plus a resonator at the grid
/// frequency, on top of a grid-EMF feedforward.
pub fn pr_controller(state: &mut SimState, params: &SimParams) -> [f64; 3] {
    let theta = state.grid_angle(params);
    let tc = params.control_period();
    let g = &params.gains;

    // Voltage loop with clamped integrator.
    let err_v = params.vdc_ref - state.u_dc;
    state.ctrl.v_integrator += g.ki_v * err_v * tc;
    state.ctrl.v_integrator = state.ctrl.v_integrator.clamp(-g.i_max, g.i_max);
    let i_ref = (g.kp_v * err_v + state.ctrl.v_integrator).clamp(-g.i_max, g.i_max);

    let emf = params.emf(theta);
    let omega = params.omega();
    let (s, c) = (omega * tc).sin_cos();
    let third = 2.0 * std::f64::consts::PI / 3.0;

    let mut modulation = [0.0; 3];
    for k in 0..3 {
        let theta_k = theta - k as f64 * third;
        let i_star = i_ref * theta_k.sin();
        let err_i = i_star - state.i_abc[k];

        let [z1, z2] = state.ctrl.resonant[k];
        let u_pr = g.kp_i * err_i + z1;

        // Exact rotation update of the undamped resonator. The error
        // injection is gated off while the modulator is saturated or
        // the leg is clearly not responding (blocked by a fault), and
        // the state magnitude is hard-bounded.
        let gated = state.ctrl.saturated[k] || err_i.abs() > g.aw_err_limit;
        let inject = if gated { 0.0 } else { g.kr_i * err_i };
        let mut z1n = c * z1 - s * z2 + inject * s / omega;
        let mut z2n = s * z1 + c * z2 + inject * (1.0 - c) / omega;
        let norm = (z1n * z1n + z2n * z2n).sqrt();
        if norm > g.z_max {
            z1n *= g.z_max / norm;
            z2n *= g.z_max / norm;
        }
        state.ctrl.resonant[k] = [z1n, z2n];

        let v_star = emf[k] - u_pr;
        let m_raw = 2.0 * v_star / state.u_dc.max(1.0);
        state.ctrl.saturated[k] = m_raw.abs() > 1.0;
        modulation[k] = m_raw.clamp(-1.0, 1.0);
    }
    modulation
}
