use crate::sim::params::SimParams;

/// Internal controller accumulators: voltage-loop integrator, per-phase
/// resonant states, the modulation held between control instants and
/// the per-phase saturation flags used for anti-windup.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControllerState {
    /// Voltage-loop integral term (A).
    pub v_integrator: f64,
    /// Per-phase resonant states (z1 is the resonant voltage output).
    pub resonant: [[f64; 2]; 3],
    /// Modulation commanded at the last control instant, held (ZOH).
    pub modulation: [f64; 3],
    /// True while the phase's modulation is clamped at ±1.
    pub saturated: [bool; 3],
}

/// Instantaneous rectifier state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    /// Simulation time (s), always `step_index * sim_step`.
    pub t: f64,
    /// Integration step counter.
    pub step_index: u64,
    /// Grid-to-converter phase currents (A).
    pub i_abc: [f64; 3],
    /// DC-link voltage (V).
    pub u_dc: f64,
    pub ctrl: ControllerState,
    /// Carrier phase in [0, 1).
    pub carrier_phase: f64,
    /// Initial carrier phase (seed perturbation), in [0, 1).
    pub carrier_offset: f64,
}

impl SimState {
    /// State at t = 0: zero currents, precharged DC link, idle controller.
    pub fn initial(params: &SimParams, carrier_offset: f64) -> SimState {
        let carrier_offset = carrier_offset.rem_euclid(1.0);
        SimState {
            t: 0.0,
            step_index: 0,
            i_abc: [0.0; 3],
            u_dc: params.initial_udc,
            ctrl: ControllerState::default(),
            carrier_phase: carrier_offset,
            carrier_offset,
        }
    }

    /// Grid reference angle ω·t (rad), not wrapped.
    pub fn grid_angle(&self, params: &SimParams) -> f64 {
        params.omega() * self.t
    }

    pub fn is_finite(&self) -> bool {
        self.i_abc.iter().all(|i| i.is_finite()) && self.u_dc.is_finite()
    }
}
