use crate::error::{CoreError, Result};

/// Electrical and timing parameters of the rectifier bench.
///
/// Defaults model a 40 V / 50 Hz grid feeding a 100 V, 16 Ω DC link
/// through 500 µH filter inductors, switching at 12.8 kHz with the
/// control loop and recorder running at 25.6 kHz.
#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// Grid voltage, line-to-line RMS (V).
    pub grid_voltage: f64,
    /// Grid frequency (Hz).
    pub grid_freq: f64,
    /// Per-phase filter inductance (H).
    pub filter_inductance: f64,
    /// DC-link capacitance (F).
    pub dc_capacitance: f64,
    /// DC-side load resistance (Ω).
    pub load_resistance: f64,
    /// DC-link voltage setpoint (V).
    pub vdc_ref: f64,
    /// PWM carrier frequency (Hz).
    pub switching_freq: f64,
    /// Control/recording frequency (Hz); must be 2 × switching_freq.
    pub control_freq: f64,
    /// Integration step (s); must divide the control period evenly.
    pub sim_step: f64,
    /// DC-link voltage at t = 0 (V). Defaults to the diode-bridge
    /// precharge level sqrt(2) × grid_voltage.
    pub initial_udc: f64,
    pub gains: ControllerGains,
}

/// Outer voltage-loop PI and inner current-loop PR gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerGains {
    /// Voltage-loop proportional gain (A/V).
    pub kp_v: f64,
    /// Voltage-loop integral gain (A/(V·s)).
    pub ki_v: f64,
    /// Current-reference amplitude clamp (A).
    pub i_max: f64,
    /// Current-loop proportional gain (V/A).
    pub kp_i: f64,
    /// Current-loop resonant gain (V/(A·s)).
    pub kr_i: f64,
    /// Anti-windup: resonant injection is gated off while the phase's
    /// current error exceeds this (A). Errors this large mean the leg
    /// is not responding (blocked or saturated), not mistracking.
    pub aw_err_limit: f64,
    /// Hard bound on the resonant state magnitude (V).
    pub z_max: f64,
}

impl Default for ControllerGains {
    fn default() -> Self {
        ControllerGains {
            kp_v: 6.0,
            ki_v: 300.0,
            i_max: 50.0,
            kp_i: 2.5,
            kr_i: 800.0,
            aw_err_limit: 5.0,
            z_max: 4.0,
        }
    }
}

impl Default for SimParams {
    fn default() -> Self {
        let grid_voltage = 40.0;
        let control_freq = 25.6e3;
        SimParams {
            grid_voltage,
            grid_freq: 50.0,
            filter_inductance: 500e-6,
            dc_capacitance: 7000e-6,
            load_resistance: 16.0,
            vdc_ref: 100.0,
            switching_freq: 12.8e3,
            control_freq,
            // 40 steps per control period, 80 per carrier period.
            sim_step: 1.0 / (control_freq * 40.0),
            initial_udc: consts_sqrt2() * grid_voltage,
            gains: ControllerGains::default(),
        }
    }
}

fn consts_sqrt2() -> f64 {
    std::f64::consts::SQRT_2
}

impl SimParams {
    /// Checks the type invariants: all strictly positive,
    /// control_freq = 2 × switching_freq, sim_step divides the control
    /// period evenly.
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("grid_voltage", self.grid_voltage),
            ("grid_freq", self.grid_freq),
            ("filter_inductance", self.filter_inductance),
            ("dc_capacitance", self.dc_capacitance),
            ("load_resistance", self.load_resistance),
            ("vdc_ref", self.vdc_ref),
            ("switching_freq", self.switching_freq),
            ("control_freq", self.control_freq),
            ("sim_step", self.sim_step),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::InvalidParameter(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if (self.control_freq - 2.0 * self.switching_freq).abs() > 1e-9 * self.control_freq {
            return Err(CoreError::InvalidParameter(format!(
                "control_freq must be 2 x switching_freq (got {} vs {})",
                self.control_freq, self.switching_freq
            )));
        }
        let ratio = self.control_period() / self.sim_step;
        if (ratio - ratio.round()).abs() > 1e-6 || ratio.round() < 1.0 {
            return Err(CoreError::InvalidParameter(format!(
                "sim_step {} must divide the control period {} evenly",
                self.sim_step,
                self.control_period()
            )));
        }
        Ok(())
    }

    pub fn control_period(&self) -> f64 {
        1.0 / self.control_freq
    }

    /// Integration steps per control period.
    pub fn steps_per_control(&self) -> u64 {
        (self.control_period() / self.sim_step).round() as u64
    }

    /// Grid angular frequency (rad/s).
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.grid_freq
    }

    /// Phase EMF amplitude: sqrt(2) × grid_voltage / sqrt(3).
    pub fn emf_amplitude(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.grid_voltage / 3f64.sqrt()
    }

    /// Phase EMFs at grid angle `theta`. Phase a is sin(theta), b and c
    /// lag/lead by 120°.
    pub fn emf(&self, theta: f64) -> [f64; 3] {
        let e = self.emf_amplitude();
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [
            e * theta.sin(),
            e * (theta - third).sin(),
            e * (theta + third).sin(),
        ]
    }
}
