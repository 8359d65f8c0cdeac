//! Fixed-step switched-circuit simulator of the three-phase PWM boost
//! rectifier with PR control, carrier-comparison gating and per-switch
//! open-circuit fault injection.

mod controller;
mod fault;
mod observability;
mod params;
mod plant;
mod pwm;
mod scenario_file;
mod simulate;
mod state;
mod switch;
mod trace;

pub use controller::pr_controller;
pub use fault::{apply_faults, FaultEntry, FaultScenario, GatePermissions};
pub use observability::observable_switches;
pub use params::{ControllerGains, SimParams};
pub use plant::{leg_pole_voltage, step};
pub use pwm::{pwm_compare, triangle, GateCommand};
pub use scenario_file::{load_scenario, parse_scenario_str};
pub use simulate::simulate;
pub use state::{ControllerState, SimState};
pub use switch::{SwitchId, SwitchSet};
pub use trace::{Trace, TraceRecord};
