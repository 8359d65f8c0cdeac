//! Scenario config files: `key=value` parameter overrides plus
//! `fault=<switch>,<onset_s>[,<clear_s>]` entries. `#` starts a comment.

use std::path::Path;

use crate::error::{CoreError, Result};
use crate::sim::fault::{FaultEntry, FaultScenario};
use crate::sim::params::SimParams;

/// Parses a scenario config, starting from default parameters.
pub fn parse_scenario_str(text: &str) -> Result<(SimParams, FaultScenario)> {
    let mut params = SimParams::default();
    let mut scenario = FaultScenario::healthy();
    let mut grid_voltage_set = false;
    let mut initial_udc_set = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CoreError::InvalidConfig(format!("line {}: expected key=value, got '{line}'", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_num = |v: &str| -> Result<f64> {
            v.parse().map_err(|_| {
                CoreError::InvalidConfig(format!("line {}: bad number '{v}'", lineno + 1))
            })
        };
        match key {
            "fault" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() < 2 || parts.len() > 3 {
                    return Err(CoreError::InvalidConfig(format!(
                        "line {}: fault takes <switch>,<onset_s>[,<clear_s>]",
                        lineno + 1
                    )));
                }
                scenario.faults.push(FaultEntry {
                    switch: parts[0].parse()?,
                    onset_time: parse_num(parts[1])?,
                    clear_time: if parts.len() == 3 { Some(parse_num(parts[2])?) } else { None },
                });
            }
            "grid_voltage" => {
                params.grid_voltage = parse_num(value)?;
                grid_voltage_set = true;
            }
            "grid_freq" => params.grid_freq = parse_num(value)?,
            "filter_inductance" => params.filter_inductance = parse_num(value)?,
            "dc_capacitance" => params.dc_capacitance = parse_num(value)?,
            "load_resistance" => params.load_resistance = parse_num(value)?,
            "vdc_ref" => params.vdc_ref = parse_num(value)?,
            "switching_freq" => params.switching_freq = parse_num(value)?,
            "control_freq" => params.control_freq = parse_num(value)?,
            "sim_step" => params.sim_step = parse_num(value)?,
            "initial_udc" => {
                params.initial_udc = parse_num(value)?;
                initial_udc_set = true;
            }
            "kp_v" => params.gains.kp_v = parse_num(value)?,
            "ki_v" => params.gains.ki_v = parse_num(value)?,
            "i_max" => params.gains.i_max = parse_num(value)?,
            "kp_i" => params.gains.kp_i = parse_num(value)?,
            "kr_i" => params.gains.kr_i = parse_num(value)?,
            other => {
                return Err(CoreError::InvalidConfig(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }

    // keep the precharge level consistent with an overridden grid
    if grid_voltage_set && !initial_udc_set {
        params.initial_udc = std::f64::consts::SQRT_2 * params.grid_voltage;
    }

    params.validate()?;
    scenario.validate()?;
    Ok((params, scenario))
}

pub fn load_scenario(path: &Path) -> Result<(SimParams, FaultScenario)> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario_str(&text)
}
