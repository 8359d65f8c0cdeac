//! Scripted fault-injection campaigns: a list of scenarios simulated
//! with randomized fault-onset angles, extracted under one or more
//! feature regimes and split into train/val/test datasets.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use vsr_core::exec::{map_slice, ExecMode};
use vsr_core::features::{
    build_labeled_samples, save_dataset, stratified_split, FaultLabel, FeatureRegime,
    LabeledSample, DEFAULT_WINDOW_LEN,
};
use vsr_core::mlp::{OptimizerKind, TrainConfig};
use vsr_core::sim::{simulate, FaultScenario, SimParams, SwitchId, SwitchSet, Trace};
use vsr_core::CoreError;

use crate::error::{FdxError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignFile {
    pub seed: u64,
    /// Default trace length (s).
    pub duration: f64,
    pub train_fraction: f64,
    pub val_fraction: f64,
    /// Regime tags: `transient`, `synthetic-transient`,
    /// `time-series` (default window) or `time-series:<len>`.
    pub regimes: Vec<String>,
    #[serde(default)]
    pub train: TrainSection,
    /// Simulator parameter overrides by field name.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub scenarios: Vec<ScenarioSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub switches: Vec<String>,
    /// Number of trace instances; onsets are jittered across one
    /// fundamental period unless pinned.
    #[serde(default = "one")]
    pub count: u32,
    pub onset: Option<f64>,
    pub duration: Option<f64>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub loss_goal: f64,
    pub max_epochs: usize,
    pub batch_size: usize,
    pub optimizer: String,
    pub patience: usize,
    pub hidden: Vec<usize>,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        TrainSection {
            learning_rate: d.learning_rate,
            loss_goal: d.loss_goal,
            max_epochs: d.max_epochs,
            batch_size: d.batch_size,
            optimizer: "momentum".into(),
            patience: d.patience,
            hidden: vsr_core::mlp::DEFAULT_HIDDEN.to_vec(),
        }
    }
}

impl TrainSection {
    pub fn to_config(&self, seed: u64, execution: ExecMode) -> Result<TrainConfig> {
        let optimizer = match self.optimizer.as_str() {
            "momentum" => OptimizerKind::Momentum,
            "adam" => OptimizerKind::Adam,
            other => return Err(FdxError::Config(format!("unknown optimizer '{other}'"))),
        };
        Ok(TrainConfig {
            learning_rate: self.learning_rate,
            loss_goal: self.loss_goal,
            max_epochs: self.max_epochs,
            batch_size: self.batch_size,
            seed,
            optimizer,
            patience: self.patience,
            execution,
        })
    }
}

pub fn parse_regime(tag: &str) -> Result<FeatureRegime> {
    if let Some(len) = tag.strip_prefix("time-series:") {
        let window_len: usize = len
            .parse()
            .map_err(|_| FdxError::Config(format!("bad time-series window '{len}'")))?;
        if window_len == 0 {
            return Err(FdxError::Config("time-series window must be >= 1".into()));
        }
        return Ok(FeatureRegime::TimeSeries { window_len });
    }
    match tag {
        "transient" => Ok(FeatureRegime::Transient),
        "synthetic-transient" => Ok(FeatureRegime::SyntheticTransient),
        "time-series" => Ok(FeatureRegime::TimeSeries { window_len: DEFAULT_WINDOW_LEN }),
        other => Err(FdxError::Config(format!("unknown regime '{other}'"))),
    }
}

/// One resolved simulation of the campaign.
#[derive(Debug, Clone)]
pub struct ScenarioInstance {
    pub scenario: FaultScenario,
    pub duration: f64,
    pub sim_seed: u64,
}

/// A validated, instance-expanded campaign.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub seed: u64,
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub regimes: Vec<FeatureRegime>,
    pub train: TrainSection,
    pub params: SimParams,
    pub instances: Vec<ScenarioInstance>,
}

fn apply_param_overrides(params: &mut SimParams, overrides: &BTreeMap<String, f64>) -> Result<()> {
    for (key, &value) in overrides {
        match key.as_str() {
            "grid_voltage" => {
                params.grid_voltage = value;
                params.initial_udc = std::f64::consts::SQRT_2 * value;
            }
            "grid_freq" => params.grid_freq = value,
            "filter_inductance" => params.filter_inductance = value,
            "dc_capacitance" => params.dc_capacitance = value,
            "load_resistance" => params.load_resistance = value,
            "vdc_ref" => params.vdc_ref = value,
            "switching_freq" => params.switching_freq = value,
            "control_freq" => params.control_freq = value,
            "sim_step" => params.sim_step = value,
            "initial_udc" => params.initial_udc = value,
            other => return Err(FdxError::Config(format!("unknown param override '{other}'"))),
        }
    }
    Ok(())
}

impl CampaignFile {
    pub fn parse(text: &str) -> Result<CampaignFile> {
        toml::from_str(text).map_err(|e| FdxError::Config(format!("bad campaign config: {e}")))
    }

    pub fn load(path: &Path) -> Result<CampaignFile> {
        CampaignFile::parse(&std::fs::read_to_string(path)?)
    }

    /// Validates and expands scenario counts into concrete instances
    /// with jittered onsets.
    pub fn resolve(&self) -> Result<Campaign> {
        if !(self.duration > 0.0) {
            return Err(FdxError::Config("duration must be positive".into()));
        }
        let mut params = SimParams::default();
        apply_param_overrides(&mut params, &self.params)?;
        params.validate().map_err(FdxError::Core)?;

        let regimes: Result<Vec<FeatureRegime>> =
            self.regimes.iter().map(|t| parse_regime(t)).collect();
        let regimes = regimes?;
        if regimes.is_empty() {
            return Err(FdxError::Config("at least one regime required".into()));
        }

        // every fault class must be producible by some scenario
        let mut covered = [false; 8];
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0xCA_3A_16);
        let mut instances = Vec::new();
        for (s_idx, section) in self.scenarios.iter().enumerate() {
            let switches: Result<Vec<SwitchId>> = section
                .switches
                .iter()
                .map(|name| name.parse::<SwitchId>().map_err(FdxError::Core))
                .collect();
            let switches = switches?;
            let set: SwitchSet = switches.iter().copied().collect();
            if FaultLabel::from_switch_set(set).is_none() {
                return Err(FdxError::Core(CoreError::UncodableFaultSet(set.to_string())));
            }
            for label in FaultLabel::all() {
                let sub = label.switches().intersection(set);
                if sub == label.switches() {
                    covered[label.index()] = true;
                }
            }

            let duration = section.duration.unwrap_or(self.duration);
            for instance in 0..section.count {
                let onset = match section.onset {
                    Some(o) => o,
                    // jitter over one fundamental period so the onset
                    // angle sweeps every observability region
                    None => 0.3 * duration + rng.gen_range(0.0..1.0) / params.grid_freq,
                };
                let scenario = if switches.is_empty() {
                    FaultScenario::healthy()
                } else {
                    FaultScenario::at(onset, &switches)
                };
                scenario.validate().map_err(FdxError::Core)?;
                instances.push(ScenarioInstance {
                    scenario,
                    duration,
                    sim_seed: self.seed
                        .wrapping_mul(1_000_003)
                        .wrapping_add((s_idx as u64) << 16)
                        .wrapping_add(instance as u64),
                });
            }
        }
        if let Some(missing) = covered.iter().position(|c| !c) {
            return Err(FdxError::Config(format!(
                "no scenario produces class F{missing}; every trained class needs one"
            )));
        }

        // fraction sanity, so errors surface before simulating
        for f in [self.train_fraction, self.val_fraction] {
            if !(f > 0.0 && f < 1.0) {
                return Err(FdxError::Config(format!("split fraction {f} outside (0,1)")));
            }
        }
        if self.train_fraction + self.val_fraction > 1.0 {
            return Err(FdxError::Config("split fractions sum beyond 1".into()));
        }

        Ok(Campaign {
            seed: self.seed,
            train_fraction: self.train_fraction,
            val_fraction: self.val_fraction,
            regimes,
            train: self.train.clone(),
            params,
            instances,
        })
    }
}

/// Train/val/test samples for one regime.
#[derive(Debug)]
pub struct RegimeSplit {
    pub regime: FeatureRegime,
    pub train: Vec<LabeledSample>,
    pub val: Vec<LabeledSample>,
    pub test: Vec<LabeledSample>,
}

/// Simulated traces plus per-regime splits.
pub struct CampaignData {
    pub traces: Vec<(ScenarioInstance, Trace)>,
    pub splits: Vec<RegimeSplit>,
}

/// Runs every instance and assembles the labeled splits.
pub fn generate(campaign: &Campaign, mode: ExecMode) -> Result<CampaignData> {
    let traces: Vec<vsr_core::error::Result<Trace>> =
        map_slice(mode, &campaign.instances, |inst| {
            simulate(&inst.scenario, inst.duration, &campaign.params, inst.sim_seed)
        });
    let mut paired = Vec::with_capacity(traces.len());
    for (inst, trace) in campaign.instances.iter().zip(traces) {
        paired.push((inst.clone(), trace.map_err(FdxError::Core)?));
    }

    let mut splits = Vec::new();
    for &regime in &campaign.regimes {
        let per_trace: Vec<vsr_core::error::Result<Vec<LabeledSample>>> =
            map_slice(mode, &paired, |(inst, trace)| {
                build_labeled_samples(trace, &inst.scenario, regime)
            });
        let mut pool = Vec::new();
        for chunk in per_trace {
            pool.extend(chunk.map_err(FdxError::Core)?);
        }
        let (train, val, test) = stratified_split(
            pool,
            campaign.train_fraction,
            campaign.val_fraction,
            campaign.seed,
        )
        .map_err(FdxError::Core)?;
        splits.push(RegimeSplit { regime, train, val, test });
    }
    Ok(CampaignData { traces: paired, splits })
}

/// Writes the three split files per regime into `out_dir`; returns the
/// paths in (train, val, test) order per regime.
pub fn write_splits(
    data: &CampaignData,
    out_dir: &Path,
    meta: &str,
) -> Result<Vec<(FeatureRegime, [PathBuf; 3])>> {
    std::fs::create_dir_all(out_dir)?;
    let mut out = Vec::new();
    for split in &data.splits {
        let stem = split.regime.tag();
        let paths = [
            out_dir.join(format!("{stem}_train.csv")),
            out_dir.join(format!("{stem}_val.csv")),
            out_dir.join(format!("{stem}_test.csv")),
        ];
        save_dataset(&paths[0], split.regime, &split.train, Some(meta)).map_err(FdxError::Core)?;
        save_dataset(&paths[1], split.regime, &split.val, Some(meta)).map_err(FdxError::Core)?;
        save_dataset(&paths[2], split.regime, &split.test, Some(meta)).map_err(FdxError::Core)?;
        out.push((split.regime, paths));
    }
    Ok(out)
}

/// The standard eight-class campaign: healthy, every single switch and
/// the SaP+SbP pair, `count` traces each (double weight on the pair so
/// the composite class is not starved).
pub fn standard_campaign_file(seed: u64, duration: f64, count: u32) -> CampaignFile {
    let mut scenarios: Vec<ScenarioSection> = Vec::new();
    scenarios.push(ScenarioSection {
        switches: vec![],
        count,
        onset: None,
        duration: None,
    });
    for sw in SwitchId::ALL {
        scenarios.push(ScenarioSection {
            switches: vec![sw.name().to_string()],
            count,
            onset: None,
            duration: None,
        });
    }
    scenarios.push(ScenarioSection {
        switches: vec!["SaP".into(), "SbP".into()],
        count: count * 2,
        onset: None,
        duration: None,
    });
    CampaignFile {
        seed,
        duration,
        train_fraction: 0.05,
        val_fraction: 0.05,
        regimes: vec!["transient".into(), "synthetic-transient".into()],
        train: TrainSection::default(),
        params: BTreeMap::new(),
        scenarios,
    }
}
