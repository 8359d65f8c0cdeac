//! Sequential vs data-parallel throughput on the three bulk paths:
//! campaign simulation, batch gradients and bulk evaluation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vsr_core::diagnosis::evaluate;
use vsr_core::exec::{map_indices, ExecMode};
use vsr_core::features::{build_labeled_samples, FeatureRegime, LabeledSample};
use vsr_core::mlp::{batch_gradient, train, MlpModel, TrainConfig, DEFAULT_HIDDEN};
use vsr_core::sim::{simulate, FaultScenario, SimParams, SwitchId};

const MODES: [(&str, ExecMode); 2] =
    [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn scenario_bank() -> Vec<FaultScenario> {
    vec![
        FaultScenario::healthy(),
        FaultScenario::at(0.02, &[SwitchId::SaP]),
        FaultScenario::at(0.02, &[SwitchId::SbN]),
        FaultScenario::at(0.02, &[SwitchId::SaP, SwitchId::SbP]),
    ]
}

fn bench_campaign(c: &mut Criterion) {
    let params = SimParams::default();
    let scenarios = scenario_bank();
    let mut group = c.benchmark_group("campaign_simulate");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| {
                map_indices(mode, scenarios.len(), |i| {
                    simulate(&scenarios[i], 0.06, &params, i as u64).unwrap().len()
                })
            })
        });
    }
    group.finish();
}

fn training_fixture() -> (MlpModel, Vec<Vec<f64>>, Vec<f64>) {
    let params = SimParams::default();
    let scenario = FaultScenario::at(0.01, &[SwitchId::SaP]);
    let trace = simulate(&scenario, 0.08, &params, 0).unwrap();
    let samples =
        build_labeled_samples(&trace, &scenario, FeatureRegime::SyntheticTransient).unwrap();
    let (model, _) = train(
        &samples,
        &[],
        FeatureRegime::SyntheticTransient,
        &DEFAULT_HIDDEN,
        &TrainConfig { max_epochs: 1, ..TrainConfig::default() },
    )
    .unwrap();
    let xs: Vec<Vec<f64>> = samples.iter().map(|s| model.norm.apply(&s.features)).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.label.value() as f64).collect();
    (model, xs, ys)
}

fn bench_batch_gradient(c: &mut Criterion) {
    let (model, xs, ys) = training_fixture();
    let batch: Vec<usize> = (0..xs.len()).collect();
    let mut group = c.benchmark_group("batch_gradient");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| batch_gradient(&model, &xs, &ys, &batch, mode))
        });
    }
    group.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let params = SimParams::default();
    let scenario = FaultScenario::at(0.01, &[SwitchId::SbP]);
    let trace = simulate(&scenario, 0.08, &params, 1).unwrap();
    let samples: Vec<LabeledSample> =
        build_labeled_samples(&trace, &scenario, FeatureRegime::SyntheticTransient).unwrap();
    let (model, _, _) = training_fixture();

    let mut group = c.benchmark_group("evaluate");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| evaluate(&model, &samples, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_campaign, bench_batch_gradient, bench_evaluate);
criterion_main!(benches);
