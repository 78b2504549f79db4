// SPDX-License-Identifier: Apache-2.0

//! Scenario orchestration: model, initial state, evolution, bookkeeping.

use rayon::prelude::*;

use crate::eigensolver::{full_ground_reference, prepare_initial_state, LanczosOptions};
use crate::error::{Error, Result};
use crate::observables::{concurrence, correlation_from_rho, purity, reduce_to_pair, EnergyMeter};
use crate::propagator::ChebyshevPropagator;
use crate::scenario::ScenarioConfig;
use crate::state::SpinState;

/// Observables at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub corr: f64,
    pub concurrence: f64,
    pub e_total: f64,
    pub e_c: f64,
    pub e_e: f64,
    pub e_int: f64,
    pub purity: f64,
    pub norm_err: f64,
}

/// Table-style summary of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    /// `⟨Ψ|H|Ψ⟩` at t = 0; conserved by the evolution.
    pub e_psi: f64,
    /// Ground-state energy of the whole system.
    pub e0: f64,
    pub min_corr: f64,
    /// First output time at which `min_corr` is attained.
    pub t_at_min: f64,
    /// `⟨S₁·S₂⟩` in the ground state of the whole system.
    pub corr0: f64,
    pub max_concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<TimeSeriesRecord>,
    pub summary: RunSummary,
}

fn lanczos_options(config: &ScenarioConfig) -> LanczosOptions {
    LanczosOptions::with_tol(config.lanczos_tol)
}

pub fn measure(t: f64, state: &SpinState, meter: &EnergyMeter) -> Result<TimeSeriesRecord> {
    let rho = reduce_to_pair(state);
    let energy = meter.measure(state)?;
    Ok(TimeSeriesRecord {
        t,
        corr: correlation_from_rho(&rho),
        concurrence: concurrence(&rho)?,
        e_total: energy.total,
        e_c: energy.central,
        e_e: energy.environment,
        e_int: energy.interaction,
        purity: purity(&rho),
        norm_err: (state.norm() - 1.0).abs(),
    })
}

/// `(E₀, ⟨S₁·S₂⟩₀)` for the scenario's model.
pub fn ground_reference(config: &ScenarioConfig) -> Result<(f64, f64)> {
    let inner = || {
        let model = config.build_model()?;
        full_ground_reference(&model, &lanczos_options(config))
    };
    inner().map_err(|e| e.in_scenario(config.label()))
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<RunOutput> {
    run_scenario_observed(config, |_| {})
}

/// As [`run_scenario`], calling `observe` on every record as it is produced.
pub fn run_scenario_observed(
    config: &ScenarioConfig,
    observe: impl FnMut(&TimeSeriesRecord),
) -> Result<RunOutput> {
    run_inner(config, observe).map_err(|e| e.in_scenario(config.label()))
}

fn run_inner(
    config: &ScenarioConfig,
    mut observe: impl FnMut(&TimeSeriesRecord),
) -> Result<RunOutput> {
    let model = config.build_model()?;
    let options = lanczos_options(config);
    let mut state = prepare_initial_state(&model, &options)?;
    let (e0, corr0) = full_ground_reference(&model, &options)?;

    let meter = EnergyMeter::new(&model)?;
    let mut propagator = ChebyshevPropagator::for_model(&model, config.dt_out, config.cheb_tol)?;
    let steps = config.output_steps();
    let mut records = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        if k > 0 {
            propagator.step(&mut state)?;
        }
        let record = measure(k as f64 * config.dt_out, &state, &meter)?;
        observe(&record);
        records.push(record);
    }
    let summary = summarize(&records, e0, corr0);
    Ok(RunOutput { records, summary })
}

pub fn summarize(records: &[TimeSeriesRecord], e0: f64, corr0: f64) -> RunSummary {
    let mut min = (f64::INFINITY, f64::NAN);
    let mut max_concurrence: f64 = 0.0;
    for r in records {
        if r.corr < min.0 {
            min = (r.corr, r.t);
        }
        max_concurrence = max_concurrence.max(r.concurrence);
    }
    RunSummary {
        e_psi: records.first().map_or(f64::NAN, |r| r.e_total),
        e0,
        min_corr: min.0,
        t_at_min: min.1,
        corr0,
        max_concurrence,
    }
}

fn with_seed(base: &ScenarioConfig, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        seed,
        ..base.clone()
    }
}

fn sweep<T: Send>(
    base: &ScenarioConfig,
    seeds: &[u64],
    workers: usize,
    job: impl Fn(&ScenarioConfig) -> Result<T> + Sync,
) -> Result<Vec<Result<T>>> {
    if seeds.is_empty() {
        return Err(Error::Config("sweep needs at least one seed".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| job(&with_seed(base, seed)))
            .collect()
    }))
}

/// One summary per seed, in seed order. Failures are reported per seed.
pub fn run_sweep(
    base: &ScenarioConfig,
    seeds: &[u64],
    workers: usize,
) -> Result<Vec<Result<RunSummary>>> {
    sweep(base, seeds, workers, |c| run_scenario(c).map(|o| o.summary))
}

/// Like [`run_sweep`] but keeps every time series.
pub fn run_sweep_outputs(
    base: &ScenarioConfig,
    seeds: &[u64],
    workers: usize,
) -> Result<Vec<Result<RunOutput>>> {
    sweep(base, seeds, workers, run_scenario)
}
