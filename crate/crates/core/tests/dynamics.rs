// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use num_complex::Complex64;

use spinbath::eigensolver::{lanczos_ground, LanczosOptions};
use spinbath::observables::{concurrence, correlation, reduce_to_pair, EnergyMeter};
use spinbath::output::{summary_csv, timeseries_csv};
use spinbath::propagator::ChebyshevPropagator;
use spinbath::runner::run_sweep_outputs;
use spinbath::{
    preset, run_scenario, run_sweep, Axis, CouplingSpec, ModelInstance, ModelRng, ScenarioConfig,
    SpinState, Topology,
};

fn small_glass(n_env: usize, t_max: f64) -> ScenarioConfig {
    let mut c = preset("fig1a").unwrap();
    c.n_env = n_env;
    c.t_max = t_max;
    c
}

#[test]
fn decoupled_pair_oscillates_analytically() {
    let mut c = small_glass(6, 40.0);
    c.delta = CouplingSpec::fixed(0.0, &Axis::ALL).unwrap();
    c.dt_out = 0.25;
    let out = run_scenario(&c).unwrap();
    assert_eq!(out.records.len(), 161);
    for r in &out.records {
        assert!((r.corr + 0.25).abs() <= 1e-10, "t = {}", r.t);
        assert!(
            (r.concurrence - r.t.sin().abs()).abs() <= 1e-9,
            "t = {}",
            r.t
        );
    }
}

#[test]
fn steps_compose() {
    let model = small_glass(8, 1.0).build_model().unwrap();
    let psi = random_state(model.n_total(), 3);
    let mut twice = psi.clone();
    let mut half = ChebyshevPropagator::for_model(&model, 0.35, 1e-15).unwrap();
    half.step(&mut twice).unwrap();
    half.step(&mut twice).unwrap();
    let mut once = psi;
    ChebyshevPropagator::for_model(&model, 0.7, 1e-15)
        .unwrap()
        .step(&mut once)
        .unwrap();
    assert!(max_diff(twice.amplitudes(), once.amplitudes()) < 1e-13);
}

#[test]
fn evolution_is_unitary_and_conserves_energy() {
    let model = small_glass(8, 1.0).build_model().unwrap();
    let meter = EnergyMeter::new(&model).unwrap();
    let mut psi = SpinState::basis(model.n_total(), 0b10).unwrap();
    let start = meter.measure(&psi).unwrap();
    let mut prop = ChebyshevPropagator::for_model(&model, 1.0, 1e-15).unwrap();
    let mut moved: f64 = 0.0;
    for _ in 0..200 {
        prop.step(&mut psi).unwrap();
        let e = meter.measure(&psi).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(((e.total - start.total) / start.total).abs() <= 1e-9);
        assert!((e.central + e.environment + e.interaction - e.total).abs() < 1e-12);
        moved = moved.max((e.central - start.central).abs());
    }
    assert!(moved > 1e-3, "energy must flow between components");
}

#[test]
fn repeated_runs_are_bit_identical() {
    let c = small_glass(6, 20.0);
    let (a, b) = (run_scenario(&c).unwrap(), run_scenario(&c).unwrap());
    assert_eq!(timeseries_csv(&a.records), timeseries_csv(&b.records));
    assert_eq!(summary_csv(&a.summary), summary_csv(&b.summary));
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let c = small_glass(6, 10.0);
    let seeds = [3, 1, 4, 1];
    let serial = run_sweep_outputs(&c, &seeds, 1).unwrap();
    let parallel = run_sweep_outputs(&c, &seeds, 4).unwrap();
    for (s, p) in serial.iter().zip(&parallel) {
        let (s, p) = (s.as_ref().unwrap(), p.as_ref().unwrap());
        assert_eq!(timeseries_csv(&s.records), timeseries_csv(&p.records));
        assert_eq!(s.summary, p.summary);
    }
    let single = run_sweep(&c, &[4], 2).unwrap().remove(0).unwrap();
    let direct = run_scenario(&ScenarioConfig { seed: 4, ..c })
        .unwrap()
        .summary;
    assert_eq!(single, direct);
}

#[test]
fn sweep_reports_failures_per_seed() {
    let mut c = small_glass(6, 2.0);
    c.lanczos_tol = 1e-30;
    let results = run_sweep(&c, &[1, 2], 2).unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert_eq!(r.unwrap_err().exit_code(), 3);
    }
}

fn min_correlation(model: &ModelInstance, env_ground: &SpinState, t_max: usize) -> f64 {
    let mut psi = SpinState::zeros(model.n_total()).unwrap();
    for (e, &a) in env_ground.amplitudes().iter().enumerate() {
        psi.amplitudes_mut()[(e << 2) | 0b10] = a;
    }
    let mut prop = ChebyshevPropagator::for_model(model, 1.0, 1e-15).unwrap();
    let mut lowest = correlation(&psi);
    for _ in 0..t_max {
        prop.step(&mut psi).unwrap();
        lowest = lowest.min(correlation(&psi));
    }
    lowest
}

#[test]
fn degenerate_environment_ground_choice_is_immaterial() {
    let omega = CouplingSpec::sign_flip(0.075, &[Axis::Z]).unwrap();
    let delta = CouplingSpec::uniform(-0.15, 0.15, &Axis::ALL).unwrap();
    let model = ModelInstance::build(-1.0, &Topology::all_pairs(10), &omega, &delta, 2).unwrap();
    let options = LanczosOptions::default();
    let env = model.env_terms_local();
    let a = lanczos_ground(&env, 10, &options, &mut ModelRng::new(1, 2)).unwrap();
    let b = lanczos_ground(&env, 10, &options, &mut ModelRng::new(2, 2)).unwrap();
    assert!((a.energy - b.energy).abs() < 1e-10);
    let overlap: Complex64 = a
        .vector
        .amplitudes()
        .iter()
        .zip(b.vector.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    assert!(overlap.norm() < 0.99, "the two choices must differ");
    let (ma, mb) = (
        min_correlation(&model, &a.vector, 300),
        min_correlation(&model, &b.vector, 300),
    );
    assert!((ma - mb).abs() <= 0.05, "{ma} vs {mb}");
}

#[test]
fn reduced_matrix_stays_physical_during_evolution() {
    let model = small_glass(6, 1.0).build_model().unwrap();
    let mut psi = random_state(model.n_total(), 9);
    let mut prop = ChebyshevPropagator::for_model(&model, 2.0, 1e-15).unwrap();
    for _ in 0..20 {
        prop.step(&mut psi).unwrap();
        let rho = reduce_to_pair(&psi);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-12));
        let c = concurrence(&rho).unwrap();
        assert!((0.0..=1.0).contains(&c));
        assert!((-0.75 - 1e-12..=0.25 + 1e-12).contains(&correlation(&psi)));
    }
}
