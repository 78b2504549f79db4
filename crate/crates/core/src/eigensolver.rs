// SPDX-License-Identifier: Apache-2.0

//! Lanczos ground states.
//!
//! The Hamiltonian is real symmetric in the spin basis (see [`crate::state`]),
//! so the Krylov basis is kept in `f64`. Every new Lanczos vector is fully
//! reorthogonalized against the stored basis, with a second Gram–Schmidt
//! pass whenever the first one removes most of the vector's norm. The
//! basis depth is capped by a memory budget; when a cycle ends without
//! convergence the next cycle starts from the current Ritz vector. A cycle
//! that fails to reduce the residual, or that breaks down on an invariant
//! subspace with a large residual, triggers a restart from a fresh random
//! vector.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelInstance, ModelRng, STREAM_ENV_GROUND, STREAM_FULL_GROUND};
use crate::observables::correlation;
use crate::state::{CouplingTerm, Hamiltonian, SpinState};

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Bound on `‖Hv − Ev‖` in units of |J|.
    pub tol: f64,
    /// Operator applications allowed per attempt.
    pub max_iter: usize,
    /// Fresh random restarts after the first attempt.
    pub max_restarts: usize,
    /// Bytes available for stored Krylov vectors.
    pub memory_budget: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_iter: 500,
            max_restarts: 3,
            memory_budget: 768 << 20,
        }
    }
}

impl LanczosOptions {
    pub fn with_tol(tol: f64) -> Self {
        LanczosOptions {
            tol,
            ..Self::default()
        }
    }

    fn max_depth(&self, dim: usize) -> usize {
        let by_memory = self.memory_budget / (8 * dim).max(1);
        by_memory.clamp(16, 300).min(dim)
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    pub vector: SpinState,
    pub residual: f64,
    pub iterations: usize,
}

/// Lowest eigenpair of the operator given by `terms` on `n_total` spins.
pub fn lanczos_ground(
    terms: &[CouplingTerm],
    n_total: usize,
    options: &LanczosOptions,
    rng: &mut ModelRng,
) -> Result<GroundStateResult> {
    let h = Hamiltonian::new(n_total, terms)?;
    lanczos_ground_operator(&h, options, rng)
}

pub fn lanczos_ground_operator(
    h: &Hamiltonian,
    options: &LanczosOptions,
    rng: &mut ModelRng,
) -> Result<GroundStateResult> {
    if !(options.tol > 0.0) {
        return Err(Error::Validation(format!(
            "Lanczos tolerance must be positive, got {}",
            options.tol
        )));
    }
    let dim = h.dim();
    let depth_cap = options.max_depth(dim);
    let mut scratch = vec![0.0; dim];
    let mut total_iterations = 0;
    let mut best_residual = f64::INFINITY;

    for _attempt in 0..=options.max_restarts {
        let mut start: Vec<f64> = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        normalize(&mut start);
        let mut used = 0;
        let mut previous = f64::INFINITY;
        while used < options.max_iter {
            let depth = depth_cap.min(options.max_iter - used);
            let cycle = krylov_cycle(h, &start, depth, options.tol);
            used += cycle.iterations + 1;
            total_iterations += cycle.iterations + 1;

            let mut ritz = cycle.ritz;
            normalize(&mut ritz);
            h.apply_real_into(&ritz, &mut scratch);
            let energy = dot(&ritz, &scratch);
            let residual = scratch
                .iter()
                .zip(&ritz)
                .map(|(hv, v)| (hv - energy * v).powi(2))
                .sum::<f64>()
                .sqrt();
            best_residual = best_residual.min(residual);

            if residual <= options.tol {
                let amplitudes = ritz.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                return Ok(GroundStateResult {
                    energy,
                    vector: SpinState::from_amplitudes(h.n_total(), amplitudes)?,
                    residual,
                    iterations: total_iterations,
                });
            }
            if cycle.breakdown || residual > 0.9 * previous {
                break;
            }
            previous = residual;
            start = ritz;
        }
    }
    Err(Error::Convergence {
        what: "Lanczos ground state",
        iterations: total_iterations,
        best_residual,
    })
}

struct Cycle {
    ritz: Vec<f64>,
    iterations: usize,
    breakdown: bool,
}

fn krylov_cycle(h: &Hamiltonian, start: &[f64], depth: usize, tol: f64) -> Cycle {
    let dim = start.len();
    let mut basis: Vec<Vec<f64>> = vec![start.to_vec()];
    let mut alpha: Vec<f64> = Vec::with_capacity(depth);
    let mut beta: Vec<f64> = Vec::with_capacity(depth);
    let mut w = vec![0.0; dim];
    let mut scale: f64 = 0.0;
    let mut breakdown = false;
    let mut lowest: Vec<f64> = vec![1.0];

    for k in 0..depth {
        h.apply_real_into(&basis[k], &mut w);
        let a = dot(&basis[k], &w);
        axpy(-a, &basis[k], &mut w);
        if k > 0 {
            axpy(-beta[k - 1], &basis[k - 1], &mut w);
        }
        for _ in 0..2 {
            let before = norm(&w);
            for q in &basis {
                let overlap = dot(q, &w);
                axpy(-overlap, q, &mut w);
            }
            if norm(&w) > 0.7 * before {
                break;
            }
        }
        alpha.push(a);
        let b = norm(&w);
        scale = scale.max(a.abs()).max(b);

        let last = k + 1 == depth;
        breakdown = b <= 1e-12 * (1.0 + scale);
        if last || breakdown || (k + 1) % 5 == 0 {
            lowest = lowest_tridiagonal_eigenvector(&alpha, &beta);
            let estimate = b * lowest[k].abs();
            if last || breakdown || estimate <= 0.1 * tol {
                break;
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(std::mem::replace(&mut w, vec![0.0; dim]));
    }

    let mut ritz = vec![0.0; dim];
    for (q, &s) in basis.iter().zip(&lowest) {
        axpy(s, q, &mut ritz);
    }
    Cycle {
        ritz,
        iterations: alpha.len(),
        breakdown,
    }
}

fn lowest_tridiagonal_eigenvector(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |best, (i, &e)| if e < best.1 { (i, e) } else { best },
        );
    eig.eigenvectors.column(idx).iter().copied().collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Central index with site 0 up and site 1 down.
const UP_DOWN: usize = 0b10;

/// `|↑↓⟩ ⊗ |Φ₀⟩` with `|Φ₀⟩` the environment ground state.
pub fn prepare_initial_state(model: &ModelInstance, options: &LanczosOptions) -> Result<SpinState> {
    let mut rng = ModelRng::new(model.seed, STREAM_ENV_GROUND);
    let env = lanczos_ground(&model.env_terms_local(), model.n_env, options, &mut rng)?;
    let mut state = SpinState::zeros(model.n_total())?;
    let amps = state.amplitudes_mut();
    for (e, &a) in env.vector.amplitudes().iter().enumerate() {
        amps[(e << 2) | UP_DOWN] = a;
    }
    state.normalize()?;
    Ok(state)
}

/// Ground state of the whole system.
pub fn full_ground_state(
    model: &ModelInstance,
    options: &LanczosOptions,
) -> Result<GroundStateResult> {
    let mut rng = ModelRng::new(model.seed, STREAM_FULL_GROUND);
    lanczos_ground(&model.all_terms(), model.n_total(), options, &mut rng)
}

/// `(E₀, ⟨S₁·S₂⟩₀)` of the whole system.
pub fn full_ground_reference(
    model: &ModelInstance,
    options: &LanczosOptions,
) -> Result<(f64, f64)> {
    let ground = full_ground_state(model, options)?;
    Ok((ground.energy, correlation(&ground.vector)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_central, CouplingSpec, Topology};
    use crate::state::Axis;

    #[test]
    fn central_pair_ground_state_is_singlet() {
        let terms = build_central(-1.0).unwrap();
        let g = lanczos_ground(
            &terms,
            2,
            &LanczosOptions::default(),
            &mut ModelRng::new(0, 2),
        )
        .unwrap();
        assert!((g.energy + 0.75).abs() < 1e-12);
        assert!(g.residual <= 1e-10);
        let a = g.vector.amplitudes();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(a[0].norm() < 1e-10 && a[3].norm() < 1e-10);
        assert!((a[1].norm() - s).abs() < 1e-10 && (a[1] + a[2]).norm() < 1e-10);
    }

    #[test]
    fn zero_operator() {
        let g =
            lanczos_ground(&[], 3, &LanczosOptions::default(), &mut ModelRng::new(0, 2)).unwrap();
        assert_eq!(g.energy, 0.0);
        assert_eq!(g.residual, 0.0);
        assert!((g.vector.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_tolerance() {
        let opts = LanczosOptions::with_tol(0.0);
        assert!(lanczos_ground(&[], 2, &opts, &mut ModelRng::new(0, 2)).is_err());
    }

    #[test]
    fn initial_state_is_up_down_product() {
        let spec = CouplingSpec::uniform(-0.15, 0.15, &Axis::ALL).unwrap();
        let model = ModelInstance::build(-1.0, &Topology::all_pairs(4), &spec, &spec, 11).unwrap();
        let psi = prepare_initial_state(&model, &LanczosOptions::default()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        for (idx, a) in psi.amplitudes().iter().enumerate() {
            if idx & 0b11 != UP_DOWN {
                assert_eq!(a.norm(), 0.0);
            }
        }
        assert!((correlation(&psi) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = CouplingSpec::uniform(-0.5, 0.5, &Axis::ALL).unwrap();
        let model = ModelInstance::build(-1.0, &Topology::all_pairs(5), &spec, &spec, 3).unwrap();
        let a = full_ground_state(&model, &LanczosOptions::default()).unwrap();
        let b = full_ground_state(&model, &LanczosOptions::default()).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.vector, b.vector);
    }
}
