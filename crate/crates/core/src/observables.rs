// SPDX-License-Identifier: Apache-2.0

//! Central-pair observables.
//!
//! The reduced density matrix is written in the ordered basis
//! `{↑↑, ↑↓, ↓↑, ↓↓}` of (site 0, site 1), i.e. row `2·s₀ + s₁` with
//! `s = 1` for spin down.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelInstance;
use crate::state::{apply_hamiltonian, inner, Axis, CouplingTerm, Hamiltonian, SpinState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensityMatrix(pub Matrix4<Complex64>);

/// Row of the 4×4 matrix holding basis index `idx`.
#[inline]
fn pair_row(idx: usize) -> usize {
    ((idx & 1) << 1) | ((idx >> 1) & 1)
}

impl ReducedDensityMatrix {
    pub fn entries(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `(ρ + ρ†)/2`.
    pub fn hermitian_part(&self) -> Matrix4<Complex64> {
        (self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let eig = SymmetricEigen::new(self.hermitian_part());
        let mut values = [0.0; 4];
        values.copy_from_slice(eig.eigenvalues.as_slice());
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// Pure state `Σ a_k |k⟩` over the ordered pair basis.
    pub fn pure(amplitudes: [Complex64; 4]) -> Self {
        ReducedDensityMatrix(Matrix4::from_fn(|r, c| {
            amplitudes[r] * amplitudes[c].conj()
        }))
    }

    pub fn diagonal(p: [f64; 4]) -> Self {
        ReducedDensityMatrix(Matrix4::from_fn(|r, c| {
            if r == c {
                Complex64::new(p[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }
}

/// Traces out every environment spin.
pub fn reduce_to_pair(state: &SpinState) -> ReducedDensityMatrix {
    let mut rho = Matrix4::<Complex64>::zeros();
    for block in state.amplitudes().chunks_exact(4) {
        for a in 0..4 {
            let ra = pair_row(a);
            for b in 0..4 {
                rho[(ra, pair_row(b))] += block[a] * block[b].conj();
            }
        }
    }
    ReducedDensityMatrix(rho)
}

/// Matrix of `S₁·S₂` in the ordered pair basis.
pub fn s1_dot_s2() -> Matrix4<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut m = Matrix4::<Complex64>::zeros();
    m[(0, 0)] = c(0.25);
    m[(3, 3)] = c(0.25);
    m[(1, 1)] = c(-0.25);
    m[(2, 2)] = c(-0.25);
    m[(1, 2)] = c(0.5);
    m[(2, 1)] = c(0.5);
    m
}

fn s1_dot_s2_terms() -> [CouplingTerm; 3] {
    // each term is -g S^α S^α, so g = -1 yields +S₁·S₂
    Axis::ALL.map(|axis| CouplingTerm::new(0, 1, axis, -1.0))
}

/// `⟨ψ|S₁·S₂|ψ⟩` applied directly on the full state.
pub fn correlation(state: &SpinState) -> f64 {
    let applied =
        apply_hamiltonian(state, &s1_dot_s2_terms()).expect("central sites exist in every state");
    inner(state, &applied).expect("same dimension").re
}

/// `Tr(ρ S₁·S₂)`.
pub fn correlation_from_rho(rho: &ReducedDensityMatrix) -> f64 {
    (rho.0 * s1_dot_s2()).trace().re
}

fn spin_flip() -> Matrix4<Complex64> {
    // σʸ⊗σʸ is real: antidiagonal (-1, 1, 1, -1)
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut m = Matrix4::<Complex64>::zeros();
    m[(0, 3)] = c(-1.0);
    m[(1, 2)] = c(1.0);
    m[(2, 1)] = c(1.0);
    m[(3, 0)] = c(-1.0);
    m
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// With `ρ = V V†` from the spectral decomposition, the `λ` are the
/// singular values of the complex symmetric matrix `Vᵀ (σʸ⊗σʸ) V`. They
/// coincide with the square roots of the eigenvalues of `ρ ρ̃`, but stay
/// accurate when `ρ` is close to rank deficient, where square roots of
/// round-off eigenvalues would otherwise dominate.
pub fn concurrence(rho: &ReducedDensityMatrix) -> Result<f64> {
    let h = rho.hermitian_part();
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical(
            "density matrix has non-finite entries".into(),
        ));
    }
    let eig = SymmetricEigen::new(h);
    let roots = eig
        .eigenvalues
        .map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors * Matrix4::from_diagonal(&roots);
    let tau = v.transpose() * spin_flip() * v;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numerical(
            "concurrence singular values are not finite".into(),
        ));
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `Tr ρ²`.
pub fn purity(rho: &ReducedDensityMatrix) -> f64 {
    rho.0.iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyComponents {
    pub central: f64,
    pub environment: f64,
    pub interaction: f64,
    pub total: f64,
}

/// Compiled `H_c`, `H_e` and `H_int` for repeated energy bookkeeping.
#[derive(Debug, Clone)]
pub struct EnergyMeter {
    central: Hamiltonian,
    environment: Hamiltonian,
    interaction: Hamiltonian,
}

impl EnergyMeter {
    pub fn new(model: &ModelInstance) -> Result<Self> {
        let n = model.n_total();
        Ok(EnergyMeter {
            central: Hamiltonian::new(n, &model.central_terms)?,
            environment: Hamiltonian::new(n, &model.env_terms)?,
            interaction: Hamiltonian::new(n, &model.int_terms)?,
        })
    }

    pub fn measure(&self, state: &SpinState) -> Result<EnergyComponents> {
        let central = self.central.expectation(state)?;
        let environment = self.environment.expectation(state)?;
        let interaction = self.interaction.expectation(state)?;
        Ok(EnergyComponents {
            central,
            environment,
            interaction,
            total: central + environment + interaction,
        })
    }
}

pub fn energy_components(state: &SpinState, model: &ModelInstance) -> Result<EnergyComponents> {
    EnergyMeter::new(model)?.measure(state)
}
