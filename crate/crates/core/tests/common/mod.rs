// SPDX-License-Identifier: Apache-2.0

//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the matrix-free kernels under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use spinbath::model::ModelRng;
use spinbath::{Axis, CouplingTerm, SpinState};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-site `S^α = σ^α / 2` in the basis {↑, ↓}.
pub fn spin_matrix(axis: Axis) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let h = 0.5;
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[z, c(h, 0.0), c(h, 0.0), z]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -h), c(0.0, h), z]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[c(h, 0.0), z, z, c(-h, 0.0)]),
    }
}

/// Kronecker product with site `n - 1` leftmost, so site `k` is bit `k`.
pub fn site_product(n: usize, factors: &[(usize, DMatrix<Complex64>)]) -> DMatrix<Complex64> {
    let identity = DMatrix::<Complex64>::identity(2, 2);
    let mut out = DMatrix::<Complex64>::identity(1, 1);
    for site in (0..n).rev() {
        let op = factors
            .iter()
            .find(|(s, _)| *s == site)
            .map_or(&identity, |(_, m)| m);
        out = out.kronecker(op);
    }
    out
}

pub fn dense_hamiltonian(terms: &[CouplingTerm], n: usize) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for t in terms {
        let s = spin_matrix(t.axis);
        h += site_product(n, &[(t.i, s.clone()), (t.j, s)]) * c(-t.g, 0.0);
    }
    h
}

pub fn to_vector(state: &SpinState) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn from_vector(n: usize, v: &DVector<Complex64>) -> SpinState {
    SpinState::from_amplitudes(n, v.iter().copied().collect()).unwrap()
}

/// Eigenvalues in ascending order and the matching eigenvectors.
pub fn dense_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, k| {
        eig.eigenvectors[(r, order[k])]
    });
    (values, vectors)
}

/// `exp(-iHt)` by eigendecomposition.
pub fn dense_expm(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let (values, vectors) = dense_eigen(h);
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
    ));
    &vectors * phases * vectors.adjoint()
}

/// `exp(iθ · 4 S^α_i S^α_j)|ψ⟩` in place; `(4 S^α S^α)^2 = 1`.
fn rotate_pair(amps: &mut [Complex64], t: &CouplingTerm, theta: f64) {
    let (cos, sin) = (theta.cos(), theta.sin());
    let mask = (1 << t.i) | (1 << t.j);
    let old = amps.to_vec();
    for (b, a) in amps.iter_mut().enumerate() {
        let same = ((b >> t.i) ^ (b >> t.j)) & 1 == 0;
        let image = match t.axis {
            Axis::Z => old[b] * if same { 1.0 } else { -1.0 },
            Axis::X => old[b ^ mask],
            Axis::Y => old[b ^ mask] * if same { -1.0 } else { 1.0 },
        };
        *a = old[b] * cos + image * c(0.0, sin);
    }
}

/// Symmetric second-order Trotter evolution over `steps` steps of `dt`.
pub fn trotter(state: &SpinState, terms: &[CouplingTerm], dt: f64, steps: usize) -> SpinState {
    let mut amps = state.amplitudes().to_vec();
    // exp(-i(-g SS)τ) = exp(i (gτ/4) · 4SS)
    for _ in 0..steps {
        for t in terms {
            rotate_pair(&mut amps, t, t.g * dt / 8.0);
        }
        for t in terms.iter().rev() {
            rotate_pair(&mut amps, t, t.g * dt / 8.0);
        }
    }
    SpinState::from_amplitudes(state.n_total(), amps).unwrap()
}

/// `J_n(z) = (1/π) ∫_0^π cos(nτ - z sin τ) dτ` by the trapezoid rule, which
/// converges geometrically for this periodic integrand.
pub fn bessel_j(n: usize, z: f64) -> f64 {
    let m = 400;
    let h = std::f64::consts::PI / m as f64;
    let f = |tau: f64| (n as f64 * tau - z * tau.sin()).cos();
    let inner: f64 = (1..m).map(|k| f(k as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(std::f64::consts::PI))) * h / std::f64::consts::PI
}

/// Random couplings on all pairs of `n` sites and all axes, `g ∈ [-1, 1]`.
pub fn random_terms(n: usize, seed: u64) -> Vec<CouplingTerm> {
    let mut rng = ModelRng::new(seed, 99);
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for axis in Axis::ALL {
                terms.push(CouplingTerm::new(i, j, axis, rng.uniform(-1.0, 1.0)));
            }
        }
    }
    terms
}

pub fn random_state(n: usize, seed: u64) -> SpinState {
    let mut rng = ModelRng::new(seed, 98);
    let amps = (0..1usize << n)
        .map(|_| c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
        .collect();
    let mut s = SpinState::from_amplitudes(n, amps).unwrap();
    s.normalize().unwrap();
    s
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn fidelity(a: &SpinState, b: &SpinState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm()
}
