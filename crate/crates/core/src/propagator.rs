// SPDX-License-Identifier: Apache-2.0

//! Chebyshev propagation of `exp(-iH dt)`.
//!
//! With `G` bounding the spectral radius of `H`,
//!
//! ```text
//! exp(-iH dt) = Σ_k (2 - δ_k0) (-i)^k J_k(G dt) T_k(H / G)
//! ```
//!
//! where `J_k` are Bessel functions of the first kind. The series is cut at
//! the first order whose coefficient falls below the tolerance and past
//! `G dt`, beyond which the coefficients decay faster than exponentially.
//! `T_k(H/G)|ψ⟩` follows from the three-term recurrence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelInstance;
use crate::state::{CouplingTerm, Hamiltonian, SpinState};

/// Multiplier applied to the term-norm bound before rescaling `H`.
pub const WINDOW_SAFETY: f64 = 1.01;

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMethod {
    /// `Σ |g| / 4`; each term `-g S^α S^α` has operator norm `|g|/4`.
    TermNormSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    /// Bound on `‖H‖` before the safety factor.
    pub bound: f64,
    pub method: WindowMethod,
}

impl SpectralWindow {
    /// Half-width actually used to rescale `H`.
    pub fn scale(&self) -> f64 {
        self.bound * WINDOW_SAFETY
    }
}

pub fn spectral_bound(terms: &[CouplingTerm]) -> SpectralWindow {
    SpectralWindow {
        bound: terms.iter().map(|t| t.g.abs() / 4.0).sum(),
        method: WindowMethod::TermNormSum,
    }
}

/// `J_0(z) ..= J_n(z)` for `z >= 0` by Miller's downward recurrence,
/// normalized with `J_0 + 2 Σ_k J_2k = 1`.
pub fn bessel_j_sequence(z: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let reach = (n as f64).max(z);
    let mut start = reach.ceil() as usize + 20 + (160.0 * reach).sqrt().ceil() as usize;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k
    let mut even_sum = 0.0;
    for k in (1..=start).rev() {
        if k <= n {
            out[k] = current;
        }
        if k % 2 == 0 {
            even_sum += current;
        }
        let previous = 2.0 * k as f64 / z * current - next;
        next = current;
        current = previous;
        if current.abs() > 1e250 {
            let s = 1e-250;
            current *= s;
            next *= s;
            even_sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out[0] = current;
    let norm = current + 2.0 * even_sum;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// `c_k = (2 - δ_k0)(-i)^k J_k(z)` for `k = 0..=K`, where `K` is the first
/// order past `z` with `|c_K| < tol`.
pub fn chebyshev_coefficients(z: f64, tol: f64) -> Result<Vec<Complex64>> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Numerical(format!(
            "expansion argument {z} out of range"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation(format!(
            "truncation tolerance must be positive, got {tol}"
        )));
    }
    if z == 0.0 {
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    let mut n = z.ceil() as usize + 32;
    let (bessel, order) = loop {
        let js = bessel_j_sequence(z, n);
        let found = js
            .iter()
            .enumerate()
            .position(|(k, j)| k >= 1 && k as f64 > z && 2.0 * j.abs() < tol);
        if let Some(order) = found {
            break (js, order);
        }
        n *= 2;
    };
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    let coefficients: Vec<Complex64> = bessel[..=order]
        .iter()
        .enumerate()
        .map(|(k, &j)| phases[k % 4] * if k == 0 { j } else { 2.0 * j })
        .collect();
    if coefficients
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::Numerical(format!(
            "non-finite Chebyshev coefficient at z = {z}"
        )));
    }
    Ok(coefficients)
}

#[derive(Debug, Clone)]
pub struct ChebyshevPlan {
    pub window: SpectralWindow,
    pub dt: f64,
    pub coefficients: Vec<Complex64>,
}

impl ChebyshevPlan {
    pub fn new(window: SpectralWindow, dt: f64, tol: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Validation(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let coefficients = chebyshev_coefficients(window.scale() * dt, tol)?;
        Ok(ChebyshevPlan {
            window,
            dt,
            coefficients,
        })
    }

    /// Highest polynomial order `K`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Reusable propagator for fixed `H` and `dt`; owns its work buffers.
#[derive(Debug, Clone)]
pub struct ChebyshevPropagator {
    hamiltonian: Hamiltonian,
    plan: ChebyshevPlan,
    work: [Vec<Complex64>; 3],
}

impl ChebyshevPropagator {
    pub fn new(terms: &[CouplingTerm], n_total: usize, dt: f64, tol: f64) -> Result<Self> {
        let hamiltonian = Hamiltonian::new(n_total, terms)?;
        let plan = ChebyshevPlan::new(spectral_bound(terms), dt, tol)?;
        let dim = hamiltonian.dim();
        let zero = Complex64::new(0.0, 0.0);
        Ok(ChebyshevPropagator {
            hamiltonian,
            plan,
            work: [vec![zero; dim], vec![zero; dim], vec![zero; dim]],
        })
    }

    pub fn for_model(model: &ModelInstance, dt: f64, tol: f64) -> Result<Self> {
        Self::new(&model.all_terms(), model.n_total(), dt, tol)
    }

    pub fn plan(&self) -> &ChebyshevPlan {
        &self.plan
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    /// Advances `state` by one `dt` in place.
    pub fn step(&mut self, state: &mut SpinState) -> Result<()> {
        if state.n_total() != self.hamiltonian.n_total() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.hamiltonian.dim(),
            });
        }
        let coefficients = &self.plan.coefficients;
        if self.hamiltonian.is_zero() || coefficients.len() == 1 {
            // J_0(0) = 1: the identity up to the (unit) leading coefficient
            let c0 = coefficients[0];
            state.amplitudes_mut().iter_mut().for_each(|a| *a *= c0);
            return Ok(());
        }
        let inv_scale = 1.0 / self.plan.window.scale();
        let [prev, cur, next] = &mut self.work;
        let psi = state.amplitudes_mut();

        prev.copy_from_slice(psi);
        self.hamiltonian.apply_into(prev, cur);
        cur.iter_mut().for_each(|x| *x *= inv_scale);
        let (c0, c1) = (coefficients[0], coefficients[1]);
        for (p, x) in psi.iter_mut().zip(cur.iter()) {
            *p = *p * c0 + x * c1;
        }

        let twice = 2.0 * inv_scale;
        for &ck in &coefficients[2..] {
            self.hamiltonian.apply_into(cur, next);
            for ((n, pr), p) in next.iter_mut().zip(prev.iter()).zip(psi.iter_mut()) {
                *n = *n * twice - pr;
                *p += *n * ck;
            }
            std::mem::swap(prev, cur);
            std::mem::swap(cur, next);
        }

        if psi.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Numerical(
                "non-finite amplitude after Chebyshev step".into(),
            ));
        }
        Ok(())
    }
}

/// `exp(-iH dt)|ψ⟩` for the full model Hamiltonian.
pub fn evolve(state: &SpinState, model: &ModelInstance, dt: f64, tol: f64) -> Result<SpinState> {
    let mut propagator = ChebyshevPropagator::for_model(model, dt, tol)?;
    let mut out = state.clone();
    propagator.step(&mut out)?;
    Ok(out)
}
