// SPDX-License-Identifier: Apache-2.0

//! Bit-encoded spin-1/2 Hilbert space and matrix-free two-spin couplings.
//!
//! Basis index bit `k` describes site `k`: bit 0 is spin up (the +1/2
//! eigenstate of S^z), bit 1 is spin down. The central pair occupies sites
//! 0 and 1, environment spins follow from site 2. Spin operators are
//! S^α = σ^α/2 with ħ = 1.
//!
//! Every coupling term represents `-g S_i^α S_j^α`. In this basis all
//! matrix elements of such terms are real, including the `y` axis, because
//! S^y appears in pairs: `S^y_i S^y_j` flips both spins with amplitude
//! `-1/4` when the two bits agree and `+1/4` when they differ.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Cartesian spin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::Config(format!("unknown spin axis `{other}`"))),
        }
    }
}

/// One addend `-g S_i^α S_j^α` of the Hamiltonian, `g` in units of |J|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTerm {
    pub i: usize,
    pub j: usize,
    pub axis: Axis,
    pub g: f64,
}

impl CouplingTerm {
    pub fn new(i: usize, j: usize, axis: Axis, g: f64) -> Self {
        CouplingTerm { i, j, axis, g }
    }

    pub fn validate(&self, n_total: usize) -> Result<()> {
        for index in [self.i, self.j] {
            if index >= n_total {
                return Err(Error::SiteIndex { index, n_total });
            }
        }
        if self.i == self.j {
            return Err(Error::Validation(format!(
                "coupling term couples site {} to itself",
                self.i
            )));
        }
        if !self.g.is_finite() {
            return Err(Error::Validation(format!(
                "coupling strength {} on ({}, {}) is not finite",
                self.g, self.i, self.j
            )));
        }
        Ok(())
    }
}

/// Largest system the engine accepts; 2^24 amplitudes is 256 MiB per vector.
pub const MAX_SPINS: usize = 24;

/// Complex amplitude vector over `2^n_total` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    n_total: usize,
    amplitudes: Vec<Complex64>,
}

impl SpinState {
    pub fn zeros(n_total: usize) -> Result<Self> {
        check_spin_count(n_total)?;
        Ok(SpinState {
            n_total,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << n_total],
        })
    }

    /// The computational basis state with the given index.
    pub fn basis(n_total: usize, index: usize) -> Result<Self> {
        let mut state = Self::zeros(n_total)?;
        if index >= state.dim() {
            return Err(Error::DimensionMismatch {
                left: index,
                right: state.dim(),
            });
        }
        state.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Product state with site `k` down wherever `down[k]` is true.
    pub fn product(down: &[bool]) -> Result<Self> {
        let index = down
            .iter()
            .enumerate()
            .filter(|(_, &d)| d)
            .fold(0usize, |acc, (k, _)| acc | (1 << k));
        Self::basis(down.len(), index)
    }

    pub fn from_amplitudes(n_total: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_spin_count(n_total)?;
        if amplitudes.len() != 1 << n_total {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: 1 << n_total,
            });
        }
        Ok(SpinState {
            n_total,
            amplitudes,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical(format!(
                "cannot normalize state of norm {norm}"
            )));
        }
        let scale = 1.0 / norm;
        self.amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(())
    }
}

fn check_spin_count(n_total: usize) -> Result<()> {
    if n_total < 2 {
        return Err(Error::Validation(format!(
            "a state needs at least 2 spins, got {n_total}"
        )));
    }
    if n_total > MAX_SPINS {
        return Err(Error::Validation(format!(
            "{n_total} spins exceeds the limit of {MAX_SPINS}"
        )));
    }
    Ok(())
}

#[inline]
fn sz(index: usize, site: usize) -> f64 {
    if (index >> site) & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

/// Returns `-g S_i^α S_j^α |ψ⟩`. Linear, no normalization.
pub fn apply_term(state: &SpinState, term: &CouplingTerm) -> Result<SpinState> {
    let mut out = SpinState::zeros(state.n_total)?;
    accumulate_term(state, term, &mut out.amplitudes)?;
    Ok(out)
}

fn accumulate_term(state: &SpinState, term: &CouplingTerm, out: &mut [Complex64]) -> Result<()> {
    term.validate(state.n_total)?;
    let (i, j, g) = (term.i, term.j, term.g);
    let mask = (1 << i) | (1 << j);
    let input = &state.amplitudes;
    match term.axis {
        Axis::Z => {
            for (b, (o, a)) in out.iter_mut().zip(input).enumerate() {
                *o += a * (-g * sz(b, i) * sz(b, j));
            }
        }
        Axis::X => {
            for (b, a) in input.iter().enumerate() {
                out[b ^ mask] += a * (-0.25 * g);
            }
        }
        Axis::Y => {
            for (b, a) in input.iter().enumerate() {
                let same = ((b >> i) ^ (b >> j)) & 1 == 0;
                let element = if same { -0.25 } else { 0.25 };
                out[b ^ mask] += a * (-g * element);
            }
        }
    }
    Ok(())
}

/// Sum of [`apply_term`] over `terms`, accumulated in list order.
pub fn apply_hamiltonian(state: &SpinState, terms: &[CouplingTerm]) -> Result<SpinState> {
    let mut out = SpinState::zeros(state.n_total)?;
    for term in terms {
        accumulate_term(state, term, &mut out.amplitudes)?;
    }
    Ok(out)
}

/// `⟨a|b⟩`, conjugating `a`.
pub fn inner(a: &SpinState, b: &SpinState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

const TILE_BITS: usize = 10;

/// Both-spin flip on one site pair, collected over the `x` and `y` terms of
/// that pair. `coefficient[p]` multiplies the partner amplitude, where `p`
/// is 0 when the two bits agree and 1 when they differ.
#[derive(Debug, Clone, Copy)]
struct PairFlip {
    low: usize,
    high: usize,
    coefficient: [f64; 2],
}

/// Flips of one environment site `high` together with either central spin.
/// Indexed `[b][a]`, `b` the bit of `high` in the output index and `a` the
/// output's central bits; `via_site0` pairs with flipping bit 0, `via_site1`
/// with flipping bit 1.
#[derive(Debug, Clone, Copy)]
struct CentralFlip {
    high: usize,
    via_site0: [[f64; 4]; 2],
    via_site1: [[f64; 4]; 2],
}

/// A coupling table compiled for repeated application.
///
/// The `z` terms are folded into one diagonal and the `x`/`y` terms of each
/// site pair into one flip with parity-dependent real coefficients. Flips
/// between a central spin and an environment spin are grouped per
/// environment site and applied on blocks of four amplitudes. Pairs keep
/// the order of their first appearance in the term list, so the result is
/// deterministic for a given table.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n_total: usize,
    diagonal: Option<Vec<f64>>,
    flips: Vec<PairFlip>,
    central_flips: Vec<CentralFlip>,
    term_count: usize,
}

impl Hamiltonian {
    pub fn new(n_total: usize, terms: &[CouplingTerm]) -> Result<Self> {
        check_spin_count(n_total)?;
        let dim = 1usize << n_total;
        let mut diagonal: Option<Vec<f64>> = None;
        let mut flips: Vec<PairFlip> = Vec::new();
        for term in terms {
            term.validate(n_total)?;
            let (low, high) = (term.i.min(term.j), term.i.max(term.j));
            match term.axis {
                Axis::Z => {
                    let diag = diagonal.get_or_insert_with(|| vec![0.0; dim]);
                    for (b, d) in diag.iter_mut().enumerate() {
                        *d += -term.g * sz(b, low) * sz(b, high);
                    }
                }
                axis => {
                    let pos = match flips.iter().position(|f| f.low == low && f.high == high) {
                        Some(pos) => pos,
                        None => {
                            flips.push(PairFlip {
                                low,
                                high,
                                coefficient: [0.0; 2],
                            });
                            flips.len() - 1
                        }
                    };
                    let c = &mut flips[pos].coefficient;
                    if axis == Axis::X {
                        c[0] -= 0.25 * term.g;
                        c[1] -= 0.25 * term.g;
                    } else {
                        c[0] += 0.25 * term.g;
                        c[1] -= 0.25 * term.g;
                    }
                }
            }
        }
        let mut central_flips: Vec<CentralFlip> = Vec::new();
        flips.retain(|f| {
            if f.low > 1 || f.high < 2 {
                return true;
            }
            let pos = match central_flips.iter().position(|c| c.high == f.high) {
                Some(pos) => pos,
                None => {
                    central_flips.push(CentralFlip {
                        high: f.high,
                        via_site0: [[0.0; 4]; 2],
                        via_site1: [[0.0; 4]; 2],
                    });
                    central_flips.len() - 1
                }
            };
            let target = if f.low == 0 {
                &mut central_flips[pos].via_site0
            } else {
                &mut central_flips[pos].via_site1
            };
            for (b, row) in target.iter_mut().enumerate() {
                for (a, c) in row.iter_mut().enumerate() {
                    *c = f.coefficient[((a >> f.low) & 1) ^ b];
                }
            }
            false
        });
        // Flips sharing a high bit read the same source tile; keeping them
        // adjacent lets the tile be reused from L1.
        flips.sort_by_key(|f| (f.high, f.low));
        central_flips.sort_by_key(|c| c.high);
        Ok(Hamiltonian {
            n_total,
            diagonal,
            flips,
            central_flips,
            term_count: terms.len(),
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        1 << self.n_total
    }

    pub fn is_zero(&self) -> bool {
        self.term_count == 0
    }

    /// `out = H input`.
    pub fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        self.apply_generic(input, out);
    }

    /// Real-vector variant; valid because every matrix element is real.
    pub fn apply_real_into(&self, input: &[f64], out: &mut [f64]) {
        self.apply_generic(input, out);
    }

    pub fn apply(&self, state: &SpinState) -> Result<SpinState> {
        if state.n_total != self.n_total {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.dim(),
            });
        }
        let mut out = SpinState::zeros(self.n_total)?;
        self.apply_into(&state.amplitudes, &mut out.amplitudes);
        Ok(out)
    }

    /// `⟨ψ|H|ψ⟩`, which is real for a Hermitian operator.
    pub fn expectation(&self, state: &SpinState) -> Result<f64> {
        let h_psi = self.apply(state)?;
        Ok(inner(state, &h_psi)?.re)
    }

    fn apply_generic<T>(&self, input: &[T], out: &mut [T])
    where
        T: Copy + Default + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
    {
        let dim = self.dim();
        assert_eq!(input.len(), dim, "input length");
        assert_eq!(out.len(), dim, "output length");
        // Output is processed in tiles small enough to stay in L1 while
        // every pair flip is accumulated into it.
        let tile = 1usize << TILE_BITS.min(self.n_total);
        for ts in (0..dim).step_by(tile) {
            let out_t = &mut out[ts..ts + tile];
            let in_t = &input[ts..ts + tile];
            match &self.diagonal {
                Some(diag) => {
                    for ((o, &x), &d) in out_t.iter_mut().zip(in_t).zip(&diag[ts..ts + tile]) {
                        *o = x * d;
                    }
                }
                None => out_t.iter_mut().for_each(|o| *o = T::default()),
            }
            let mut pending = self.central_flips.iter().peekable();
            for flip in &self.flips {
                while let Some(cf) = pending.next_if(|c| c.high < flip.high) {
                    central_tile(cf, ts, tile, input, out_t);
                }
                pair_tile(flip, ts, tile, input, out_t);
            }
            for cf in pending {
                central_tile(cf, ts, tile, input, out_t);
            }
        }
    }
}

#[inline]
fn pair_tile<T>(flip: &PairFlip, ts: usize, tile: usize, input: &[T], out_t: &mut [T])
where
    T: Copy + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
{
    let mask = (1usize << flip.low) | (1 << flip.high);
    let src_base = ts ^ (mask & !(tile - 1));
    let src_t = &input[src_base..src_base + tile];
    let inner_mask = mask & (tile - 1);
    let block = (1usize << flip.low).min(tile);
    for start in (0..tile).step_by(block) {
        let at = ts + start;
        let parity = ((at >> flip.low) ^ (at >> flip.high)) & 1;
        let c = flip.coefficient[parity];
        let src = start ^ inner_mask;
        for (o, &x) in out_t[start..start + block]
            .iter_mut()
            .zip(&src_t[src..src + block])
        {
            *o += x * c;
        }
    }
}

#[inline]
fn central_tile<T>(cf: &CentralFlip, ts: usize, tile: usize, input: &[T], out_t: &mut [T])
where
    T: Copy + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
{
    let bit = 1usize << cf.high;
    let src_base = ts ^ (bit & !(tile - 1));
    let src_t = &input[src_base..src_base + tile];
    let inner_bit = bit & (tile - 1);
    let block = bit.min(tile);
    for start in (0..tile).step_by(block) {
        let b = ((ts + start) >> cf.high) & 1;
        let src = start ^ inner_bit;
        central_kernel(
            &mut out_t[start..start + block],
            &src_t[src..src + block],
            &cf.via_site0[b],
            &cf.via_site1[b],
        );
    }
}

#[inline]
fn central_kernel<T>(out: &mut [T], src: &[T], c0: &[f64; 4], c1: &[f64; 4])
where
    T: Copy + std::ops::AddAssign + std::ops::Mul<f64, Output = T>,
{
    for (o, s) in out.chunks_exact_mut(4).zip(src.chunks_exact(4)) {
        o[0] += s[1] * c0[0];
        o[0] += s[2] * c1[0];
        o[1] += s[0] * c0[1];
        o[1] += s[3] * c1[1];
        o[2] += s[3] * c0[2];
        o[2] += s[0] * c1[2];
        o[3] += s[2] * c0[3];
        o[3] += s[1] * c1[3];
    }
}
