// SPDX-License-Identifier: Apache-2.0

//! Coupling tables for the central pair, the environment and their
//! interaction.
//!
//! Random strengths come from [`ModelRng`], a ChaCha20 stream keyed by the
//! scenario seed (`ChaCha20Rng::seed_from_u64`) with one stream number per
//! consumer:
//!
//! | stream | consumer                                 |
//! |--------|------------------------------------------|
//! | 0      | environment couplings                    |
//! | 1      | system–environment couplings             |
//! | 2      | Lanczos start vector, environment        |
//! | 3      | Lanczos start vector, full system        |
//!
//! Draw order is bond-major, axis-minor, axes in x, y, z order. A uniform
//! draw maps the top 53 bits of one `u64` to `[0, 1)`; a random sign takes
//! the top bit of one `u64`.

mod lattice;

pub use lattice::{
    load_edge_list, parse_edge_list, Lattice, Topology, TopologyKind, TriangleBoundary,
};

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::state::{Axis, CouplingTerm};

pub const STREAM_ENVIRONMENT: u64 = 0;
pub const STREAM_INTERACTION: u64 = 1;
pub const STREAM_ENV_GROUND: u64 = 2;
pub const STREAM_FULL_GROUND: u64 = 3;

/// Seeded generator with a documented, portable draw procedure.
#[derive(Debug, Clone)]
pub struct ModelRng(ChaCha20Rng);

impl ModelRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ModelRng(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo + (hi - lo) * self.unit()).clamp(lo, hi)
    }

    pub fn sign(&mut self) -> f64 {
        if self.0.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    /// Uniform on `[lo, hi]`.
    UniformRange,
    /// `±lo` with equal probability; requires `lo == hi >= 0`.
    SignFlip,
    /// Always `lo`; requires `lo == hi`.
    Fixed,
}

impl CouplingKind {
    pub fn name(self) -> &'static str {
        match self {
            CouplingKind::UniformRange => "uniform_range",
            CouplingKind::SignFlip => "sign_flip",
            CouplingKind::Fixed => "fixed",
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform_range" => CouplingKind::UniformRange,
            "sign_flip" => CouplingKind::SignFlip,
            "fixed" => CouplingKind::Fixed,
            other => return Err(Error::Config(format!("unknown coupling kind `{other}`"))),
        })
    }
}

/// Distribution of one family of exchange integrals. Axes not listed get
/// strength zero and produce no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    pub kind: CouplingKind,
    pub lo: f64,
    pub hi: f64,
    axes: Vec<Axis>,
}

impl CouplingSpec {
    pub fn new(kind: CouplingKind, lo: f64, hi: f64, axes: &[Axis]) -> Result<Self> {
        let mut axes = axes.to_vec();
        axes.sort();
        axes.dedup();
        let spec = CouplingSpec { kind, lo, hi, axes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn uniform(lo: f64, hi: f64, axes: &[Axis]) -> Result<Self> {
        Self::new(CouplingKind::UniformRange, lo, hi, axes)
    }

    pub fn sign_flip(magnitude: f64, axes: &[Axis]) -> Result<Self> {
        Self::new(CouplingKind::SignFlip, magnitude, magnitude, axes)
    }

    pub fn fixed(value: f64, axes: &[Axis]) -> Result<Self> {
        Self::new(CouplingKind::Fixed, value, value, axes)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Replaces the axis set without validating the other fields.
    pub fn set_axes(&mut self, axes: &[Axis]) -> Result<()> {
        if axes.is_empty() {
            return Err(Error::Validation("coupling spec has no axes".into()));
        }
        let mut axes = axes.to_vec();
        axes.sort();
        axes.dedup();
        self.axes = axes;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Validation(format!(
                "coupling range [{}, {}] is not a finite interval",
                self.lo, self.hi
            )));
        }
        if self.axes.is_empty() {
            return Err(Error::Validation("coupling spec has no axes".into()));
        }
        match self.kind {
            CouplingKind::SignFlip if self.lo != self.hi || self.lo < 0.0 => {
                Err(Error::Validation(format!(
                    "sign_flip needs lo == hi >= 0, got [{}, {}]",
                    self.lo, self.hi
                )))
            }
            CouplingKind::Fixed if self.lo != self.hi => Err(Error::Validation(format!(
                "fixed coupling needs lo == hi, got [{}, {}]",
                self.lo, self.hi
            ))),
            _ => Ok(()),
        }
    }

    pub fn draw(&self, rng: &mut ModelRng) -> f64 {
        match self.kind {
            CouplingKind::UniformRange => rng.uniform(self.lo, self.hi),
            CouplingKind::SignFlip => rng.sign() * self.lo,
            CouplingKind::Fixed => self.lo,
        }
    }
}

/// Axis list in compact form, e.g. `xyz` or `z`.
pub fn format_axes(axes: &[Axis]) -> String {
    axes.iter().map(|a| a.as_char()).collect()
}

pub fn parse_axes(s: &str) -> Result<Vec<Axis>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| c.to_string().parse())
        .collect()
}

/// `H_c = -J S_1·S_2` as three terms on sites (0, 1). The bond must be
/// antiferromagnetic, `J < 0`.
pub fn build_central(j: f64) -> Result<Vec<CouplingTerm>> {
    if !(j < 0.0) || !j.is_finite() {
        return Err(Error::Validation(format!(
            "central exchange J must be negative and finite, got {j}"
        )));
    }
    Ok(Axis::ALL
        .iter()
        .map(|&axis| CouplingTerm::new(0, 1, axis, j))
        .collect())
}

pub fn build_environment(
    topology: &Topology,
    spec: &CouplingSpec,
    rng: &mut ModelRng,
) -> Result<Vec<CouplingTerm>> {
    spec.validate()?;
    let bonds = topology.bonds()?;
    let mut terms = Vec::with_capacity(bonds.len() * spec.axes.len());
    for (a, b) in bonds {
        for &axis in &spec.axes {
            terms.push(CouplingTerm::new(a + 2, b + 2, axis, spec.draw(rng)));
        }
    }
    Ok(terms)
}

/// Both central spins couple to every environment spin.
pub fn build_interaction(
    n_env: usize,
    spec: &CouplingSpec,
    rng: &mut ModelRng,
) -> Result<Vec<CouplingTerm>> {
    spec.validate()?;
    if n_env < 1 {
        return Err(Error::Validation(
            "interaction needs at least one environment spin".into(),
        ));
    }
    let mut terms = Vec::with_capacity(2 * n_env * spec.axes.len());
    for central in 0..2 {
        for env in 0..n_env {
            for &axis in &spec.axes {
                terms.push(CouplingTerm::new(central, env + 2, axis, spec.draw(rng)));
            }
        }
    }
    Ok(terms)
}

/// The three coupling tables of one random realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInstance {
    pub n_env: usize,
    pub central_terms: Vec<CouplingTerm>,
    pub env_terms: Vec<CouplingTerm>,
    pub int_terms: Vec<CouplingTerm>,
    pub seed: u64,
}

impl ModelInstance {
    pub fn build(
        j: f64,
        topology: &Topology,
        omega: &CouplingSpec,
        delta: &CouplingSpec,
        seed: u64,
    ) -> Result<Self> {
        let central_terms = build_central(j)?;
        let env_terms = build_environment(
            topology,
            omega,
            &mut ModelRng::new(seed, STREAM_ENVIRONMENT),
        )?;
        let int_terms = build_interaction(
            topology.n_env,
            delta,
            &mut ModelRng::new(seed, STREAM_INTERACTION),
        )?;
        let model = ModelInstance {
            n_env: topology.n_env,
            central_terms,
            env_terms,
            int_terms,
            seed,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn n_total(&self) -> usize {
        self.n_env + 2
    }

    pub fn all_terms(&self) -> Vec<CouplingTerm> {
        let mut all = Vec::with_capacity(
            self.central_terms.len() + self.env_terms.len() + self.int_terms.len(),
        );
        all.extend_from_slice(&self.central_terms);
        all.extend_from_slice(&self.env_terms);
        all.extend_from_slice(&self.int_terms);
        all
    }

    /// Checks that each table couples only the sites it owns.
    pub fn validate(&self) -> Result<()> {
        let n_total = self.n_total();
        let is_central = |s: usize| s < 2;
        for t in self.all_terms() {
            t.validate(n_total)?;
        }
        let bad = |what: &str, t: &CouplingTerm| {
            Err(Error::Validation(format!(
                "{what} term on sites ({}, {}) violates the partition",
                t.i, t.j
            )))
        };
        for t in &self.central_terms {
            if !(is_central(t.i) && is_central(t.j)) {
                return bad("central", t);
            }
        }
        for t in &self.env_terms {
            if is_central(t.i) || is_central(t.j) {
                return bad("environment", t);
            }
        }
        for t in &self.int_terms {
            if is_central(t.i) == is_central(t.j) {
                return bad("interaction", t);
            }
        }
        Ok(())
    }

    /// Environment terms re-indexed onto a standalone `2^N` space.
    pub fn env_terms_local(&self) -> Vec<CouplingTerm> {
        self.env_terms
            .iter()
            .map(|t| CouplingTerm::new(t.i - 2, t.j - 2, t.axis, t.g))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XYZ: &[Axis] = &Axis::ALL;

    #[test]
    fn central_bond() {
        let terms = build_central(-1.0).unwrap();
        assert_eq!(
            terms,
            vec![
                CouplingTerm::new(0, 1, Axis::X, -1.0),
                CouplingTerm::new(0, 1, Axis::Y, -1.0),
                CouplingTerm::new(0, 1, Axis::Z, -1.0),
            ]
        );
        assert!(build_central(1.0).is_err());
        assert!(build_central(0.0).is_err());
        assert!(build_central(f64::NAN).is_err());
    }

    #[test]
    fn glass_environment_counts() {
        let spec = CouplingSpec::uniform(-0.15, 0.15, XYZ).unwrap();
        let terms =
            build_environment(&Topology::all_pairs(14), &spec, &mut ModelRng::new(1, 0)).unwrap();
        assert_eq!(terms.len(), 273);
        assert!(terms
            .iter()
            .all(|t| t.g.abs() <= 0.15 && t.i >= 2 && t.j >= 2));
    }

    #[test]
    fn triangular_environment_is_antiferromagnetic() {
        let spec = CouplingSpec::uniform(-0.55, -0.45, XYZ).unwrap();
        let topo = Topology::triangular(14);
        let terms = build_environment(&topo, &spec, &mut ModelRng::new(7, 0)).unwrap();
        assert_eq!(terms.len(), 3 * topo.bonds().unwrap().len());
        assert!(terms.iter().all(|t| (-0.55..=-0.45).contains(&t.g)));
    }

    #[test]
    fn fixed_ring() {
        let spec = CouplingSpec::fixed(-1.0, XYZ).unwrap();
        let terms = build_environment(&Topology::ring(4), &spec, &mut ModelRng::new(0, 0)).unwrap();
        assert_eq!(terms.len(), 12);
        let bonds: Vec<(usize, usize)> = terms.iter().step_by(3).map(|t| (t.i, t.j)).collect();
        assert_eq!(bonds, vec![(2, 3), (3, 4), (4, 5), (5, 2)]);
        assert!(terms.iter().all(|t| t.g == -1.0));
    }

    #[test]
    fn ising_interaction() {
        let spec = CouplingSpec::sign_flip(0.075, &[Axis::Z]).unwrap();
        let terms = build_interaction(16, &spec, &mut ModelRng::new(3, 1)).unwrap();
        assert_eq!(terms.len(), 32);
        assert!(terms
            .iter()
            .all(|t| t.g.abs() == 0.075 && t.axis == Axis::Z));
        assert!(terms.iter().any(|t| t.g > 0.0) && terms.iter().any(|t| t.g < 0.0));
    }

    #[test]
    fn interaction_counts_and_signs() {
        let spec = CouplingSpec::uniform(-0.15, 0.15, XYZ).unwrap();
        assert_eq!(
            build_interaction(14, &spec, &mut ModelRng::new(0, 1))
                .unwrap()
                .len(),
            84
        );
        let neg = CouplingSpec::uniform(-0.15, -0.05, XYZ).unwrap();
        let terms = build_interaction(14, &neg, &mut ModelRng::new(0, 1)).unwrap();
        assert!(terms.iter().all(|t| t.g < 0.0));
    }

    #[test]
    fn spec_validation() {
        assert!(CouplingSpec::uniform(0.2, 0.1, XYZ).is_err());
        assert!(CouplingSpec::uniform(0.0, 0.1, &[]).is_err());
        assert!(CouplingSpec::new(CouplingKind::SignFlip, 0.1, 0.2, XYZ).is_err());
        assert!(CouplingSpec::sign_flip(-0.1, XYZ).is_err());
        assert!(CouplingSpec::new(CouplingKind::Fixed, 0.1, 0.2, XYZ).is_err());
        assert_eq!(parse_axes("zx").unwrap(), vec![Axis::Z, Axis::X]);
        assert!(parse_axes("xw").is_err());
        assert_eq!(
            CouplingSpec::uniform(0.0, 1.0, &[Axis::Z, Axis::X])
                .unwrap()
                .axes(),
            &[Axis::X, Axis::Z]
        );
    }

    #[test]
    fn partition_is_checked() {
        let spec = CouplingSpec::uniform(-0.15, 0.15, XYZ).unwrap();
        let mut model =
            ModelInstance::build(-1.0, &Topology::all_pairs(4), &spec, &spec, 5).unwrap();
        assert_eq!(model.n_total(), 6);
        model.int_terms.push(CouplingTerm::new(2, 3, Axis::X, 0.1));
        assert!(model.validate().is_err());
    }
}
