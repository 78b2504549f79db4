// SPDX-License-Identifier: Apache-2.0

//! Exact closed-system dynamics of two antiferromagnetically coupled spins
//! interacting with a bath of spin-1/2 particles.
//!
//! The environment starts in its ground state and the central pair in
//! `|↑↓⟩`. The state is propagated with a Chebyshev expansion of
//! `exp(-iHt)` while the pair's correlation `⟨S₁·S₂⟩`, its concurrence and
//! purity, and the energy split between system, bath and coupling are
//! recorded.
//!
//! Units: ħ = 1, J = −1; couplings in units of |J| and times in 1/|J|.

pub mod eigensolver;
pub mod error;
pub mod model;
pub mod observables;
pub mod output;
pub mod propagator;
pub mod runner;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
pub use model::{CouplingKind, CouplingSpec, ModelInstance, ModelRng, Topology, TopologyKind};
pub use runner::{run_scenario, run_sweep, RunOutput, RunSummary, TimeSeriesRecord};
pub use scenario::{preset, ScenarioConfig, PRESETS};
pub use state::{Axis, CouplingTerm, Hamiltonian, SpinState};
