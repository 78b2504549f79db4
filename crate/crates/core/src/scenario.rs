// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration, the preset registry and the `key = value`
//! config format.
//!
//! Config files hold one `key = value` pair per line, `#` starts a comment.
//! `preset = NAME` replaces the whole configuration with that preset, so it
//! normally comes first; later keys override it. Keys:
//!
//! | key             | value                                                  |
//! |-----------------|--------------------------------------------------------|
//! | `preset`        | registry name, see [`PRESETS`]                         |
//! | `n_env`         | environment spin count N                               |
//! | `topology`      | `all_pairs`, `triangular_nn`, `square_nn`, `ring_nn`, `edge_list` |
//! | `triangle_boundary` | `periodic` (default) or `open`                     |
//! | `triangle_dims` | periodic cluster `ROWSxCOLS`, e.g. `2x7`                |
//! | `triangle_rows` | comma list of open-patch row lengths, e.g. `4,5,5`; implies `open` |
//! | `square_dims`   | `ROWSxCOLS`, e.g. `2x7`                                |
//! | `edge_file`     | path of an edge list, used with `topology = edge_list` |
//! | `omega_kind`, `omega_lo`, `omega_hi`, `omega_axes` | environment couplings   |
//! | `delta_kind`, `delta_lo`, `delta_hi`, `delta_axes` | system–bath couplings   |
//! | `j`             | central exchange, negative                             |
//! | `seed`          | 64-bit seed                                            |
//! | `t_max`, `dt_out` | horizon and output interval in units of 1/|J|        |
//! | `cheb_tol`, `lanczos_tol` | numerical tolerances                         |
//! | `output_path`   | output directory                                       |
//!
//! Empty `triangle_rows` / `square_dims` select the default patch for `n_env`.
//! Empty `triangle_dims` selects the most nearly square periodic cluster
//! whose sites all have six distinct neighbours.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{
    format_axes, load_edge_list, parse_axes, CouplingSpec, ModelInstance, Topology, TopologyKind,
    TriangleBoundary,
};
use crate::state::{Axis, MAX_SPINS};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Name of the preset this config started from, if any.
    pub name: String,
    pub n_env: usize,
    pub topology: TopologyKind,
    pub triangle_boundary: TriangleBoundary,
    pub triangle_dims: Option<(usize, usize)>,
    pub triangle_rows: Option<Vec<usize>>,
    pub square_dims: Option<(usize, usize)>,
    pub edge_file: Option<PathBuf>,
    pub omega: CouplingSpec,
    pub delta: CouplingSpec,
    pub j: f64,
    pub seed: u64,
    pub t_max: f64,
    pub dt_out: f64,
    pub cheb_tol: f64,
    pub lanczos_tol: f64,
    pub output_path: PathBuf,
}

const XYZ: &[Axis] = &Axis::ALL;
const Z: &[Axis] = &[Axis::Z];

fn uniform(lo: f64, hi: f64, axes: &[Axis]) -> CouplingSpec {
    CouplingSpec::uniform(lo, hi, axes).expect("preset ranges are valid")
}

fn sign_flip(magnitude: f64, axes: &[Axis]) -> CouplingSpec {
    CouplingSpec::sign_flip(magnitude, axes).expect("preset magnitudes are valid")
}

/// A named, fully specified scenario.
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioConfig,
}

impl Preset {
    pub fn config(&self) -> ScenarioConfig {
        let mut config = (self.build)();
        config.name = self.name.to_string();
        config
    }
}

fn base(
    n_env: usize,
    topology: TopologyKind,
    omega: CouplingSpec,
    delta: CouplingSpec,
) -> ScenarioConfig {
    ScenarioConfig {
        name: String::new(),
        n_env,
        topology,
        triangle_boundary: TriangleBoundary::Periodic,
        triangle_dims: None,
        triangle_rows: None,
        square_dims: None,
        edge_file: None,
        omega,
        delta,
        j: -1.0,
        seed: 1,
        t_max: 400.0,
        dt_out: 1.0,
        cheb_tol: 1e-15,
        lanczos_tol: 1e-10,
        output_path: PathBuf::from("out"),
    }
}

fn glass(n_env: usize) -> ScenarioConfig {
    base(
        n_env,
        TopologyKind::AllPairs,
        uniform(-0.15, 0.15, XYZ),
        uniform(-0.15, 0.15, XYZ),
    )
}

/// Ising `H_int`, Δ^z = ±magnitude, with an anisotropic Heisenberg glass.
fn ising_coupled_glass(delta: f64, omega: f64) -> ScenarioConfig {
    ScenarioConfig {
        t_max: 2000.0,
        ..base(
            16,
            TopologyKind::AllPairs,
            uniform(-omega, omega, XYZ),
            sign_flip(delta, Z),
        )
    }
}

fn fig4(n_env: usize, ising_int: bool, ising_env: bool) -> ScenarioConfig {
    let omega = if ising_env {
        sign_flip(0.075, Z)
    } else {
        uniform(-0.15, 0.15, XYZ)
    };
    let delta = if ising_int {
        sign_flip(0.075, Z)
    } else {
        uniform(-0.15, 0.15, XYZ)
    };
    ScenarioConfig {
        t_max: 2000.0,
        ..base(n_env, TopologyKind::AllPairs, omega, delta)
    }
}

pub static PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        description: "spin glass, N=14, Omega and Delta uniform in [-0.15,0.15]",
        build: || glass(14),
    },
    Preset {
        name: "fig1b",
        description: "spin glass, N=16, Omega and Delta uniform in [-0.15,0.15]",
        build: || glass(16),
    },
    Preset {
        name: "fig1c",
        description: "spin glass, N=18, Omega and Delta uniform in [-0.15,0.15]",
        build: || glass(18),
    },
    Preset {
        name: "fig2",
        description:
            "triangular antiferromagnet, N=14, Omega in [-0.55,-0.45], Delta in [-0.15,-0.05]",
        build: || {
            base(
                14,
                TopologyKind::TriangularNn,
                uniform(-0.55, -0.45, XYZ),
                uniform(-0.15, -0.05, XYZ),
            )
        },
    },
    Preset {
        name: "fig3a",
        description: "N=16, Ising H_int Delta^z = +-0.0375, Omega in [-0.15,0.15]",
        build: || ising_coupled_glass(0.0375, 0.15),
    },
    Preset {
        name: "fig3b",
        description: "N=16, Ising H_int Delta^z = +-0.075, Omega in [-0.0375,0.0375]",
        build: || ising_coupled_glass(0.075, 0.0375),
    },
    Preset {
        name: "fig3c",
        description: "N=16, Ising H_int Delta^z = +-0.075, Omega in [-0.15,0.15]",
        build: || ising_coupled_glass(0.075, 0.15),
    },
    Preset {
        name: "fig3d",
        description: "N=16, Ising H_int Delta^z = +-0.075, Omega in [-0.3,0.3]",
        build: || ising_coupled_glass(0.075, 0.3),
    },
    Preset {
        name: "fig3e",
        description: "N=16, Ising H_int Delta^z = +-0.075, Omega in [-1,1]",
        build: || ising_coupled_glass(0.075, 1.0),
    },
    Preset {
        name: "fig3f",
        description: "N=16, Ising H_int Delta^z = +-0.15, Omega in [-0.3,0.3]",
        build: || ising_coupled_glass(0.15, 0.3),
    },
    Preset {
        name: "fig4a",
        description: "N=14, Ising H_int with Ising H_e (z couplings +-0.075)",
        build: || fig4(14, true, true),
    },
    Preset {
        name: "fig4b",
        description: "N=14, Heisenberg-like H_int with Ising H_e",
        build: || fig4(14, false, true),
    },
    Preset {
        name: "fig4c",
        description: "N=14, Heisenberg-like H_int with Heisenberg-like H_e",
        build: || fig4(14, false, false),
    },
    Preset {
        name: "fig4d",
        description: "N=14, Ising H_int with Heisenberg-like H_e",
        build: || fig4(14, true, false),
    },
    Preset {
        name: "fig4e",
        description: "N=18, Ising H_int with Heisenberg-like H_e",
        build: || fig4(18, true, false),
    },
    Preset {
        name: "fig4-long",
        description: "fig4d continued to t|J| = 6000",
        build: || ScenarioConfig {
            t_max: 6000.0,
            ..fig4(14, true, false)
        },
    },
];

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(Preset::config)
        .ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        preset("fig1a").expect("fig1a is registered")
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl ScenarioConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "preset" => *self = preset(value)?,
            "name" => self.name = value.to_string(),
            "n_env" => self.n_env = parse_num(key, value)?,
            "topology" => self.topology = value.parse()?,
            "triangle_boundary" => self.triangle_boundary = value.parse()?,
            "triangle_rows" => {
                self.triangle_rows = if value.is_empty() {
                    None
                } else {
                    self.triangle_boundary = TriangleBoundary::Open;
                    Some(
                        value
                            .split(',')
                            .map(|v| parse_num(key, v.trim()))
                            .collect::<Result<_>>()?,
                    )
                }
            }
            "square_dims" => self.square_dims = parse_dims(key, value)?,
            "triangle_dims" => {
                self.triangle_dims = parse_dims(key, value)?;
                if self.triangle_dims.is_some() {
                    self.triangle_boundary = TriangleBoundary::Periodic;
                }
            }
            "edge_file" => {
                self.edge_file = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            "omega_kind" => self.omega.kind = value.parse()?,
            "omega_lo" => self.omega.lo = parse_num(key, value)?,
            "omega_hi" => self.omega.hi = parse_num(key, value)?,
            "omega_axes" => self.omega.set_axes(&parse_axes(value)?)?,
            "delta_kind" => self.delta.kind = value.parse()?,
            "delta_lo" => self.delta.lo = parse_num(key, value)?,
            "delta_hi" => self.delta.hi = parse_num(key, value)?,
            "delta_axes" => self.delta.set_axes(&parse_axes(value)?)?,
            "j" => self.j = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "t_max" => self.t_max = parse_num(key, value)?,
            "dt_out" => self.dt_out = parse_num(key, value)?,
            "cheb_tol" => self.cheb_tol = parse_num(key, value)?,
            "lanczos_tol" => self.lanczos_tol = parse_num(key, value)?,
            "output_path" => self.output_path = PathBuf::from(value),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a config file's text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    /// Serializes every field in config-file form; parsing the result
    /// reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("name", self.name.clone());
        line("n_env", self.n_env.to_string());
        line("topology", self.topology.to_string());
        line("triangle_boundary", self.triangle_boundary.to_string());
        line(
            "triangle_dims",
            self.triangle_dims
                .map(|(r, c)| format!("{r}x{c}"))
                .unwrap_or_default(),
        );
        line(
            "triangle_rows",
            self.triangle_rows
                .as_ref()
                .map(|r| {
                    r.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_default(),
        );
        line(
            "square_dims",
            self.square_dims
                .map(|(r, c)| format!("{r}x{c}"))
                .unwrap_or_default(),
        );
        line(
            "edge_file",
            self.edge_file
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        for (prefix, spec) in [("omega", &self.omega), ("delta", &self.delta)] {
            line(&format!("{prefix}_kind"), spec.kind.to_string());
            line(&format!("{prefix}_lo"), format!("{:?}", spec.lo));
            line(&format!("{prefix}_hi"), format!("{:?}", spec.hi));
            line(&format!("{prefix}_axes"), format_axes(spec.axes()));
        }
        line("j", format!("{:?}", self.j));
        line("seed", self.seed.to_string());
        line("t_max", format!("{:?}", self.t_max));
        line("dt_out", format!("{:?}", self.dt_out));
        line("cheb_tol", format!("{:?}", self.cheb_tol));
        line("lanczos_tol", format!("{:?}", self.lanczos_tol));
        line("output_path", self.output_path.display().to_string());
        out
    }

    /// Label for error context: preset name plus seed.
    pub fn label(&self) -> String {
        let name = if self.name.is_empty() {
            "custom"
        } else {
            &self.name
        };
        format!("{name} (seed {})", self.seed)
    }

    pub fn output_steps(&self) -> usize {
        (self.t_max / self.dt_out + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return fail(format!("t_max must be positive, got {}", self.t_max));
        }
        if !(self.dt_out > 0.0 && self.dt_out.is_finite()) {
            return fail(format!("dt_out must be positive, got {}", self.dt_out));
        }
        if self.t_max / self.dt_out > 1e7 {
            return fail(format!(
                "t_max/dt_out = {} exceeds 1e7 output steps",
                self.t_max / self.dt_out
            ));
        }
        if self.n_env + 2 > MAX_SPINS {
            return fail(format!(
                "n_env + 2 = {} exceeds {MAX_SPINS} spins",
                self.n_env + 2
            ));
        }
        if !(self.cheb_tol > 0.0) || !(self.lanczos_tol > 0.0) {
            return fail("tolerances must be positive".into());
        }
        if self.triangle_rows.is_some() && self.topology != TopologyKind::TriangularNn {
            return fail("triangle_rows requires topology = triangular_nn".into());
        }
        if self.triangle_dims.is_some() && self.topology != TopologyKind::TriangularNn {
            return fail("triangle_dims requires topology = triangular_nn".into());
        }
        if self.triangle_dims.is_some() && self.triangle_boundary == TriangleBoundary::Open {
            return fail(
                "triangle_dims describes a periodic cluster, set triangle_boundary = periodic"
                    .into(),
            );
        }
        if self.triangle_rows.is_some() && self.triangle_boundary == TriangleBoundary::Periodic {
            return fail(
                "triangle_rows describes an open patch, set triangle_boundary = open".into(),
            );
        }
        if self.square_dims.is_some() && self.topology != TopologyKind::SquareNn {
            return fail("square_dims requires topology = square_nn".into());
        }
        if self.topology == TopologyKind::EdgeList && self.edge_file.is_none() {
            return fail("topology = edge_list requires edge_file".into());
        }
        self.omega.validate()?;
        self.delta.validate()?;
        Ok(())
    }

    pub fn topology(&self) -> Result<Topology> {
        let n = self.n_env;
        let topology = match self.topology {
            TopologyKind::AllPairs => Topology::all_pairs(n),
            TopologyKind::RingNn => Topology::ring(n),
            TopologyKind::TriangularNn => match &self.triangle_rows {
                None if self.triangle_boundary == TriangleBoundary::Periodic => {
                    let torus = match self.triangle_dims {
                        Some((r, c)) if r * c != n => {
                            return Err(Error::Config(format!(
                                "triangle_dims {r}x{c} does not match n_env = {n}"
                            )))
                        }
                        Some((r, c)) => Topology::triangular_torus_dims(r, c),
                        None => Topology::triangular_torus(n),
                    };
                    torus.ok_or_else(|| {
                        Error::Config(format!(
                            "no periodic triangular cluster of {n} sites gives six distinct neighbours, use triangle_boundary = open"
                        ))
                    })?
                }
                None => Topology::triangular_open(n),
                Some(rows) => {
                    let t = Topology::triangular_rows(rows.clone());
                    if t.n_env != n {
                        return Err(Error::Config(format!(
                            "triangle_rows {rows:?} hold {} spins but n_env = {n}",
                            t.n_env
                        )));
                    }
                    t
                }
            },
            TopologyKind::SquareNn => match self.square_dims {
                Some((r, c)) => {
                    if r * c != n {
                        return Err(Error::Config(format!(
                            "square_dims {r}x{c} does not match n_env = {n}"
                        )));
                    }
                    Topology::square_dims(r, c)
                }
                None => Topology::square(n),
            },
            TopologyKind::EdgeList => {
                let path = self.edge_file.as_ref().ok_or_else(|| {
                    Error::Config("topology = edge_list requires edge_file".into())
                })?;
                Topology::custom(n, load_edge_list(path)?)
            }
        };
        topology.validate()?;
        Ok(topology)
    }

    pub fn build_model(&self) -> Result<ModelInstance> {
        self.validate()?;
        ModelInstance::build(
            self.j,
            &self.topology()?,
            &self.omega,
            &self.delta,
            self.seed,
        )
    }
}

fn parse_dims(key: &str, value: &str) -> Result<Option<(usize, usize)>> {
    if value.is_empty() {
        return Ok(None);
    }
    let (r, c) = value
        .split_once('x')
        .ok_or_else(|| Error::Config(format!("`{key}`: expected ROWSxCOLS, got `{value}`")))?;
    Ok(Some((parse_num(key, r.trim())?, parse_num(key, c.trim())?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        for expected in [
            "fig1a",
            "fig1b",
            "fig1c",
            "fig2",
            "fig3a",
            "fig3b",
            "fig3c",
            "fig3d",
            "fig3e",
            "fig3f",
            "fig4a",
            "fig4b",
            "fig4c",
            "fig4d",
            "fig4e",
            "fig4-long",
        ] {
            assert!(names.contains(&expected), "{expected}");
        }
        for p in PRESETS {
            p.config().validate().unwrap();
            p.config().topology().unwrap();
        }
    }

    #[test]
    fn fig2_preset_matches_caption() {
        let c = preset("fig2").unwrap();
        assert_eq!(c.n_env, 14);
        assert_eq!(c.topology, TopologyKind::TriangularNn);
        assert_eq!((c.omega.lo, c.omega.hi), (-0.55, -0.45));
        assert_eq!((c.delta.lo, c.delta.hi), (-0.15, -0.05));
    }

    #[test]
    fn parse_with_overrides() {
        let text =
            "# comment\npreset = fig2\nseed = 42  # trailing\nt_max = 10\n\ndelta_axes = z\n";
        let c = ScenarioConfig::from_text(text).unwrap();
        assert_eq!(c.name, "fig2");
        assert_eq!(c.seed, 42);
        assert_eq!(c.t_max, 10.0);
        assert_eq!(c.delta.axes(), &[Axis::Z]);
        assert_eq!(c.omega.lo, -0.55);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = ScenarioConfig::from_text("colour = blue\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(ScenarioConfig::from_text("seed 4\n").is_err());
        assert!(ScenarioConfig::from_text("seed = -4\n").is_err());
        assert!(ScenarioConfig::from_text("preset = fig9\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = preset("fig3b").unwrap();
        c.seed = 99;
        c.square_dims = None;
        let back = ScenarioConfig::from_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
        let mut t = preset("fig2").unwrap();
        t.triangle_boundary = TriangleBoundary::Open;
        t.triangle_rows = Some(vec![7, 7]);
        assert_eq!(ScenarioConfig::from_text(&t.to_text()).unwrap(), t);
        let open = ScenarioConfig::from_text("preset = fig2\ntriangle_rows = 4,5,5\n").unwrap();
        assert_eq!(open.triangle_boundary, TriangleBoundary::Open);
        assert_eq!(open.topology().unwrap().bonds().unwrap().len(), 27);
        assert_eq!(
            preset("fig2")
                .unwrap()
                .topology()
                .unwrap()
                .bonds()
                .unwrap()
                .len(),
            42
        );
        let mut p = preset("fig2").unwrap();
        p.set("triangle_rows", "7,7").unwrap();
        p.set("triangle_dims", "2x7").unwrap();
        assert!(p.validate().is_err());
        p.triangle_rows = None;
        assert_eq!(ScenarioConfig::from_text(&p.to_text()).unwrap(), p);
        p.set("triangle_dims", "1x14").unwrap();
        assert_eq!(p.topology().unwrap().bonds().unwrap().len(), 42);
        // rows of two sites cannot close
        p.set("triangle_dims", "7x2").unwrap();
        assert!(p.topology().is_err());
    }

    #[test]
    fn spec_edits_in_any_order() {
        let text = "omega_kind = sign_flip\nomega_lo = 0.2\nomega_hi = 0.2\nomega_axes = z\n";
        let c = ScenarioConfig::from_text(text).unwrap();
        assert_eq!(c.omega, CouplingSpec::sign_flip(0.2, &[Axis::Z]).unwrap());
        let bad = ScenarioConfig::from_text("omega_kind = sign_flip\n").unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn guards() {
        let mut c = ScenarioConfig::default();
        c.n_env = 23;
        assert!(c.validate().is_err());
        c = ScenarioConfig::default();
        c.dt_out = 1e-6;
        c.t_max = 100.0;
        assert!(c.validate().is_err());
        c = ScenarioConfig::default();
        c.square_dims = Some((2, 7));
        assert!(c.validate().is_err());
        c = preset("fig2").unwrap();
        c.triangle_boundary = TriangleBoundary::Open;
        c.triangle_rows = Some(vec![7, 6]);
        assert!(c.topology().is_err());
        c.triangle_boundary = TriangleBoundary::Periodic;
        assert!(c.validate().is_err());
        c = preset("fig2").unwrap();
        c.n_env = 5;
        assert_eq!(c.topology().unwrap_err().exit_code(), 2);
    }
}
