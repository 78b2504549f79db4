// SPDX-License-Identifier: Apache-2.0

//! Environment bond graphs. Site indices here are 0-based environment
//! indices; the model shifts them by 2 when building coupling terms.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    /// Every pair i < j; the spin-glass environment.
    AllPairs,
    TriangularNn,
    SquareNn,
    RingNn,
    /// Adjacency read from an edge-list file.
    EdgeList,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::AllPairs => "all_pairs",
            TopologyKind::TriangularNn => "triangular_nn",
            TopologyKind::SquareNn => "square_nn",
            TopologyKind::RingNn => "ring_nn",
            TopologyKind::EdgeList => "edge_list",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all_pairs" => TopologyKind::AllPairs,
            "triangular_nn" => TopologyKind::TriangularNn,
            "square_nn" => TopologyKind::SquareNn,
            "ring_nn" => TopologyKind::RingNn,
            "edge_list" => TopologyKind::EdgeList,
            other => return Err(Error::Config(format!("unknown topology `{other}`"))),
        })
    }
}

/// Boundary of a triangular environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TriangleBoundary {
    #[default]
    Periodic,
    Open,
}

impl fmt::Display for TriangleBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriangleBoundary::Periodic => "periodic",
            TriangleBoundary::Open => "open",
        })
    }
}

impl FromStr for TriangleBoundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(TriangleBoundary::Periodic),
            "open" => Ok(TriangleBoundary::Open),
            other => Err(Error::Config(format!(
                "unknown triangle boundary `{other}`, expected `periodic` or `open`"
            ))),
        }
    }
}

/// Concrete geometry of the environment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lattice {
    AllPairs,
    /// Open-boundary triangular patch. Row `r` holds `rows[r]` sites and is
    /// shifted by half a lattice constant when `r` is odd, so consecutive
    /// rows interlock. `[4, 5, 5]` is the default 14-site patch and `[7, 7]`
    /// the 2×7 rhombic strip.
    Triangular {
        rows: Vec<usize>,
    },
    /// Periodic triangular cluster of `d2` rows with `d1` sites each: lattice
    /// points `i·a₁ + j·a₂` modulo the superlattice spanned by `d1·a₁` and
    /// `b·a₁ + d2·a₂`, where `a₁`, `a₂` are primitive vectors at 60°. Rows
    /// wrap onto themselves and the last row wraps onto the first with a
    /// twist of `b` sites. Site `y·d1 + x` is the point `(x, y)`.
    TriangularTorus {
        d1: usize,
        b: usize,
        d2: usize,
    },
    /// Open-boundary `rows × cols` grid, sites numbered row-major.
    Square {
        rows: usize,
        cols: usize,
    },
    /// Periodic chain.
    Ring,
    Custom {
        edges: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub lattice: Lattice,
    pub n_env: usize,
}

impl Topology {
    pub fn all_pairs(n_env: usize) -> Self {
        Topology {
            lattice: Lattice::AllPairs,
            n_env,
        }
    }

    pub fn ring(n_env: usize) -> Self {
        Topology {
            lattice: Lattice::Ring,
            n_env,
        }
    }

    /// Default periodic cluster of `n_env` sites, or the default open patch
    /// when no periodic cluster of that size has 3·`n_env` distinct bonds.
    pub fn triangular(n_env: usize) -> Self {
        Self::triangular_torus(n_env).unwrap_or_else(|| Self::triangular_open(n_env))
    }

    /// Open triangular patch with the default row layout for `n_env`.
    pub fn triangular_open(n_env: usize) -> Self {
        Self::triangular_rows(default_triangle_rows(n_env))
    }

    /// Periodic `rows × cols` cluster over the most nearly square
    /// factorization of `n_env` that admits a valid twist, e.g. 2×7 for 14.
    pub fn triangular_torus(n_env: usize) -> Option<Self> {
        (1..=n_env)
            .filter(|r| n_env.is_multiple_of(*r) && r * r <= n_env)
            .rev()
            .find_map(|rows| Self::triangular_torus_dims(rows, n_env / rows))
    }

    /// Periodic `rows × cols` cluster with the smallest twist that gives
    /// every site six distinct neighbours.
    pub fn triangular_torus_dims(rows: usize, cols: usize) -> Option<Self> {
        if rows == 0 || cols == 0 {
            return None;
        }
        let b = (0..cols).find(|&b| torus_bonds(cols, b, rows).is_some())?;
        Some(Topology {
            lattice: Lattice::TriangularTorus {
                d1: cols,
                b,
                d2: rows,
            },
            n_env: rows * cols,
        })
    }

    pub fn triangular_rows(rows: Vec<usize>) -> Self {
        Topology {
            n_env: rows.iter().sum(),
            lattice: Lattice::Triangular { rows },
        }
    }

    /// Square grid with the most nearly square factorization of `n_env`.
    pub fn square(n_env: usize) -> Self {
        let (rows, cols) = default_square_dims(n_env).unwrap_or((1, n_env));
        Topology {
            lattice: Lattice::Square { rows, cols },
            n_env,
        }
    }

    pub fn square_dims(rows: usize, cols: usize) -> Self {
        Topology {
            lattice: Lattice::Square { rows, cols },
            n_env: rows * cols,
        }
    }

    pub fn custom(n_env: usize, edges: Vec<(usize, usize)>) -> Self {
        Topology {
            lattice: Lattice::Custom { edges },
            n_env,
        }
    }

    pub fn kind(&self) -> TopologyKind {
        match self.lattice {
            Lattice::AllPairs => TopologyKind::AllPairs,
            Lattice::Triangular { .. } | Lattice::TriangularTorus { .. } => {
                TopologyKind::TriangularNn
            }
            Lattice::Square { .. } => TopologyKind::SquareNn,
            Lattice::Ring => TopologyKind::RingNn,
            Lattice::Custom { .. } => TopologyKind::EdgeList,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_env;
        if n < 2 {
            return Err(Error::Validation(format!(
                "an environment needs at least 2 spins, got {n}"
            )));
        }
        match &self.lattice {
            Lattice::AllPairs => {}
            Lattice::Ring => {
                if n < 3 {
                    return Err(Error::Validation(format!(
                        "a ring needs at least 3 spins, got {n}"
                    )));
                }
            }
            Lattice::Square { rows, cols } => {
                if *rows < 2 || *cols < 2 || rows * cols != n {
                    return Err(Error::Validation(format!(
                        "square lattice {rows}x{cols} does not tile {n} spins with both sides >= 2"
                    )));
                }
            }
            Lattice::Triangular { rows } => {
                if rows.len() < 2 || rows.contains(&0) || rows.iter().sum::<usize>() != n || n < 3 {
                    return Err(Error::Validation(format!(
                        "triangular rows {rows:?} do not form a patch of {n} spins"
                    )));
                }
            }
            Lattice::TriangularTorus { d1, b, d2 } => {
                if d1 * d2 != n || b >= d1 || torus_bonds(*d1, *b, *d2).is_none() {
                    return Err(Error::Validation(format!(
                        "periodic triangular cluster ({d1}, {b}, {d2}) is not a valid {n}-site cluster"
                    )));
                }
            }
            Lattice::Custom { edges } => {
                let mut seen = std::collections::HashSet::new();
                for &(i, j) in edges {
                    if i >= n || j >= n {
                        return Err(Error::Validation(format!(
                            "edge ({i}, {j}) out of range for {n} environment spins"
                        )));
                    }
                    if i == j {
                        return Err(Error::Validation(format!("self-loop on site {i}")));
                    }
                    if !seen.insert((i.min(j), i.max(j))) {
                        return Err(Error::Validation(format!("duplicate edge ({i}, {j})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Bonds in enumeration order. This order fixes the random draw order.
    pub fn bonds(&self) -> Result<Vec<(usize, usize)>> {
        self.validate()?;
        let n = self.n_env;
        Ok(match &self.lattice {
            Lattice::AllPairs => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
            Lattice::Ring => (0..n).map(|k| (k, (k + 1) % n)).collect(),
            Lattice::Square { rows, cols } => {
                let (rows, cols) = (*rows, *cols);
                let mut bonds = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        let s = r * cols + c;
                        if c + 1 < cols {
                            bonds.push((s, s + 1));
                        }
                        if r + 1 < rows {
                            bonds.push((s, s + cols));
                        }
                    }
                }
                bonds
            }
            Lattice::Triangular { rows } => triangular_bonds(rows),
            Lattice::TriangularTorus { d1, b, d2 } => {
                torus_bonds(*d1, *b, *d2).expect("validated above")
            }
            Lattice::Custom { edges } => edges.clone(),
        })
    }
}

fn default_triangle_rows(n_env: usize) -> Vec<usize> {
    let count = ((n_env as f64).sqrt().floor() as usize).max(2);
    let (base, extra) = (n_env / count, n_env % count);
    (0..count)
        .map(|r| base + usize::from(r >= count - extra))
        .collect()
}

fn default_square_dims(n_env: usize) -> Option<(usize, usize)> {
    (2..=n_env)
        .take_while(|r| r * r <= n_env)
        .filter(|r| n_env.is_multiple_of(*r))
        .last()
        .map(|r| (r, n_env / r))
}

fn triangular_bonds(rows: &[usize]) -> Vec<(usize, usize)> {
    let starts: Vec<usize> = rows
        .iter()
        .scan(0, |acc, &len| {
            let s = *acc;
            *acc += len;
            Some(s)
        })
        .collect();
    let mut bonds = Vec::new();
    for (r, &len) in rows.iter().enumerate() {
        for c in 0..len {
            let s = starts[r] + c;
            if c + 1 < len {
                bonds.push((s, s + 1));
            }
            if let Some(&next_len) = rows.get(r + 1) {
                // even rows sit at integer x, odd rows at half-integer x
                let partners: [Option<usize>; 2] = if r % 2 == 0 {
                    [c.checked_sub(1), Some(c)]
                } else {
                    [Some(c), Some(c + 1)]
                };
                for cn in partners.into_iter().flatten() {
                    if cn < next_len {
                        bonds.push((s, starts[r + 1] + cn));
                    }
                }
            }
        }
    }
    bonds
}

fn torus_site(d1: usize, b: usize, d2: usize, i: i64, j: i64) -> usize {
    let (d1, b, d2) = (d1 as i64, b as i64, d2 as i64);
    let q = j.div_euclid(d2);
    let y = j - q * d2;
    let x = (i - q * b).rem_euclid(d1);
    (y * d1 + x) as usize
}

/// Bonds along `a₁`, `a₂` and `a₂ − a₁` from every site, or `None` when the
/// cluster is too small for these to be 3n distinct non-loop bonds.
fn torus_bonds(d1: usize, b: usize, d2: usize) -> Option<Vec<(usize, usize)>> {
    let mut bonds = Vec::with_capacity(3 * d1 * d2);
    let mut seen = std::collections::HashSet::new();
    for y in 0..d2 as i64 {
        for x in 0..d1 as i64 {
            let s = torus_site(d1, b, d2, x, y);
            for (dx, dy) in [(1, 0), (0, 1), (-1, 1)] {
                let t = torus_site(d1, b, d2, x + dx, y + dy);
                if s == t || !seen.insert((s.min(t), s.max(t))) {
                    return None;
                }
                bonds.push((s, t));
            }
        }
    }
    Some(bonds)
}

/// Parses "i j" pairs, one per line; `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[i, j]) => edges.push((i, j)),
            _ => {
                return Err(Error::Config(format!(
                    "edge list line {}: expected two site indices, got `{raw}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(edges)
}

pub fn load_edge_list(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}
