//! Text and file formats: state specifications, dense density matrices,
//! graphs and operators.
//!
//! State spec grammar: `kind[:n][:p=<noise>][:graph=<file>][:path=<file>]`
//! with `kind` one of `ghz`, `cluster`, `graph`, `w3`, `rho3`, `file`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{HermitianOperator, PauliString};
use crate::states::{self, DensityMatrix, Graph, GraphSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Ghz,
    Cluster,
    Graph,
    W3,
    Rho3,
    File,
}

impl FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<StateKind> {
        Ok(match s {
            "ghz" => StateKind::Ghz,
            "cluster" => StateKind::Cluster,
            "graph" => StateKind::Graph,
            "w3" => StateKind::W3,
            "rho3" => StateKind::Rho3,
            "file" => StateKind::File,
            _ => return Err(Error::Parse(format!("unknown state kind '{s}'"))),
        })
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Ghz => "ghz",
            StateKind::Cluster => "cluster",
            StateKind::Graph => "graph",
            StateKind::W3 => "w3",
            StateKind::Rho3 => "rho3",
            StateKind::File => "file",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub kind: StateKind,
    pub n: Option<usize>,
    /// White-noise fraction mixed in; 0 by default.
    pub noise_p: f64,
    pub graph_path: Option<PathBuf>,
    pub file_path: Option<PathBuf>,
}

pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let mut parts = text.trim().split(':');
    let kind: StateKind = parts.next().unwrap_or("").parse()?;
    let mut spec = StateSpec { kind, n: None, noise_p: 0.0, graph_path: None, file_path: None };
    for part in parts {
        let bad = || Error::Parse(format!("bad state spec field '{part}' in '{text}'"));
        if let Some(v) = part.strip_prefix("p=") {
            let p: f64 = v.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::OutOfRange(format!("noise fraction {p} outside [0, 1]")));
            }
            spec.noise_p = p;
        } else if let Some(v) = part.strip_prefix("graph=") {
            spec.graph_path = Some(PathBuf::from(v));
        } else if let Some(v) = part.strip_prefix("path=") {
            spec.file_path = Some(PathBuf::from(v));
        } else if spec.n.is_none() && !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit()) {
            spec.n = Some(part.parse().map_err(|_| bad())?);
        } else {
            return Err(bad());
        }
    }
    match spec.kind {
        StateKind::Ghz | StateKind::Cluster if spec.n.is_none() => {
            return Err(Error::Parse(format!("'{text}': {} needs a qubit count", spec.kind)));
        }
        StateKind::W3 | StateKind::Rho3 if spec.n.is_some_and(|n| n != 3) => {
            return Err(Error::Parse(format!("'{text}': {} is a three-qubit state", spec.kind)));
        }
        StateKind::Graph if spec.graph_path.is_none() => {
            return Err(Error::Parse(format!("'{text}': graph states need graph=<file>")));
        }
        StateKind::File if spec.file_path.is_none() => {
            return Err(Error::Parse(format!("'{text}': file states need path=<file>")));
        }
        _ => {}
    }
    if spec.graph_path.is_some() && spec.kind != StateKind::Graph {
        return Err(Error::Parse(format!("'{text}': graph= only applies to graph states")));
    }
    if spec.file_path.is_some() && spec.kind != StateKind::File {
        return Err(Error::Parse(format!("'{text}': path= only applies to file states")));
    }
    Ok(spec)
}

impl FromStr for StateSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<StateSpec> {
        parse_state_spec(s)
    }
}

impl StateSpec {
    /// Build the state, with noise mixed in. Relative graph and file paths
    /// are resolved against `base` when given.
    pub fn load_in(&self, base: Option<&Path>) -> Result<DensityMatrix> {
        let resolve = |p: &PathBuf| match base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.clone(),
        };
        let rho = match self.kind {
            StateKind::Ghz => states::make_ghz(self.n.unwrap())?.to_density(),
            StateKind::Cluster => states::make_cluster(self.n.unwrap())?.to_density(),
            StateKind::W3 => states::make_w3().to_density(),
            StateKind::Rho3 => states::make_rho3(),
            StateKind::Graph => {
                let g = load_graph(&resolve(self.graph_path.as_ref().unwrap()))?;
                if let Some(n) = self.n {
                    crate::error::check_dims(n, g.n_vertices())?;
                }
                states::make_graph_state(&g)?.to_density()
            }
            StateKind::File => {
                let rho = load_dense_state(&resolve(self.file_path.as_ref().unwrap()))?;
                if let Some(n) = self.n {
                    crate::error::check_dims(n, rho.n_qubits())?;
                }
                rho
            }
        };
        if self.noise_p > 0.0 {
            states::mix_density_with_white_noise(&rho, self.noise_p)
        } else {
            Ok(rho)
        }
    }

    pub fn load(&self) -> Result<DensityMatrix> {
        self.load_in(None)
    }
}

// ---------------------------------------------------------------- dense states

/// Row-major `[re, im]` pairs.
pub fn matrix_to_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

pub fn pairs_to_matrix(pairs: &[[f64; 2]]) -> Result<CMatrix> {
    let dim = (pairs.len() as f64).sqrt().round() as usize;
    if dim * dim != pairs.len() || dim < 2 {
        return Err(Error::Parse(format!("{} entries do not form a square matrix", pairs.len())));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        let p = pairs[r * dim + c];
        Complex64::new(p[0], p[1])
    }))
}

/// Reads a JSON array of `[re, im]` pairs in row-major order and validates
/// it as a density matrix.
pub fn load_dense_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_dense_state(&text)
}

pub fn parse_dense_state(text: &str) -> Result<DensityMatrix> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    DensityMatrix::new(pairs_to_matrix(&pairs)?)
}

pub fn dense_state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&matrix_to_pairs(rho.matrix())).expect("finite floats")
}

pub fn save_dense_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, dense_state_to_json(rho))?;
    Ok(())
}

// ---------------------------------------------------------------- graphs

/// JSON `{"n": .., "edges": [[k, l], ..]}` or a plain edge list with one
/// 1-based `k l` pair per line (`#` starts a comment; an optional `n N`
/// line fixes the vertex count).
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let spec: GraphSpec = serde_json::from_str(text)?;
        return Graph::from_spec(&spec);
    }
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse(format!("edge list line {}: '{line}'", i + 1)))
        };
        match f.as_slice() {
            ["n", v] => n = Some(num(v)?),
            [a, b] => edges.push((num(a)?, num(b)?)),
            _ => return Err(Error::Parse(format!("edge list line {}: '{line}'", i + 1))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0));
    Graph::from_edges(n, &edges)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------- operators

/// JSON form of an operator: `{"n": 3, "terms": {"XXX": -1.0, "III": 2.0}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub n: usize,
    pub terms: BTreeMap<String, f64>,
}

impl OperatorSpec {
    pub fn from_operator(op: &HermitianOperator) -> OperatorSpec {
        OperatorSpec { n: op.n_qubits(), terms: op.terms().map(|(k, c)| (k.to_string(), c)).collect() }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let mut op = HermitianOperator::zero(self.n);
        for (text, c) in &self.terms {
            let p: PauliString = text.parse()?;
            if p.n_qubits() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, found: p.n_qubits() });
            }
            op = op + HermitianOperator::from_pauli(&p, *c)?;
        }
        Ok(op)
    }
}

pub fn parse_operator(text: &str) -> Result<HermitianOperator> {
    serde_json::from_str::<OperatorSpec>(text)?.to_operator()
}

pub fn load_operator(path: &Path) -> Result<HermitianOperator> {
    parse_operator(&std::fs::read_to_string(path)?)
}
