//! Concrete states: GHZ, cluster, graph, W, white-noise mixtures and the
//! two-component mixture left after measuring one qubit of a four-qubit
//! cluster state.
//!
//! Computational basis index `j` carries qubit 1 in its most significant bit,
//! matching [`crate::pauli`].

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::stabilizer::{self, StabilizerGroup};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Normalized state vector on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<PureState> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!("vector length {dim} is not a power of two")));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} differs from 1")));
        }
        Ok(PureState { n: dim.trailing_zeros() as usize, amplitudes })
    }

    /// Normalizes `v` first. Fails on the zero vector.
    pub fn normalized(v: CVector) -> Result<PureState> {
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        PureState::new(v / Complex64::new(norm, 0.0))
    }

    pub fn basis(n: usize, index: usize) -> Result<PureState> {
        linalg::check_size(n)?;
        let mut v = CVector::zeros(1 << n);
        if index >= v.len() {
            return Err(Error::OutOfRange(format!("basis index {index} out of range for {n} qubits")));
        }
        v[index] = ONE;
        PureState::new(v)
    }

    /// Tensor product of single-qubit states, qubit 1 first.
    pub fn product(factors: &[CVector]) -> Result<PureState> {
        let mut v = CVector::from_vec(vec![ONE]);
        for f in factors {
            v = linalg::kron_vec(&v, f);
        }
        PureState::normalized(v)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> CMatrix {
        linalg::outer(&self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { n: self.n, matrix: self.projector() }
    }
}

/// Dense density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates every invariant, including positivity through an eigensolve.
    pub fn new(matrix: CMatrix) -> Result<DensityMatrix> {
        let dim = matrix.nrows();
        if dim < 2 || !dim.is_power_of_two() || matrix.ncols() != dim {
            return Err(Error::InvalidState(format!("shape {}x{} is not a qubit density matrix", dim, matrix.ncols())));
        }
        let n = dim.trailing_zeros() as usize;
        linalg::check_size(n)?;
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = linalg::min_eigenvalue(&matrix);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { n, matrix })
    }

    /// Skips validation; for constructions that are valid by design.
    pub(crate) fn from_matrix_unchecked(n: usize, matrix: CMatrix) -> DensityMatrix {
        DensityMatrix { n, matrix }
    }

    pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
        linalg::check_size(n)?;
        let dim = 1usize << n;
        Ok(DensityMatrix { n, matrix: linalg::identity(dim) / Complex64::new(dim as f64, 0.0) })
    }

    /// Convex combination `sum_i w_i rho_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let n = first.1.n;
        let mut total = 0.0;
        let mut m = CMatrix::zeros(1 << n, 1 << n);
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::OutOfRange(format!("negative mixture weight {w}")));
            }
            crate::error::check_dims(n, rho.n)?;
            m += &rho.matrix * Complex64::new(*w, 0.0);
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!("mixture weights sum to {total}")));
        }
        Ok(DensityMatrix { n, matrix: m })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigenvalues(&self.matrix)
    }

    /// Numerical rank with eigenvalue cutoff `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&e| e > tol).count()
    }

    pub fn fidelity_with(&self, psi: &PureState) -> Result<f64> {
        crate::error::check_dims(self.n, psi.n)?;
        let v = &self.matrix * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&v).re)
    }
}

/// Simple undirected graph on vertices `0..n` (displayed 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<bool>>,
}

/// JSON form: `{"n": 4, "edges": [[1, 2], [2, 3]]}` with 1-based vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::OutOfRange("graph needs at least one vertex".into()));
        }
        Ok(Graph { n, adjacency: vec![vec![false; n]; n] })
    }

    /// From 1-based edges. Rejects self-loops and out-of-range vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(k, l) in edges {
            if k == 0 || l == 0 || k > n || l > n {
                return Err(Error::OutOfRange(format!("edge ({k}, {l}) outside vertices 1..={n}")));
            }
            if k == l {
                return Err(Error::Precondition(format!("self-loop on vertex {k}")));
            }
            g.adjacency[k - 1][l - 1] = true;
            g.adjacency[l - 1][k - 1] = true;
        }
        Ok(g)
    }

    /// Validates symmetry and the zero diagonal.
    #[allow(clippy::needless_range_loop)]
    pub fn from_adjacency(adjacency: Vec<Vec<bool>>) -> Result<Graph> {
        let n = adjacency.len();
        if n == 0 || adjacency.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("adjacency matrix must be square and nonempty".into()));
        }
        for k in 0..n {
            if adjacency[k][k] {
                return Err(Error::Precondition(format!("adjacency diagonal set at vertex {}", k + 1)));
            }
            for l in 0..n {
                if adjacency[k][l] != adjacency[l][k] {
                    return Err(Error::Precondition(format!("adjacency not symmetric at ({}, {})", k + 1, l + 1)));
                }
            }
        }
        Ok(Graph { n, adjacency })
    }

    pub fn path(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (1..n).map(|k| (k, k + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Star with vertex 1 as the center.
    pub fn star(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (2..=n).map(|k| (1, k)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Graph> {
        let edges: Vec<_> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(spec.n, &edges)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec { n: self.n, edges: self.edges().into_iter().map(|(k, l)| [k, l]).collect() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// 0-based adjacency test.
    pub fn adjacent(&self, k: usize, l: usize) -> bool {
        self.adjacency[k][l]
    }

    pub fn neighbors(&self, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&l| self.adjacency[k][l]).collect()
    }

    /// 1-based edge list with `k < l`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.n {
            for l in k + 1..self.n {
                if self.adjacency[k][l] {
                    out.push((k + 1, l + 1));
                }
            }
        }
        out
    }

    /// Seven vertices: a triangle on 1, 2, 3 with the tail 3-4-5-6-7.
    pub fn triangle7() -> Graph {
        let spec: GraphSpec = serde_json::from_str(include_str!("../data/triangle7.json")).expect("bundled graph");
        Graph::from_spec(&spec).expect("bundled graph")
    }

    pub fn has_triangle(&self) -> bool {
        (0..self.n).any(|a| {
            (a + 1..self.n).any(|b| self.adjacency[a][b] && (b + 1..self.n).any(|c| self.adjacency[a][c] && self.adjacency[b][c]))
        })
    }

    /// Greedy proper coloring in vertex order; returns one color per vertex.
    pub fn greedy_coloring(&self) -> Vec<usize> {
        let mut colors = vec![usize::MAX; self.n];
        for k in 0..self.n {
            let used: BTreeSet<usize> = self.neighbors(k).into_iter().map(|l| colors[l]).collect();
            colors[k] = (0..).find(|c| !used.contains(c)).unwrap();
        }
        colors
    }

    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges().iter().all(|&(k, l)| colors[k - 1] != colors[l - 1])
    }
}

pub fn make_ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("GHZ state needs N >= 2, got {n}")));
    }
    linalg::check_size(n)?;
    let mut v = CVector::zeros(1 << n);
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = s;
    v[(1 << n) - 1] = s;
    PureState::new(v)
}

/// The unique common `+1` eigenvector of a full set of independent generators,
/// read off from the projector `prod_k (S_k + 1) / 2`.
pub fn stabilized_state(group: &StabilizerGroup) -> Result<PureState> {
    let n = group.n_qubits();
    linalg::check_size(n)?;
    let dim = 1usize << n;
    let mut proj = linalg::identity(dim);
    for g in group.generators() {
        let sp = g.left_mul(&proj);
        proj = (proj + sp) * Complex64::new(0.5, 0.0);
    }
    let tr = linalg::trace(&proj);
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::Internal(format!("stabilizer projector has trace {tr}, expected rank 1")));
    }
    let col = (0..dim)
        .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()))
        .unwrap();
    let mut v = proj.column(col).into_owned();
    // fix the global phase: first significant amplitude real and positive
    if let Some(lead) = v.iter().find(|a| a.norm() > 1e-9).copied() {
        v *= lead.conj() / lead.norm();
    }
    PureState::normalized(v)
}

pub fn make_cluster(n: usize) -> Result<PureState> {
    stabilized_state(&stabilizer::cluster_generators(n)?)
}

pub fn make_graph_state(g: &Graph) -> Result<PureState> {
    stabilized_state(&stabilizer::graph_generators(g)?)
}

pub fn make_w3() -> PureState {
    let s = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut v = CVector::zeros(8);
    v[4] = s; // |100>
    v[2] = s; // |010>
    v[1] = s; // |001>
    PureState::new(v).expect("normalized")
}

/// `p 1/2^N + (1 - p) |psi><psi|`.
pub fn mix_with_white_noise(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("noise fraction {p} outside [0, 1]")));
    }
    let dim = 1usize << psi.n;
    let m = psi.projector() * Complex64::new(1.0 - p, 0.0) + linalg::identity(dim) * Complex64::new(p / dim as f64, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(psi.n, m))
}

/// Same white-noise mixing for a mixed target.
pub fn mix_density_with_white_noise(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("noise fraction {p} outside [0, 1]")));
    }
    let dim = 1usize << rho.n;
    let m = rho.matrix() * Complex64::new(1.0 - p, 0.0) + linalg::identity(dim) * Complex64::new(p / dim as f64, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(rho.n, m))
}

/// Equal mixture of `(|00> + |11>)|0>/sqrt2` and `(|00> - |11>)|1>/sqrt2`.
pub fn make_rho3() -> DensityMatrix {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut plus = CVector::zeros(8);
    plus[0b000] = s;
    plus[0b110] = s;
    let mut minus = CVector::zeros(8);
    minus[0b001] = s;
    minus[0b111] = -s;
    let m = (linalg::outer(&plus) + linalg::outer(&minus)) * Complex64::new(0.5, 0.0);
    DensityMatrix::from_matrix_unchecked(3, m)
}

/// `|0000> + |0011> + |1100> - |1111>`, normalized by 1/2.
pub fn make_rotated_cluster4() -> PureState {
    let h = Complex64::new(0.5, 0.0);
    let mut v = CVector::zeros(16);
    v[0b0000] = h;
    v[0b0011] = h;
    v[0b1100] = h;
    v[0b1111] = -h;
    PureState::new(v).expect("normalized")
}

/// `|+>^{(x)n}`.
pub fn plus_state(n: usize) -> Result<PureState> {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::product(&vec![CVector::from_vec(vec![s, s]); n])
}

pub fn zero_state(n: usize) -> Result<PureState> {
    PureState::product(&vec![CVector::from_vec(vec![ONE, ZERO]); n])
}
