//! Small dense linear-algebra helpers over complex matrices.
//!
//! Everything here works on `nalgebra` dynamic matrices. Basis index `j` of an
//! `n`-qubit space encodes qubit 1 in the most significant bit.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default size guard for dense rendering.
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Largest qubit count allowed for dense rendering, overridable through
/// `STABWIT_MAX_QUBITS`.
pub fn max_qubits() -> usize {
    std::env::var("STABWIT_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

pub fn check_size(n: usize) -> Result<()> {
    let max = max_qubits();
    if n > max || n >= usize::BITS as usize - 1 {
        Err(Error::SizeOverflow { n, max })
    } else {
        Ok(())
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Columns of the returned matrix are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(f64::NAN)
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues(m).last().copied().unwrap_or(f64::NAN)
}

/// Largest eigenvalue and a unit eigenvector for it.
pub fn top_eigenpair(m: &CMatrix) -> (f64, CVector) {
    if m.nrows() == 2 {
        return top_eigenpair_2x2(m);
    }
    let (vals, vecs) = hermitian_eigen(m);
    let last = vals.len() - 1;
    (vals[last], vecs.column(last).into_owned())
}

/// Lowest eigenvalue and a unit eigenvector for it.
pub fn bottom_eigenpair(m: &CMatrix) -> (f64, CVector) {
    let (vals, vecs) = hermitian_eigen(m);
    (vals[0], vecs.column(0).into_owned())
}

fn top_eigenpair_2x2(m: &CMatrix) -> (f64, CVector) {
    // m = a 1 + bx X + by Y + bz Z
    let a = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let bz = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let off = 0.5 * (m[(1, 0)] + m[(0, 1)].conj());
    let (bx, by) = (off.re, off.im);
    let norm = (bx * bx + by * by + bz * bz).sqrt();
    (a + norm, bloch_state(bx, by, bz))
}

/// Pure single-qubit state with Bloch vector along `(x, y, z)`; `|0>` when
/// the vector vanishes.
pub fn bloch_state(x: f64, y: f64, z: f64) -> CVector {
    let r = (x * x + y * y + z * z).sqrt();
    if r < 1e-300 {
        return CVector::from_vec(vec![ONE, ZERO]);
    }
    let (x, y, z) = (x / r, y / r, z / r);
    let theta = z.clamp(-1.0, 1.0).acos();
    let phi = y.atan2(x);
    CVector::from_vec(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Reduce `op` to the qubits in `keep` by contracting the remaining qubits
/// against the pure state `other` (amplitudes indexed over the complement,
/// most significant qubit first).
///
/// `keep` must be sorted and `other` must have length `2^(n - keep.len())`.
pub fn contract_with_state(op: &CMatrix, n: usize, keep: &[usize], other: &CVector) -> CMatrix {
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let da = 1usize << keep.len();
    let db = 1usize << rest.len();
    debug_assert_eq!(other.len(), db);
    let index = |a: usize, b: usize| -> usize {
        let mut j = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            if (a >> (keep.len() - 1 - pos)) & 1 == 1 {
                j |= 1 << (n - 1 - q);
            }
        }
        for (pos, &q) in rest.iter().enumerate() {
            if (b >> (rest.len() - 1 - pos)) & 1 == 1 {
                j |= 1 << (n - 1 - q);
            }
        }
        j
    };
    let full: Vec<Vec<usize>> = (0..da).map(|a| (0..db).map(|b| index(a, b)).collect()).collect();
    let mut out = CMatrix::zeros(da, da);
    for a in 0..da {
        for a2 in 0..da {
            let mut acc = ZERO;
            for b in 0..db {
                let cb = other[b].conj();
                if cb == ZERO {
                    continue;
                }
                let row = full[a][b];
                for b2 in 0..db {
                    acc += cb * op[(row, full[a2][b2])] * other[b2];
                }
            }
            out[(a, a2)] = acc;
        }
    }
    out
}

/// Embed a state on `keep` (sorted) and a state on the complement into the
/// full `n`-qubit register.
pub fn join_states(n: usize, keep: &[usize], a: &CVector, b: &CVector) -> CVector {
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let mut out = CVector::zeros(1 << n);
    for j in 0..(1usize << n) {
        let mut ia = 0usize;
        for &q in keep {
            ia = (ia << 1) | ((j >> (n - 1 - q)) & 1);
        }
        let mut ib = 0usize;
        for &q in &rest {
            ib = (ib << 1) | ((j >> (n - 1 - q)) & 1);
        }
        out[j] = a[ia] * b[ib];
    }
    out
}

/// Largest singular value (operator 2-norm).
pub fn operator_norm(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    max_eigenvalue(&gram).max(0.0).sqrt()
}
