//! Dense reference implementations written directly from the definitions,
//! independent of the library's Pauli algebra and state builders.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use stabwit::HermitianOperator;

pub type M = DMatrix<Complex64>;
pub type V = DVector<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(letter: char) -> M {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match letter {
        'I' => M::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => M::from_row_slice(2, 2, &[o, l, l, o]),
        'Y' => M::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => M::from_row_slice(2, 2, &[l, o, o, -l]),
        _ => panic!("bad letter {letter}"),
    }
}

/// Qubit 1 is the leftmost letter and the most significant tensor factor.
pub fn pauli(s: &str) -> M {
    s.chars().fold(M::identity(1, 1), |acc, ch| acc.kronecker(&single(ch)))
}

/// Dense form rebuilt from the printed Pauli terms.
pub fn dense(op: &HermitianOperator) -> M {
    let dim = 1usize << op.n_qubits();
    let mut out = M::zeros(dim, dim);
    for (key, coef) in op.terms() {
        out += pauli(&key.to_string()) * c(coef, 0.0);
    }
    out
}

pub fn ghz(n: usize) -> V {
    let mut v = V::zeros(1 << n);
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = s;
    v[(1 << n) - 1] = s;
    v
}

/// Linear cluster state: CZ on neighbours applied to |+>^N.
pub fn cluster(n: usize) -> V {
    let amp = (0.5f64).powf(n as f64 / 2.0);
    V::from_fn(1 << n, |x, _| {
        let bit = |q: usize| (x >> (n - 1 - q)) & 1;
        let parity: usize = (0..n - 1).map(|q| bit(q) & bit(q + 1)).sum();
        c(if parity.is_multiple_of(2) { amp } else { -amp }, 0.0)
    })
}

pub fn w3() -> V {
    let s = c(1.0 / 3f64.sqrt(), 0.0);
    let mut v = V::zeros(8);
    v[0b001] = s;
    v[0b010] = s;
    v[0b100] = s;
    v
}

pub fn projector(v: &V) -> M {
    v * v.adjoint()
}

pub fn noisy(v: &V, p: f64) -> M {
    let dim = v.len();
    projector(v) * c(1.0 - p, 0.0) + M::identity(dim, dim) * c(p / dim as f64, 0.0)
}

pub fn expect(op: &M, rho: &M) -> f64 {
    (op * rho).trace().re
}

pub fn min_eig(m: &M) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// White-noise threshold from the expectation on the target and the trace.
pub fn threshold(w: &M, target: &M) -> f64 {
    let dim = w.nrows() as f64;
    let t = expect(w, target);
    -t / (w.trace().re / dim - t)
}

/// Two Pauli strings can be read off one local setting.
pub fn locally_compatible(a: &str, b: &str) -> bool {
    a.chars().zip(b.chars()).all(|(x, y)| x == 'I' || y == 'I' || x == y)
}
