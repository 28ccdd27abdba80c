//! Random states for multistart optimization and sampling tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{self, CVector};
use crate::states::{DensityMatrix, PureState};

/// Haar-random vector of dimension `dim` (complex Gaussian, normalized).
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-12 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    PureState::new(haar_vector(rng, 1 << n)).expect("normalized")
}

/// Uniform point on the Bloch sphere.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let v = haar_vector(rng, 2);
    let (a, b) = (v[0], v[1]);
    let x = 2.0 * (a.conj() * b).re;
    let y = 2.0 * (a.conj() * b).im;
    let z = a.norm_sqr() - b.norm_sqr();
    [x, y, z]
}

/// Product of independent Haar-random qubits.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    let factors: Vec<CVector> = (0..n).map(|_| haar_vector(rng, 2)).collect();
    PureState::product(&factors).expect("normalized")
}

/// A nontrivial bipartition `A | B` of `0..n`, as the sorted qubits of `A`.
/// `A` always contains qubit 0 so every split appears once.
pub fn random_bipartition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let count = (1usize << (n - 1)) - 1;
    let k = rng.random_range(0..count);
    bipartition(n, k)
}

/// All `2^{n-1} - 1` bipartitions, each listed by the side holding qubit 0.
pub fn all_bipartitions(n: usize) -> Vec<Vec<usize>> {
    (0..(1usize << (n - 1)) - 1).map(|k| bipartition(n, k)).collect()
}

fn bipartition(n: usize, k: usize) -> Vec<usize> {
    // bit i of k decides whether qubit i + 1 joins qubit 0; k = 2^{n-1} - 1 is excluded
    let mut a = vec![0];
    for q in 1..n {
        if (k >> (q - 1)) & 1 == 1 {
            a.push(q);
        }
    }
    a
}

/// Pure state that factorizes across `side_a | rest`, Haar-random on each side.
pub fn random_biseparable_on<R: Rng + ?Sized>(rng: &mut R, n: usize, side_a: &[usize]) -> PureState {
    let a = haar_vector(rng, 1 << side_a.len());
    let b = haar_vector(rng, 1 << (n - side_a.len()));
    PureState::new(linalg::join_states(n, side_a, &a, &b)).expect("normalized")
}

pub fn random_biseparable_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> PureState {
    let side = random_bipartition(rng, n);
    random_biseparable_on(rng, n, &side)
}

/// Random convex mixture of `terms` random product states.
pub fn random_separable_mixture<R: Rng + ?Sized>(rng: &mut R, n: usize, terms: usize) -> Result<DensityMatrix> {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let states: Vec<DensityMatrix> = (0..terms).map(|_| random_product_state(rng, n).to_density()).collect();
    let parts: Vec<(f64, &DensityMatrix)> = weights.iter().map(|w| w / total).zip(states.iter()).collect();
    DensityMatrix::mixture(&parts)
}
