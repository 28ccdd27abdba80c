//! Local uncertainty relations.
//!
//! Each criterion pairs observables `A_i` on qubits `1..k` with `B_i` on
//! `k+1..N`. Every `A_i, B_i` squares to the identity, and within each side
//! the observables anticommute pairwise, so `sum_i var(A_i) >= n - 1` on that
//! side. For `M_i = A_i + B_i` this gives, for separable states,
//!
//! ```text
//! 1 + sum_i <A_i B_i> - 1/2 sum_i <M_i>^2 >= 0.
//! ```
//!
//! The first two terms are the linear witness expectation; the squared
//! means are the nonlinear correction.

use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::linalg;
use crate::pauli::{HermitianOperator, Letter, PauliString};
use crate::states::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LurReport {
    pub linear_part: f64,
    /// Half the sum of squared means of `A_i + B_i`; never negative.
    pub correction: f64,
    pub total: f64,
    pub detected: bool,
}

pub const DETECTION_TOL: f64 = 1e-12;
const VARIANCE_CLIP: f64 = 1e-10;

/// `<op^2> - <op>^2`, with round-off below zero clipped.
pub fn variance(op: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    let sq = op.try_mul(op)?;
    let mean = op.expectation(rho)?;
    let v = sq.expectation(rho)? - mean * mean;
    if v < -VARIANCE_CLIP {
        return Err(Error::Internal(format!("negative variance {v}")));
    }
    Ok(v.max(0.0))
}

/// A local observable pair `(A, B)` for one term of a criterion.
#[derive(Clone, Debug)]
pub struct LurPair {
    pub a: PauliString,
    pub b: PauliString,
}

fn pauli_on(n: usize, sites: &[(usize, Letter)], negative: bool) -> PauliString {
    let p = PauliString::on_sites(n, sites);
    if negative {
        -p
    } else {
        p
    }
}

fn xs(range: std::ops::Range<usize>) -> Vec<(usize, Letter)> {
    range.map(|q| (q, Letter::X)).collect()
}

/// `A_1 = X^1..X^k, A_2 = Z^k, B_1 = -X^{k+1}..X^N, B_2 = -Z^{k+1}`.
pub fn ghz_pairs(n: usize, k: usize) -> Result<Vec<LurPair>> {
    check_cut(n, k)?;
    Ok(vec![
        LurPair { a: pauli_on(n, &xs(0..k), false), b: pauli_on(n, &xs(k..n), true) },
        LurPair { a: pauli_on(n, &[(k - 1, Letter::Z)], false), b: pauli_on(n, &[(k, Letter::Z)], true) },
    ])
}

/// [`ghz_pairs`] plus `A_3 = X^1..X^{k-1} Y^k` and
/// `B_3 = Y^{k+1} X^{k+2}..X^N`.
///
/// `B_3` carries a plus sign so that `A_3 B_3 = -S_1 S_{k+1}`, which makes
/// the linear part equal to the three-term witness `1 - S_1 - S_m - S_1 S_m`
/// with `m = k + 1`.
pub fn ghz_three_pairs(n: usize, k: usize) -> Result<Vec<LurPair>> {
    let mut pairs = ghz_pairs(n, k)?;
    let mut a = xs(0..k - 1);
    a.push((k - 1, Letter::Y));
    let mut b = vec![(k, Letter::Y)];
    b.extend(xs(k + 1..n));
    pairs.push(LurPair { a: pauli_on(n, &a, false), b: pauli_on(n, &b, false) });
    Ok(pairs)
}

/// `A_1 = Z^{k-1} X^k, B_1 = -Z^{k+1}, A_2 = Z^k, B_2 = -X^{k+1} Z^{k+2}`;
/// Z factors outside `1..N` are dropped.
pub fn cluster_pairs(n: usize, k: usize) -> Result<Vec<LurPair>> {
    check_cut(n, k)?;
    let q = k - 1; // 0-based index of qubit k
    let mut a1 = vec![(q, Letter::X)];
    if q >= 1 {
        a1.insert(0, (q - 1, Letter::Z));
    }
    let mut b2 = vec![(q + 1, Letter::X)];
    if q + 2 < n {
        b2.push((q + 2, Letter::Z));
    }
    Ok(vec![
        LurPair { a: pauli_on(n, &a1, false), b: pauli_on(n, &[(q + 1, Letter::Z)], true) },
        LurPair { a: pauli_on(n, &[(q, Letter::Z)], false), b: pauli_on(n, &b2, true) },
    ])
}

fn check_cut(n: usize, k: usize) -> Result<()> {
    if n < 2 || k < 1 || k >= n {
        return Err(Error::OutOfRange(format!("cut k = {k} outside 1..={}", n.saturating_sub(1))));
    }
    Ok(())
}

/// Evaluate `1 + sum <A_i B_i> - 1/2 sum <A_i + B_i>^2`.
pub fn evaluate_pairs(rho: &DensityMatrix, pairs: &[LurPair]) -> Result<LurReport> {
    let mut linear = 1.0;
    let mut correction = 0.0;
    for p in pairs {
        let ab = p.a.try_mul(&p.b)?;
        linear += HermitianOperator::from_pauli(&ab, 1.0)?.expectation(rho)?;
        let m = HermitianOperator::term(p.a) + HermitianOperator::term(p.b);
        let mean = m.expectation(rho)?;
        correction += 0.5 * mean * mean;
    }
    let total = linear - correction;
    Ok(LurReport { linear_part: linear, correction, total, detected: total < -DETECTION_TOL })
}

/// The two-pair GHZ criterion with cut after qubit `k`.
pub fn lur_ghz(rho: &DensityMatrix, n: usize, k: usize) -> Result<LurReport> {
    check_dims(n, rho.n_qubits())?;
    evaluate_pairs(rho, &ghz_pairs(n, k)?)
}

/// The three-pair GHZ criterion refining `1 - S_1 - S_m - S_1 S_m`; the cut
/// sits after qubit `m - 1`.
pub fn lur_ghz_three(rho: &DensityMatrix, n: usize, m: usize) -> Result<LurReport> {
    check_dims(n, rho.n_qubits())?;
    if m < 2 || m > n {
        return Err(Error::OutOfRange(format!("m = {m} outside 2..={n}")));
    }
    evaluate_pairs(rho, &ghz_three_pairs(n, m - 1)?)
}

/// The cluster criterion refining `1 - S_k - S_{k+1}`.
pub fn lur_cluster(rho: &DensityMatrix, n: usize, k: usize) -> Result<LurReport> {
    check_dims(n, rho.n_qubits())?;
    evaluate_pairs(rho, &cluster_pairs(n, k)?)
}

/// `sum_i <A_i>^2` for observables that square to one and anticommute
/// pairwise; both conditions are checked on dense matrices.
pub fn anticommuting_mean_bound(ops: &[HermitianOperator], rho: &DensityMatrix) -> Result<f64> {
    let dense = ops.iter().map(|o| o.to_dense()).collect::<Result<Vec<_>>>()?;
    let dim = rho.matrix().nrows();
    let id = linalg::identity(dim);
    for (i, a) in dense.iter().enumerate() {
        if a.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: rho.n_qubits(), found: ops[i].n_qubits() });
        }
        if (a * a - &id).norm() > 1e-10 {
            return Err(Error::Precondition(format!("observable {i} does not square to the identity")));
        }
        for (j, b) in dense.iter().enumerate().skip(i + 1) {
            if (a * b + b * a).norm() > 1e-10 {
                return Err(Error::Precondition(format!("observables {i} and {j} do not anticommute")));
            }
        }
    }
    ops.iter().map(|o| o.expectation(rho).map(|m| m * m)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{self, make_ghz, mix_with_white_noise, DensityMatrix};
    use crate::witnesses;

    fn op(s: &str) -> HermitianOperator {
        HermitianOperator::term(PauliString::must(s))
    }

    #[test]
    fn single_qubit_variances() {
        let zero = states::zero_state(1).unwrap().to_density();
        assert!(variance(&op("Z"), &zero).unwrap().abs() < 1e-15);
        assert!((variance(&op("X"), &zero).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn products_reproduce_generators() {
        for n in 2..=6 {
            let g = crate::stabilizer::ghz_generators(n).unwrap();
            for k in 1..n {
                let pairs = ghz_three_pairs(n, k).unwrap();
                let s1 = g.generators()[0];
                let sk = g.generators()[k];
                assert_eq!(pairs[0].a * pairs[0].b, -s1);
                assert_eq!(pairs[1].a * pairs[1].b, -sk);
                assert_eq!(pairs[2].a * pairs[2].b, -(s1 * sk));
            }
        }
        for n in 3..=6 {
            let g = crate::stabilizer::cluster_generators(n).unwrap();
            for k in 1..n {
                let pairs = cluster_pairs(n, k).unwrap();
                assert_eq!(pairs[0].a * pairs[0].b, -g.generators()[k - 1], "n={n} k={k}");
                assert_eq!(pairs[1].a * pairs[1].b, -g.generators()[k], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn sides_are_local_and_anticommute() {
        for n in 3..=5 {
            for k in 1..n {
                for pairs in [ghz_three_pairs(n, k).unwrap(), cluster_pairs(n, k).unwrap()] {
                    for p in &pairs {
                        assert!(p.a.key().support().iter().all(|&q| q < k));
                        assert!(p.b.key().support().iter().all(|&q| q >= k));
                    }
                    for i in 0..pairs.len() {
                        for j in i + 1..pairs.len() {
                            assert!(!pairs[i].a.commutes(&pairs[j].a));
                            assert!(!pairs[i].b.commutes(&pairs[j].b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ghz_values() {
        for n in 3..=5 {
            let ghz = make_ghz(n).unwrap().to_density();
            for k in 1..n {
                let r = lur_ghz(&ghz, n, k).unwrap();
                assert!((r.linear_part + 1.0).abs() < 1e-12 && r.correction.abs() < 1e-12);
                let w = witnesses::ghz_two_term(n, k + 1).unwrap();
                let noisy = mix_with_white_noise(&make_ghz(n).unwrap(), 0.37).unwrap();
                let r2 = lur_ghz(&noisy, n, k).unwrap();
                assert!((r2.linear_part - w.expectation(&noisy).unwrap()).abs() < 1e-12);
                let r3 = lur_ghz_three(&ghz, n, k + 1).unwrap();
                assert!((r3.linear_part + 2.0).abs() < 1e-12 && r3.correction.abs() < 1e-12);
                let w3 = witnesses::ghz_three_term(n, k + 1).unwrap();
                let r4 = lur_ghz_three(&noisy, n, k + 1).unwrap();
                assert!((r4.linear_part - w3.expectation(&noisy).unwrap()).abs() < 1e-12);
            }
            let half = mix_with_white_noise(&make_ghz(n).unwrap(), 0.5).unwrap();
            assert!(lur_ghz(&half, n, 1).unwrap().total.abs() < 1e-12);
            let zero = states::zero_state(n).unwrap().to_density();
            assert!(lur_ghz(&zero, n, 1).unwrap().total >= 0.0);
            let plus = states::plus_state(n).unwrap().to_density();
            assert!(lur_ghz_three(&plus, n, 2).unwrap().total >= -1e-12);
        }
        let ghz = make_ghz(3).unwrap().to_density();
        assert!(lur_ghz(&ghz, 3, 3).is_err());
        assert!(lur_ghz(&ghz, 4, 1).is_err());
    }

    #[test]
    fn cluster_values() {
        for n in 3..=5 {
            let c = states::make_cluster(n).unwrap().to_density();
            let mixed = DensityMatrix::maximally_mixed(n).unwrap();
            for k in 1..n {
                let r = lur_cluster(&c, n, k).unwrap();
                assert!(r.total <= -1.0 + 1e-12);
                assert!((lur_cluster(&mixed, n, k).unwrap().total - 1.0).abs() < 1e-12);
                let w = witnesses::cluster_two_term(n, k).unwrap();
                assert!((r.linear_part - w.expectation(&c).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lur_beats_witness_on_constructed_state() {
        // 0.6 GHZ3 + 0.4 |100>: linear part 0.2, correction 0.32
        let ghz = make_ghz(3).unwrap().to_density();
        let flip = states::PureState::basis(3, 0b100).unwrap().to_density();
        let rho = DensityMatrix::mixture(&[(0.6, &ghz), (0.4, &flip)]).unwrap();
        let r = lur_ghz(&rho, 3, 1).unwrap();
        assert!((r.linear_part - 0.2).abs() < 1e-12);
        assert!((r.total + 0.12).abs() < 1e-12);
        assert!(r.detected);
    }

    #[test]
    fn anticommuting_bound() {
        let zero = states::zero_state(1).unwrap().to_density();
        let v = anticommuting_mean_bound(&[op("X"), op("Y"), op("Z")], &zero).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(matches!(anticommuting_mean_bound(&[op("X"), op("X")], &zero), Err(Error::Precondition(_))));
        let half = op("Z").scale(0.5);
        assert!(anticommuting_mean_bound(&[half], &zero).is_err());
    }
}
