//! Shannon-entropy uncertainty criteria.
//!
//! Entropies are in nats throughout.

use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::HermitianOperator;
use crate::states::DensityMatrix;
use crate::witnesses::Family;

/// Eigenvalues closer than this are treated as one outcome.
pub const CLUSTER_TOL: f64 = 1e-8;
pub const DETECTION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    /// Distinct eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probability_of(&self, value: f64) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .filter(|(e, _)| (**e - value).abs() < CLUSTER_TOL)
            .map(|(_, p)| *p)
            .sum()
    }
}

/// Spectral projectors of `op` as `(eigenvalue, projector)`, eigenvalues
/// ascending and clustered within [`CLUSTER_TOL`].
pub fn spectral_projectors(op: &HermitianOperator) -> Result<Vec<(f64, CMatrix)>> {
    let m = op.to_dense()?;
    let (vals, vecs) = linalg::hermitian_eigen(&m);
    let dim = m.nrows();
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    let mut start = 0;
    while start < vals.len() {
        let mut end = start + 1;
        while end < vals.len() && vals[end] - vals[start] < CLUSTER_TOL {
            end += 1;
        }
        let block = vecs.columns(start, end - start);
        let proj = block * block.adjoint();
        debug_assert_eq!(proj.nrows(), dim);
        let mean = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, proj));
        start = end;
    }
    Ok(out)
}

/// Outcome probabilities `p_i = Tr(P_i rho)` for measuring `op`.
pub fn outcome_distribution(op: &HermitianOperator, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    check_dims(op.n_qubits(), rho.n_qubits())?;
    let terms: Vec<_> = op.terms().collect();
    // c P with a single non-identity Pauli string: outcomes +-c
    if terms.len() == 1 && !terms[0].0.is_identity() {
        let (key, c) = terms[0];
        let mean = HermitianOperator::term(key.to_string_op()).expectation(rho)?;
        let (lo, hi) = ((1.0 - mean) / 2.0, (1.0 + mean) / 2.0);
        let (lo, hi) = (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0));
        let (e, p) = if c > 0.0 { (vec![-c, c], vec![lo, hi]) } else { (vec![c, -c], vec![hi, lo]) };
        return Ok(OutcomeDistribution { eigenvalues: e, probabilities: p });
    }
    let mut eigenvalues = Vec::new();
    let mut probabilities = Vec::new();
    for (e, p) in spectral_projectors(op)? {
        eigenvalues.push(e);
        probabilities.push(linalg::trace(&(p * rho.matrix())).re.max(0.0));
    }
    Ok(OutcomeDistribution { eigenvalues, probabilities })
}

/// `-sum p ln p`, with `0 ln 0 = 0`.
pub fn shannon_entropy(d: &OutcomeDistribution) -> f64 {
    d.probabilities.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

pub fn entropy_of(op: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(&outcome_distribution(op, rho)?))
}

/// `-ln max_ij ||P_i Q_j||^2` over the spectral projectors of `m` and `n`.
///
/// The norm enters squared: for rank-one projectors `||P_i Q_j||` is the
/// overlap `|<a_i|b_j>|`, and the tight bound for one qubit, `H(X) + H(Z)
/// >= ln 2` (saturated by `|0>`), is `-ln` of the squared overlap.
pub fn eur_bound(m: &HermitianOperator, n: &HermitianOperator) -> Result<f64> {
    if m.n_qubits() != n.n_qubits() {
        return Err(Error::DimensionMismatch { expected: m.n_qubits(), found: n.n_qubits() });
    }
    let ps = spectral_projectors(m)?;
    let qs = spectral_projectors(n)?;
    let mut best: f64 = 0.0;
    for (_, p) in &ps {
        for (_, q) in &qs {
            best = best.max(linalg::operator_norm(&(p * q)));
        }
    }
    Ok(-2.0 * best.min(1.0).ln())
}

#[derive(Clone, Debug, Serialize)]
pub struct EurReport {
    /// `H(S_k)` for each generator.
    pub entropies: Vec<f64>,
    pub lhs: f64,
    pub bound: f64,
    pub detected: bool,
}

/// `sum_k H(S_k) >= ln 2` over the canonical generators of the family;
/// a violation certifies genuine multipartite entanglement.
pub fn eur_criterion(rho: &DensityMatrix, family: Family, n: usize) -> Result<EurReport> {
    check_dims(n, rho.n_qubits())?;
    let g = family.generators(n)?;
    let entropies = g
        .generator_operators()
        .iter()
        .map(|s| entropy_of(s, rho))
        .collect::<Result<Vec<_>>>()?;
    let lhs: f64 = entropies.iter().sum();
    let bound = std::f64::consts::LN_2;
    Ok(EurReport { entropies, lhs, bound, detected: lhs < bound - DETECTION_TOL })
}

pub fn eur_criterion_ghz(rho: &DensityMatrix, n: usize) -> Result<(f64, bool)> {
    eur_criterion(rho, Family::Ghz, n).map(|r| (r.lhs, r.detected))
}

pub fn eur_criterion_cluster(rho: &DensityMatrix, n: usize) -> Result<(f64, bool)> {
    eur_criterion(rho, Family::Cluster, n).map(|r| (r.lhs, r.detected))
}
