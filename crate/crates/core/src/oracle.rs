//! Numerical checks for witness bounds.
//!
//! Maxima over product and biseparable pure states are found by multistart
//! local search. Each value reported is attained by the returned state, so
//! it is a certified lower bound on the true maximum. Restarts run in
//! parallel with a per-restart RNG stream, which keeps results independent
//! of the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::pauli::{HermitianOperator, Letter};
use crate::sampling;
use crate::states::{self, DensityMatrix};
use crate::witnesses::Witness;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const PRODUCT_RESTARTS: usize = 64;
pub const BISEPARABLE_RESTARTS: usize = 32;
/// Largest register the optimizers accept.
pub const ORACLE_MAX_QUBITS: usize = 10;
/// Slack on the smallest eigenvalue for positive semidefiniteness.
pub const PSD_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Stop when a full sweep improves the value by less than this.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl OracleConfig {
    pub fn product() -> OracleConfig {
        OracleConfig { restarts: PRODUCT_RESTARTS, seed: DEFAULT_SEED, tol: 1e-10, max_sweeps: 2000 }
    }

    pub fn biseparable() -> OracleConfig {
        OracleConfig { restarts: BISEPARABLE_RESTARTS, ..OracleConfig::product() }
    }

    pub fn with_restarts(self, restarts: usize) -> OracleConfig {
        OracleConfig { restarts, ..self }
    }

    pub fn with_seed(self, seed: u64) -> OracleConfig {
        OracleConfig { seed, ..self }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Argmax {
    /// One Bloch vector per qubit.
    Product { bloch: Vec<[f64; 3]> },
    /// Qubits of side A (1-based) and the two factor states as `[re, im]`
    /// amplitudes.
    Biseparable { side_a: Vec<usize>, state_a: Vec<[f64; 2]>, state_b: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizationResult {
    pub value: f64,
    pub argmax: Argmax,
    pub restarts_used: usize,
    pub converged: bool,
}

impl OptimizationResult {
    /// The optimizing pure state.
    pub fn state(&self, n: usize) -> Result<states::PureState> {
        match &self.argmax {
            Argmax::Product { bloch } => {
                let f: Vec<CVector> = bloch.iter().map(|b| linalg::bloch_state(b[0], b[1], b[2])).collect();
                states::PureState::product(&f)
            }
            Argmax::Biseparable { side_a, state_a, state_b } => {
                let keep: Vec<usize> = side_a.iter().map(|q| q - 1).collect();
                let a = from_pairs(state_a);
                let b = from_pairs(state_b);
                states::PureState::normalized(linalg::join_states(n, &keep, &a, &b))
            }
        }
    }
}

fn to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|p| num_complex::Complex64::new(p[0], p[1])))
}

fn oracle_size_check(n: usize) -> Result<()> {
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::SizeOverflow { n, max: ORACLE_MAX_QUBITS });
    }
    linalg::check_size(n)
}

// ---------------------------------------------------------------- product states

/// Terms as (letters, coefficient) for fast product evaluation.
struct TermTable {
    n: usize,
    terms: Vec<(Vec<Letter>, f64)>,
}

impl TermTable {
    fn new(op: &HermitianOperator) -> TermTable {
        TermTable { n: op.n_qubits(), terms: op.terms().map(|(k, c)| (k.letters(), c)).collect() }
    }

    fn value(&self, bloch: &[[f64; 3]]) -> f64 {
        self.terms
            .iter()
            .map(|(ls, c)| c * ls.iter().zip(bloch).map(|(l, b)| component(*l, b)).product::<f64>())
            .sum()
    }

    /// Effective single-qubit operator `c0 + b . sigma` on qubit `q`.
    fn effective(&self, bloch: &[[f64; 3]], q: usize) -> (f64, [f64; 3]) {
        let mut c0 = 0.0;
        let mut b = [0.0; 3];
        for (ls, c) in &self.terms {
            let mut w = *c;
            for (p, (l, v)) in ls.iter().zip(bloch).enumerate() {
                if p != q {
                    w *= component(*l, v);
                }
            }
            match ls[q] {
                Letter::I => c0 += w,
                Letter::X => b[0] += w,
                Letter::Y => b[1] += w,
                Letter::Z => b[2] += w,
            }
        }
        (c0, b)
    }
}

fn component(l: Letter, b: &[f64; 3]) -> f64 {
    match l {
        Letter::I => 1.0,
        Letter::X => b[0],
        Letter::Y => b[1],
        Letter::Z => b[2],
    }
}

/// Coordinate ascent from `bloch`. Each step replaces one qubit by the top
/// eigenvector of its effective operator, which is the unit vector along
/// `b`; the value after the step is `c0 + |b|`.
fn ascend_product(t: &TermTable, bloch: &mut [[f64; 3]], cfg: &OracleConfig) -> (f64, bool) {
    let mut value = t.value(bloch);
    for _ in 0..cfg.max_sweeps {
        for q in 0..t.n {
            let (_, b) = t.effective(bloch, q);
            let r = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            if r > 1e-300 {
                bloch[q] = [b[0] / r, b[1] / r, b[2] / r];
            }
        }
        let next = t.value(bloch);
        if next - value < cfg.tol {
            return (next, true);
        }
        value = next;
    }
    (value, false)
}

/// `max <phi|op|phi>` over pure product states `|phi> = (x)_k |psi_k>`.
///
/// The separable set is the convex hull of pure product states, so this is
/// also the maximum over all separable states.
pub fn max_over_product_states(op: &HermitianOperator, cfg: &OracleConfig) -> Result<OptimizationResult> {
    let n = op.n_qubits();
    oracle_size_check(n)?;
    if cfg.restarts == 0 {
        return Err(Error::Precondition("restarts must be at least 1".into()));
    }
    let table = TermTable::new(op);
    let runs: Vec<(f64, bool, Vec<[f64; 3]>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(cfg.seed, r as u64);
            let mut bloch: Vec<[f64; 3]> = (0..n).map(|_| sampling::random_bloch(&mut rng)).collect();
            let (v, conv) = ascend_product(&table, &mut bloch, cfg);
            (v, conv, bloch)
        })
        .collect();
    let (_, converged, bloch) = best(runs);
    let value = table.value(&bloch);
    Ok(OptimizationResult { value, argmax: Argmax::Product { bloch }, restarts_used: cfg.restarts, converged })
}

pub fn min_over_product_states(op: &HermitianOperator, cfg: &OracleConfig) -> Result<OptimizationResult> {
    let mut r = max_over_product_states(&-op.clone(), cfg)?;
    r.value = -r.value;
    Ok(r)
}

/// Highest value, ties to the lowest index.
fn best<T>(runs: Vec<(f64, bool, T)>) -> (f64, bool, T) {
    let mut it = runs.into_iter();
    let mut top = it.next().expect("at least one run");
    for r in it {
        if r.0 > top.0 {
            top = r;
        }
    }
    top
}

// ---------------------------------------------------------------- biseparable states

/// `max <phi_A chi_B|op|phi_A chi_B>` over every bipartition.
///
/// For each split the two factors are optimized alternately, each step
/// taking the top eigenvector of the operator contracted with the other
/// factor. Biseparable mixed states are convex combinations of these, so
/// the bound covers them too.
pub fn max_over_biseparable(op: &HermitianOperator, cfg: &OracleConfig) -> Result<OptimizationResult> {
    let n = op.n_qubits();
    oracle_size_check(n)?;
    if n < 2 {
        return Err(Error::OutOfRange("biseparability needs at least two qubits".into()));
    }
    if cfg.restarts == 0 {
        return Err(Error::Precondition("restarts must be at least 1".into()));
    }
    let dense = op.to_dense()?;
    let splits = sampling::all_bipartitions(n);
    let jobs: Vec<(usize, usize)> =
        (0..splits.len()).flat_map(|s| (0..cfg.restarts).map(move |r| (s, r))).collect();
    let runs: Vec<(f64, bool, (usize, CVector, CVector))> = jobs
        .into_par_iter()
        .map(|(s, r)| {
            let mut rng = stream_rng(cfg.seed, (s * cfg.restarts + r) as u64);
            let (v, conv, a, b) = alternate(&dense, n, &splits[s], &mut rng, cfg);
            (v, conv, (s, a, b))
        })
        .collect();
    let (value, converged, (s, a, b)) = best(runs);
    Ok(OptimizationResult {
        value,
        argmax: Argmax::Biseparable {
            side_a: splits[s].iter().map(|q| q + 1).collect(),
            state_a: to_pairs(&a),
            state_b: to_pairs(&b),
        },
        restarts_used: cfg.restarts * splits.len(),
        converged,
    })
}

fn alternate(
    m: &CMatrix,
    n: usize,
    side_a: &[usize],
    rng: &mut ChaCha8Rng,
    cfg: &OracleConfig,
) -> (f64, bool, CVector, CVector) {
    let side_b: Vec<usize> = (0..n).filter(|q| !side_a.contains(q)).collect();
    let mut b = sampling::haar_vector(rng, 1 << side_b.len());
    let mut a;
    let mut value = f64::NEG_INFINITY;
    for _ in 0..cfg.max_sweeps {
        let (_, va) = linalg::top_eigenpair(&linalg::contract_with_state(m, n, side_a, &b));
        a = va;
        let (vb, vecb) = linalg::top_eigenpair(&linalg::contract_with_state(m, n, &side_b, &a));
        b = vecb;
        if vb - value < cfg.tol {
            return (vb, true, a, b);
        }
        value = vb;
    }
    let (_, va) = linalg::top_eigenpair(&linalg::contract_with_state(m, n, side_a, &b));
    let (vb, vecb) = linalg::top_eigenpair(&linalg::contract_with_state(m, n, &side_b, &va));
    (vb, false, va, vecb)
}

pub fn min_over_biseparable(op: &HermitianOperator, cfg: &OracleConfig) -> Result<OptimizationResult> {
    let mut r = max_over_biseparable(&-op.clone(), cfg)?;
    r.value = -r.value;
    Ok(r)
}

/// Minimum of a three-qubit operator over biseparable pure states.
pub fn min_over_biseparable_w3(op: &HermitianOperator) -> Result<f64> {
    if op.n_qubits() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: op.n_qubits() });
    }
    Ok(min_over_biseparable(op, &OracleConfig::biseparable())?.value)
}

/// `F(x, y) = (1 + sqrt5) 1 - x (X2 + X3) - y (Y2 + Y3) - (X2 X3 + Y2 Y3)`
/// on qubits 2 and 3, with `x, y` the in-plane Bloch components of qubit 1.
pub fn w3_reduced_operator(x: f64, y: f64) -> Result<HermitianOperator> {
    HermitianOperator::from_terms(
        2,
        [("II", 1.0 + 5f64.sqrt()), ("XI", -x), ("IX", -x), ("YI", -y), ("IY", -y), ("XX", -1.0), ("YY", -1.0)],
    )
}

/// Closed form of the smallest eigenvalue of [`w3_reduced_operator`].
pub fn w3_reduced_min_eigenvalue(x: f64, y: f64) -> f64 {
    5f64.sqrt() - (1.0 + 4.0 * (x * x + y * y)).sqrt()
}

// ---------------------------------------------------------------- spectra

pub fn min_eigenvalue(op: &HermitianOperator) -> Result<f64> {
    Ok(linalg::min_eigenvalue(&op.to_dense()?))
}

pub fn max_eigenvalue(op: &HermitianOperator) -> Result<f64> {
    Ok(linalg::max_eigenvalue(&op.to_dense()?))
}

/// Minimum of `<psi|op|psi>` over all pure states.
pub fn global_minimum(op: &HermitianOperator) -> Result<f64> {
    min_eigenvalue(op)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DominanceCertificate {
    pub alpha: f64,
    /// Smallest eigenvalue of `W - alpha * W~`.
    pub min_eigenvalue: f64,
    pub holds: bool,
}

/// `W - alpha * W~ >= 0` up to [`PSD_SLACK`].
pub fn check_dominance(w: &HermitianOperator, reference: &HermitianOperator, alpha: f64) -> Result<DominanceCertificate> {
    if w.n_qubits() != reference.n_qubits() {
        return Err(Error::DimensionMismatch { expected: w.n_qubits(), found: reference.n_qubits() });
    }
    let lam = min_eigenvalue(&(w.clone() - reference.scale(alpha)))?;
    Ok(DominanceCertificate { alpha, min_eigenvalue: lam, holds: lam >= -PSD_SLACK })
}

/// Dominance check for a witness that carries a dominance certificate.
pub fn witness_dominance(w: &Witness) -> Result<Option<DominanceCertificate>> {
    match &w.certificate {
        crate::witnesses::Certificate::Dominance { alpha, reference } => {
            Ok(Some(check_dominance(&w.operator, reference, *alpha)?))
        }
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------- noise thresholds

/// Largest white-noise fraction `p` with `Tr(W rho(p)) < 0`, where
/// `rho(p) = p 1/2^N + (1 - p) rho_target`:
/// `p_limit = -<W> / (Tr W / 2^N - <W>)`.
pub fn noise_threshold_analytic(w: &Witness) -> Result<f64> {
    threshold_from_values(w.expectation_on_target()?, w.operator.constant_term())
}

/// Same formula from the target expectation and `Tr W / 2^N`.
pub fn threshold_from_values(target: f64, mean: f64) -> Result<f64> {
    if target >= 0.0 {
        return Err(Error::UndefinedThreshold(format!("target expectation {target} is not negative")));
    }
    let denom = mean - target;
    if denom <= 0.0 {
        return Err(Error::UndefinedThreshold(format!("denominator {denom} is not positive")));
    }
    Ok(-target / denom)
}

/// Width of the final bisection bracket.
pub const BISECTION_WIDTH: f64 = 1e-4;
const MONOTONE_SAMPLES: usize = 41;

/// Bisection for the noise level at which `criterion` stops detecting the
/// white-noise mixture of `target`.
///
/// Detection must be monotone along the family; this is checked on a grid
/// first. Returns 0 when the target itself is not detected and 1 when even
/// full noise is.
pub fn noise_threshold_empirical<F>(criterion: F, target: &DensityMatrix) -> Result<f64>
where
    F: Fn(&DensityMatrix) -> Result<bool>,
{
    let at = |p: f64| -> Result<bool> { criterion(&states::mix_density_with_white_noise(target, p)?) };
    let grid: Vec<bool> = (0..MONOTONE_SAMPLES)
        .map(|i| at(i as f64 / (MONOTONE_SAMPLES - 1) as f64))
        .collect::<Result<_>>()?;
    if grid.windows(2).any(|w| !w[0] && w[1]) {
        return Err(Error::Precondition("detection is not monotone in the noise fraction".into()));
    }
    if !grid[0] {
        return Ok(0.0);
    }
    if grid[MONOTONE_SAMPLES - 1] {
        return Ok(1.0);
    }
    let last = grid.iter().rposition(|&d| d).unwrap();
    let mut lo = last as f64 / (MONOTONE_SAMPLES - 1) as f64;
    let mut hi = (last + 1) as f64 / (MONOTONE_SAMPLES - 1) as f64;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Empirical threshold of a witness on its own target.
pub fn witness_threshold_empirical(w: &Witness) -> Result<f64> {
    noise_threshold_empirical(|rho| w.detects(rho), &w.target)
}

/// Best white-noise threshold of a two-setting stabilizer witness whose
/// settings each fix a subgroup with `d1` and `d2` elements:
/// `1 / (4 - 2/d1 - 2/d2)`.
pub fn optimal_two_setting_noise(d1: f64, d2: f64) -> f64 {
    1.0 / (4.0 - 2.0 / d1 - 2.0 / d2)
}

/// Subgroup sizes `(d1, d2)` of the two standard settings.
pub fn two_setting_subgroup_sizes(family: crate::witnesses::Family, n: usize) -> (f64, f64) {
    match family {
        crate::witnesses::Family::Ghz => (2.0, 2f64.powi(n as i32 - 1)),
        crate::witnesses::Family::Cluster if n.is_multiple_of(2) => {
            let d = 2f64.powi(n as i32 / 2);
            (d, d)
        }
        crate::witnesses::Family::Cluster => (2f64.powi((n as i32 + 1) / 2), 2f64.powi((n as i32 - 1) / 2)),
    }
}
