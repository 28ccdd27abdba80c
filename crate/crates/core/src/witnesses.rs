//! Witness and Bell-type operator constructors.
//!
//! Every constructor returns a [`Witness`]: the operator as a real sum of
//! Pauli terms together with its target state, the kind of entanglement it
//! certifies, the closed-form white-noise threshold and the number of local
//! measurement settings it is claimed to need.
//!
//! Product-form operators are built by symbolic expansion of
//! `prod (S_k + 1) / 2`, so term counts and setting partitions stay exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE};
use crate::pauli::{HermitianOperator, PauliString};
use crate::stabilizer::{self, StabilizerGroup};
use crate::states::{self, DensityMatrix, Graph, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionClass {
    RulesOutFullSeparability,
    GenuineMultipartite,
}

impl fmt::Display for DetectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionClass::RulesOutFullSeparability => "rules_out_full_separability",
            DetectionClass::GenuineMultipartite => "genuine_multipartite",
        })
    }
}

/// Why an operator is nonnegative on the states it is meant to exclude.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Nonnegative on product states; checked by maximizing the
    /// non-constant part over product states.
    ProductStates,
    /// `W - alpha * reference` is positive semidefinite, where `reference` is
    /// a projector witness for genuine multipartite entanglement.
    Dominance { alpha: f64, reference: HermitianOperator },
    /// Nonnegative on pure biseparable states; checked by direct
    /// minimization over every bipartition.
    Biseparable,
}

impl Certificate {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Certificate::Dominance { alpha, .. } => Some(*alpha),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub name: String,
    pub operator: HermitianOperator,
    /// State the witness is built around; mixed for `rho3`.
    pub target: DensityMatrix,
    pub target_pure: Option<PureState>,
    pub detection_class: DetectionClass,
    /// Closed-form white-noise threshold, when one is known.
    pub analytic_noise_threshold: Option<f64>,
    pub claimed_settings: usize,
    pub certificate: Certificate,
}

impl Witness {
    fn new(
        name: impl Into<String>,
        operator: HermitianOperator,
        target: PureState,
        detection_class: DetectionClass,
        threshold: Option<f64>,
        claimed_settings: usize,
        certificate: Certificate,
    ) -> Witness {
        Witness {
            name: name.into(),
            operator,
            target: target.to_density(),
            target_pure: Some(target),
            detection_class,
            analytic_noise_threshold: threshold,
            claimed_settings,
            certificate,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.operator.n_qubits()
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        self.operator.expectation(rho)
    }

    pub fn expectation_on_target(&self) -> Result<f64> {
        self.expectation(&self.target)
    }

    pub fn detects(&self, rho: &DensityMatrix) -> Result<bool> {
        Ok(self.expectation(rho)? < -DETECTION_TOL)
    }

    pub fn dense(&self) -> Result<CMatrix> {
        self.operator.to_dense()
    }
}

/// Slack for the strict negativity test.
pub const DETECTION_TOL: f64 = 1e-12;

fn range_check(what: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::OutOfRange(format!("{what} = {value} outside {lo}..={hi}")))
    } else {
        Ok(())
    }
}

fn gen_op(group: &StabilizerGroup, k: usize) -> HermitianOperator {
    HermitianOperator::term(group.generators()[k - 1])
}

fn prod(n: usize, a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    HermitianOperator::product(n, [a, b])
}

/// `1/2 - |psi><psi|` for a stabilizer state, expanded symbolically.
fn stabilizer_projector_witness(group: &StabilizerGroup) -> Result<HermitianOperator> {
    Ok(HermitianOperator::identity(group.n_qubits(), 0.5) - group.projector()?)
}

fn ghz_state_and_group(n: usize) -> Result<(PureState, StabilizerGroup)> {
    let group = stabilizer::ghz_generators(n)?;
    Ok((states::make_ghz(n)?, group))
}

fn cluster_state_and_group(n: usize) -> Result<(PureState, StabilizerGroup)> {
    let group = stabilizer::cluster_generators(n)?;
    Ok((states::stabilized_state(&group)?, group))
}

// ---------------------------------------------------------------- GHZ

/// `1 - S_1 - S_m`.
pub fn ghz_two_term(n: usize, m: usize) -> Result<Witness> {
    range_check("m", m, 2, n)?;
    let (psi, g) = ghz_state_and_group(n)?;
    let op = HermitianOperator::identity(n, 1.0) - gen_op(&g, 1) - gen_op(&g, m);
    Ok(Witness::new(
        "ghz_two_term",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(0.5),
        2,
        Certificate::ProductStates,
    ))
}

/// `1 - S_1 - S_m - S_1 S_m`.
pub fn ghz_three_term(n: usize, m: usize) -> Result<Witness> {
    range_check("m", m, 2, n)?;
    let (psi, g) = ghz_state_and_group(n)?;
    let (s1, sm) = (gen_op(&g, 1), gen_op(&g, m));
    let op = HermitianOperator::identity(n, 1.0) - s1.clone() - sm.clone() - prod(n, &s1, &sm)?;
    Ok(Witness::new(
        "ghz_three_term",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(2.0 / 3.0),
        3,
        Certificate::ProductStates,
    ))
}

/// `|GHZ_N><GHZ_N|` as the sum of all `2^N` stabilizer elements over `2^N`.
pub fn ghz_projector_as_stabilizer_product(n: usize) -> Result<HermitianOperator> {
    stabilizer::ghz_generators(n)?.projector()
}

/// `1/2 - |GHZ_N><GHZ_N|`.
pub fn ghz_projector_witness(n: usize) -> Result<Witness> {
    let (psi, g) = ghz_state_and_group(n)?;
    let op = stabilizer_projector_witness(&g)?;
    let settings = stabilizer::partition_into_settings(&op).count();
    Ok(Witness::new(
        "ghz_projector",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(projector_threshold(0.5, n)),
        settings,
        Certificate::Biseparable,
    ))
}

/// `(N - 1) 1 - sum_k S_k`.
pub fn ghz_genuine_sum(n: usize) -> Result<Witness> {
    let (psi, g) = ghz_state_and_group(n)?;
    let mut op = HermitianOperator::identity(n, (n - 1) as f64);
    for s in g.generator_operators() {
        op = op - s;
    }
    Ok(Witness::new(
        "ghz_genuine_sum",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(1.0 / n as f64),
        2,
        Certificate::Dominance { alpha: 2.0, reference: stabilizer_projector_witness(&g)? },
    ))
}

/// `3 1 - 2 [(S_1 + 1)/2 + prod_{k>=2} (S_k + 1)/2]`.
pub fn ghz_genuine_two_settings(n: usize) -> Result<Witness> {
    let (psi, g) = ghz_state_and_group(n)?;
    let first = g.projector_of(&[0])?;
    let rest = g.projector_of(&(1..n).collect::<Vec<_>>())?;
    let op = HermitianOperator::identity(n, 3.0) - (first + rest).scale(2.0);
    Ok(Witness::new(
        "ghz_genuine_two_settings",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(1.0 / (3.0 - 2f64.powi(2 - n as i32))),
        2,
        Certificate::Dominance { alpha: 2.0, reference: stabilizer_projector_witness(&g)? },
    ))
}

/// `2 1 - X^{(x)N} - 2|0..0><0..0| - 2|1..1><1..1|`, the dense form of
/// [`ghz_genuine_two_settings`].
pub fn ghz_genuine_two_settings_dense(n: usize) -> Result<CMatrix> {
    linalg::check_size(n)?;
    let dim = 1usize << n;
    let xs = PauliString::on_sites(n, &(0..n).map(|q| (q, crate::pauli::Letter::X)).collect::<Vec<_>>());
    let mut m = linalg::identity(dim) * (2.0 * ONE) - xs.to_dense()?;
    m[(0, 0)] -= 2.0 * ONE;
    m[(dim - 1, dim - 1)] -= 2.0 * ONE;
    Ok(m)
}

/// `M_N = S_1 prod_{k>=2} (S_k + 1)/2`, equal to
/// `|0..0><1..1| + |1..1><0..0|`.
pub fn mermin_operator(n: usize) -> Result<HermitianOperator> {
    let g = stabilizer::ghz_generators(n)?;
    let rest = g.projector_of(&(1..n).collect::<Vec<_>>())?;
    gen_op(&g, 1).try_mul(&rest)
}

/// `2 1 - 4 M_3 = 2 1 - XXX + YYX + XYY + YXY`.
pub fn mermin_witness3() -> Result<Witness> {
    let (psi, g) = ghz_state_and_group(3)?;
    let op = HermitianOperator::identity(3, 2.0) - mermin_operator(3)?.scale(4.0);
    Ok(Witness::new(
        "mermin3",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(0.5),
        4,
        Certificate::Dominance { alpha: 4.0, reference: stabilizer_projector_witness(&g)? },
    ))
}

/// `W + c 1`. For `c = 1/2` and the three-qubit two-setting GHZ witness
/// this is the operator said to detect only GHZ-class entanglement; no
/// class analysis is attempted here.
pub fn shifted(op: &HermitianOperator, c: f64) -> HermitianOperator {
    op.clone() + HermitianOperator::identity(op.n_qubits(), c)
}

pub fn ghz3_class_operator() -> Result<HermitianOperator> {
    Ok(shifted(&ghz_genuine_two_settings(3)?.operator, 0.5))
}

// ---------------------------------------------------------------- cluster

/// `1 - S_k - S_{k+1}`.
pub fn cluster_two_term(n: usize, k: usize) -> Result<Witness> {
    range_check("k", k, 1, n.saturating_sub(1))?;
    let (psi, g) = cluster_state_and_group(n)?;
    let op = HermitianOperator::identity(n, 1.0) - gen_op(&g, k) - gen_op(&g, k + 1);
    Ok(Witness::new(
        "cluster_two_term",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(0.5),
        2,
        Certificate::ProductStates,
    ))
}

/// `1 - S_k - S_{k+1} - S_k S_{k+1}`.
pub fn cluster_three_term(n: usize, k: usize) -> Result<Witness> {
    range_check("k", k, 1, n.saturating_sub(1))?;
    let (psi, g) = cluster_state_and_group(n)?;
    let op = three_term_block(&g, k)?;
    Ok(Witness::new(
        "cluster_three_term",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(2.0 / 3.0),
        3,
        Certificate::ProductStates,
    ))
}

fn three_term_block(g: &StabilizerGroup, k: usize) -> Result<HermitianOperator> {
    let n = g.n_qubits();
    let (a, b) = (gen_op(g, k), gen_op(g, k + 1));
    Ok(HermitianOperator::identity(n, 1.0) - a.clone() - b.clone() - prod(n, &a, &b)?)
}

/// Number of blocks of the composite cluster witness, `floor((N + 2)/4)`.
pub fn composite_blocks(n: usize) -> usize {
    (n + 2) / 4
}

/// Generator pairs `(4k+1, 4k+2)`, `k = 0..K`, used by the composite witness.
pub fn composite_block_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..composite_blocks(n)).map(|k| (4 * k + 1, 4 * k + 2)).collect()
}

/// `1 - prod_k (1 + S_a + S_b + S_a S_b)/2` over the blocks
/// `(a, b) = (4k+1, 4k+2)`.
///
/// Each factor is `2 P_k` with `P_k` the projector onto the joint `+1`
/// eigenspace of `S_a, S_b`; on product states `<P_k> <= 1/2` and the blocks
/// have disjoint support, so the product stays below one.
pub fn cluster_composite(n: usize) -> Result<Witness> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("composite cluster witness needs N >= 2, got {n}")));
    }
    let (psi, g) = cluster_state_and_group(n)?;
    let pairs = composite_block_pairs(n);
    let mut supports: Vec<Vec<usize>> = Vec::new();
    let mut factors = Vec::new();
    for &(a, b) in &pairs {
        let block = HermitianOperator::identity(n, 1.0) + gen_op(&g, a) + gen_op(&g, b)
            + prod(n, &gen_op(&g, a), &gen_op(&g, b))?;
        supports.push(block.support());
        factors.push(block.scale(0.5));
    }
    for (i, si) in supports.iter().enumerate() {
        for sj in &supports[i + 1..] {
            if si.iter().any(|q| sj.contains(q)) {
                return Err(Error::Internal("composite witness blocks overlap".into()));
            }
        }
    }
    let op = HermitianOperator::identity(n, 1.0) - HermitianOperator::product(n, factors.iter())?;
    let kk = pairs.len() as i32;
    let t = 2f64.powi(kk);
    Ok(Witness::new(
        "cluster_composite",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(t / (t + 1.0)),
        3usize.pow(kk as u32),
        Certificate::ProductStates,
    ))
}

/// `1/2 - |C_N><C_N|`.
pub fn cluster_projector_witness(n: usize) -> Result<Witness> {
    let (psi, g) = cluster_state_and_group(n)?;
    let op = stabilizer_projector_witness(&g)?;
    let settings = stabilizer::partition_into_settings(&op).count();
    Ok(Witness::new(
        "cluster_projector",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(projector_threshold(0.5, n)),
        settings,
        Certificate::Biseparable,
    ))
}

/// White-noise threshold of the two-setting cluster witness.
pub fn cluster_genuine_threshold(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0 / (4.0 - 4.0 / 2f64.powf(n as f64 / 2.0))
    } else {
        let a = 2f64.powf(-((n + 1) as f64) / 2.0);
        let b = 2f64.powf(-((n - 1) as f64) / 2.0);
        1.0 / (4.0 - 2.0 * (a + b))
    }
}

/// `3 1 - 2 [prod_odd (S_k + 1)/2 + prod_even (S_k + 1)/2]`.
pub fn cluster_genuine(n: usize) -> Result<Witness> {
    let (psi, g) = cluster_state_and_group(n)?;
    let odd: Vec<usize> = (0..n).step_by(2).collect();
    let even: Vec<usize> = (1..n).step_by(2).collect();
    let op = HermitianOperator::identity(n, 3.0) - (g.projector_of(&odd)? + g.projector_of(&even)?).scale(2.0);
    Ok(Witness::new(
        "cluster_genuine",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(cluster_genuine_threshold(n)),
        2,
        Certificate::Dominance { alpha: 2.0, reference: stabilizer_projector_witness(&g)? },
    ))
}

/// `P' = 1/2 - W/2` for the two-setting genuine witness of the family, a
/// lower bound on the fidelity with the target.
pub fn fidelity_bound_operator(family: Family, n: usize) -> Result<HermitianOperator> {
    let w = match family {
        Family::Ghz => ghz_genuine_two_settings(n)?,
        Family::Cluster => cluster_genuine(n)?,
    };
    Ok(HermitianOperator::identity(n, 0.5) - w.operator.scale(0.5))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ghz,
    Cluster,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "ghz" => Ok(Family::Ghz),
            "cluster" => Ok(Family::Cluster),
            _ => Err(Error::Parse(format!("unknown family '{s}', expected ghz or cluster"))),
        }
    }
}

impl Family {
    pub fn generators(self, n: usize) -> Result<StabilizerGroup> {
        match self {
            Family::Ghz => stabilizer::ghz_generators(n),
            Family::Cluster => stabilizer::cluster_generators(n),
        }
    }

    pub fn state(self, n: usize) -> Result<PureState> {
        match self {
            Family::Ghz => states::make_ghz(n),
            Family::Cluster => states::make_cluster(n),
        }
    }
}

// ---------------------------------------------------------------- graphs

/// `1 - S_k - S_l` for adjacent vertices `k, l` (1-based).
pub fn graph_pair(graph: &Graph, k: usize, l: usize) -> Result<Witness> {
    let n = graph.n_vertices();
    range_check("k", k, 1, n)?;
    range_check("l", l, 1, n)?;
    if !graph.adjacent(k - 1, l - 1) {
        return Err(Error::Precondition(format!("vertices {k} and {l} are not neighbors")));
    }
    let g = stabilizer::graph_generators(graph)?;
    let psi = states::stabilized_state(&g)?;
    let op = HermitianOperator::identity(n, 1.0) - gen_op(&g, k) - gen_op(&g, l);
    Ok(Witness::new(
        "graph_pair",
        op,
        psi,
        DetectionClass::RulesOutFullSeparability,
        Some(0.5),
        2,
        Certificate::ProductStates,
    ))
}

/// `(N - 1) 1 - sum_k S_k`; the setting count is the number of colors of
/// `coloring`, or of a greedy coloring when none is given.
pub fn graph_genuine(graph: &Graph, coloring: Option<&[usize]>) -> Result<Witness> {
    let n = graph.n_vertices();
    let colors = match coloring {
        Some(c) if graph.is_proper_coloring(c) => c.to_vec(),
        Some(_) => return Err(Error::Precondition("coloring is not proper".into())),
        None => graph.greedy_coloring(),
    };
    let n_colors = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
    let g = stabilizer::graph_generators(graph)?;
    let psi = states::stabilized_state(&g)?;
    let mut op = HermitianOperator::identity(n, (n - 1) as f64);
    for s in g.generator_operators() {
        op = op - s;
    }
    Ok(Witness::new(
        "graph_genuine",
        op,
        psi,
        DetectionClass::GenuineMultipartite,
        Some(1.0 / n as f64),
        n_colors,
        Certificate::Dominance { alpha: 2.0, reference: stabilizer_projector_witness(&g)? },
    ))
}

// ---------------------------------------------------------------- mixed target

/// `1 - Z^1 Z^2 - X^1 X^2 Z^3`, built around the mixed state `rho3`.
pub fn rho3_witness() -> Result<Witness> {
    let op = HermitianOperator::from_terms(3, [("III", 1.0), ("ZZI", -1.0), ("XXZ", -1.0)])?;
    Ok(Witness {
        name: "rho3".into(),
        operator: op,
        target: states::make_rho3(),
        target_pure: None,
        detection_class: DetectionClass::RulesOutFullSeparability,
        analytic_noise_threshold: Some(0.5),
        claimed_settings: 2,
        certificate: Certificate::ProductStates,
    })
}

// ---------------------------------------------------------------- W state

/// Threshold of `c 1 - |psi><psi|` on `n` qubits.
pub fn projector_threshold(c: f64, n: usize) -> f64 {
    (1.0 - c) / (1.0 - 2f64.powi(-(n as i32)))
}

/// `c 1 - |psi><psi|` rendered densely and decomposed into Pauli terms.
///
/// `c` is the maximal squared overlap of `psi` with biseparable states and
/// must be supplied by the caller (1/2 for GHZ, cluster and graph states,
/// 2/3 for `|W3>`).
pub fn projector_witness(name: &str, target: PureState, c: f64, claimed_settings: Option<usize>) -> Result<Witness> {
    let n = target.n_qubits();
    let dense = linalg::identity(1 << n) * (c * ONE) - target.projector();
    let op = HermitianOperator::from_dense(&dense)?;
    let settings = claimed_settings.unwrap_or_else(|| stabilizer::partition_into_settings(&op).count());
    Ok(Witness::new(
        name,
        op,
        target,
        DetectionClass::GenuineMultipartite,
        Some(projector_threshold(c, n)),
        settings,
        Certificate::Biseparable,
    ))
}

/// `2/3 - |W3><W3|`. Five settings are claimed for its local decomposition;
/// those settings are not all Pauli settings.
pub fn w3_projector() -> Result<Witness> {
    projector_witness("w3_projector", states::make_w3(), 2.0 / 3.0, Some(5))
}

/// `11/3 1 + 2 ZZZ - 1/3 sum_{k<l} (2 X^k X^l + 2 Y^k Y^l - Z^k Z^l)`.
///
/// The pair sum runs over the three unordered pairs.
pub fn w3_witness() -> Result<Witness> {
    let mut op = HermitianOperator::from_terms(3, [("III", 11.0 / 3.0), ("ZZZ", 2.0)])?;
    for pair in W3_PAIRS {
        let t = |l: char| -> String { (0..3).map(|q| if pair.contains(&q) { l } else { 'I' }).collect() };
        op = op + HermitianOperator::from_terms(
            3,
            [(t('X').as_str(), -2.0 / 3.0), (t('Y').as_str(), -2.0 / 3.0), (t('Z').as_str(), 1.0 / 3.0)],
        )?;
    }
    let reference = w3_projector()?.operator;
    Ok(Witness::new(
        "w3",
        op,
        states::make_w3(),
        DetectionClass::GenuineMultipartite,
        Some(4.0 / 15.0),
        3,
        Certificate::Dominance { alpha: 4.0, reference },
    ))
}

const W3_PAIRS: [[usize; 2]; 3] = [[0, 1], [0, 2], [1, 2]];

/// `(1 + sqrt5) 1 - sum_{k<l} (X^k X^l + Y^k Y^l)`.
pub fn w3_two_setting() -> Result<Witness> {
    let s5 = 5f64.sqrt();
    let mut op = HermitianOperator::identity(3, 1.0 + s5);
    for pair in W3_PAIRS {
        let t = |l: char| -> String { (0..3).map(|q| if pair.contains(&q) { l } else { 'I' }).collect() };
        op = op + HermitianOperator::from_terms(3, [(t('X').as_str(), -1.0), (t('Y').as_str(), -1.0)])?;
    }
    Ok(Witness::new(
        "w3_two_setting",
        op,
        states::make_w3(),
        DetectionClass::GenuineMultipartite,
        Some((3.0 - s5) / 4.0),
        2,
        Certificate::Biseparable,
    ))
}

// ---------------------------------------------------------------- registry

/// Parameters accepted by [`build`]; unused fields are ignored.
#[derive(Clone, Debug, Default)]
pub struct WitnessParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub graph: Option<Graph>,
}

impl WitnessParams {
    pub fn n(n: usize) -> WitnessParams {
        WitnessParams { n: Some(n), ..Default::default() }
    }

    pub fn graph(graph: Graph) -> WitnessParams {
        WitnessParams { graph: Some(graph), ..Default::default() }
    }
}

pub struct WitnessInfo {
    pub id: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

pub const CATALOG: &[WitnessInfo] = &[
    WitnessInfo { id: "ghz_two_term", params: "n, m=2", summary: "1 - S1 - Sm around GHZ_N" },
    WitnessInfo { id: "ghz_three_term", params: "n, m=2", summary: "1 - S1 - Sm - S1 Sm around GHZ_N" },
    WitnessInfo { id: "ghz_projector", params: "n", summary: "1/2 - |GHZ_N><GHZ_N|" },
    WitnessInfo { id: "ghz_genuine_sum", params: "n", summary: "(N-1) - sum_k Sk" },
    WitnessInfo { id: "ghz_genuine_two_settings", params: "n", summary: "3 - 2[(S1+1)/2 + prod_k>=2 (Sk+1)/2]" },
    WitnessInfo { id: "mermin3", params: "", summary: "2 - XXX + YYX + XYY + YXY" },
    WitnessInfo { id: "cluster_two_term", params: "n, k=1", summary: "1 - Sk - Sk+1 around C_N" },
    WitnessInfo { id: "cluster_three_term", params: "n, k=1", summary: "1 - Sk - Sk+1 - Sk Sk+1 around C_N" },
    WitnessInfo { id: "cluster_composite", params: "n", summary: "product of disjoint three-term blocks" },
    WitnessInfo { id: "cluster_projector", params: "n", summary: "1/2 - |C_N><C_N|" },
    WitnessInfo { id: "cluster_genuine", params: "n", summary: "3 - 2[prod_odd + prod_even]" },
    WitnessInfo { id: "graph_pair", params: "graph, k, l", summary: "1 - Sk - Sl for neighbors k, l" },
    WitnessInfo { id: "graph_genuine", params: "graph", summary: "(N-1) - sum_k Sk for a graph state" },
    WitnessInfo { id: "rho3", params: "", summary: "1 - ZZI - XXZ around the mixed state rho3" },
    WitnessInfo { id: "w3_projector", params: "", summary: "2/3 - |W3><W3|" },
    WitnessInfo { id: "w3", params: "", summary: "three-setting W3 witness" },
    WitnessInfo { id: "w3_two_setting", params: "", summary: "(1 + sqrt5) - sum_k<l (XkXl + YkYl)" },
];

pub fn witness_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|w| w.id).collect()
}

fn need_n(p: &WitnessParams) -> Result<usize> {
    p.n.ok_or_else(|| Error::Precondition("this witness needs --n".into()))
}

fn need_graph(p: &WitnessParams) -> Result<&Graph> {
    p.graph.as_ref().ok_or_else(|| Error::Precondition("this witness needs --graph".into()))
}

/// Build a witness by catalog id.
pub fn build(id: &str, p: &WitnessParams) -> Result<Witness> {
    match id {
        "ghz_two_term" => ghz_two_term(need_n(p)?, p.m.unwrap_or(2)),
        "ghz_three_term" => ghz_three_term(need_n(p)?, p.m.unwrap_or(2)),
        "ghz_projector" => ghz_projector_witness(need_n(p)?),
        "ghz_genuine_sum" => ghz_genuine_sum(need_n(p)?),
        "ghz_genuine_two_settings" => ghz_genuine_two_settings(need_n(p)?),
        "mermin3" => mermin_witness3(),
        "cluster_two_term" => cluster_two_term(need_n(p)?, p.k.unwrap_or(1)),
        "cluster_three_term" => cluster_three_term(need_n(p)?, p.k.unwrap_or(1)),
        "cluster_composite" => cluster_composite(need_n(p)?),
        "cluster_projector" => cluster_projector_witness(need_n(p)?),
        "cluster_genuine" => cluster_genuine(need_n(p)?),
        "graph_pair" => {
            let g = need_graph(p)?;
            let (k, l) = match (p.k, p.l) {
                (Some(k), Some(l)) => (k, l),
                _ => g.edges().first().copied().ok_or_else(|| Error::Precondition("graph has no edges".into()))?,
            };
            graph_pair(g, k, l)
        }
        "graph_genuine" => graph_genuine(need_graph(p)?, None),
        "rho3" => rho3_witness(),
        "w3_projector" => w3_projector(),
        "w3" => w3_witness(),
        "w3_two_setting" => w3_two_setting(),
        _ => Err(Error::Parse(format!("unknown witness '{id}' (see `witness list`)"))),
    }
}

/// Whether the witness takes the qubit count as a parameter.
pub fn takes_n(id: &str) -> bool {
    CATALOG.iter().any(|w| w.id == id && w.params.starts_with('n'))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::stabilizer::partition_into_settings;

    fn target_value(w: &Witness) -> f64 {
        w.expectation_on_target().unwrap()
    }

    #[test]
    fn ghz_witness_target_values() {
        for n in 3..=6 {
            for m in 2..=n {
                assert!((target_value(&ghz_two_term(n, m).unwrap()) + 1.0).abs() < 1e-10);
                assert!((target_value(&ghz_three_term(n, m).unwrap()) + 2.0).abs() < 1e-10);
            }
            assert!((target_value(&ghz_genuine_sum(n).unwrap()) + 1.0).abs() < 1e-10);
            assert!((target_value(&ghz_projector_witness(n).unwrap()) + 0.5).abs() < 1e-10);
            assert!((target_value(&ghz_genuine_two_settings(n).unwrap()) + 1.0).abs() < 1e-10);
        }
        assert!(ghz_two_term(4, 1).is_err());
        assert!(ghz_two_term(4, 5).is_err());
    }

    #[test]
    fn three_term_product_term() {
        let w = ghz_three_term(3, 2).unwrap();
        assert_eq!(w.operator.coefficient_of("YYX"), 1.0);
        assert_eq!(w.operator.n_terms(), 4);
    }

    #[test]
    fn two_setting_ghz_forms_agree() {
        let w3 = ghz_genuine_two_settings(3).unwrap().operator;
        let printed = HermitianOperator::from_terms(
            3,
            [("III", 1.5), ("XXX", -1.0), ("ZZI", -0.5), ("IZZ", -0.5), ("ZIZ", -0.5)],
        )
        .unwrap();
        assert_eq!(w3, printed);
        for n in 3..=7 {
            let w = ghz_genuine_two_settings(n).unwrap();
            let diff = max_abs_diff(&w.dense().unwrap(), &ghz_genuine_two_settings_dense(n).unwrap());
            assert!(diff < 1e-12, "n={n}");
            let g = stabilizer::ghz_generators(n).unwrap();
            let tail = g.projector_of(&(1..n).collect::<Vec<_>>()).unwrap().to_dense().unwrap();
            let dim = 1 << n;
            let mut expect = CMatrix::zeros(dim, dim);
            expect[(0, 0)] = ONE;
            expect[(dim - 1, dim - 1)] = ONE;
            assert!(max_abs_diff(&tail, &expect) < 1e-12);
        }
    }

    #[test]
    fn mermin_is_flip_operator() {
        for n in 2..=7 {
            let m = mermin_operator(n).unwrap().to_dense().unwrap();
            let dim = 1 << n;
            let mut flip = CMatrix::zeros(dim, dim);
            flip[(0, dim - 1)] = ONE;
            flip[(dim - 1, 0)] = ONE;
            assert!(max_abs_diff(&m, &flip) < 1e-12, "n={n}");
        }
        let w = mermin_witness3().unwrap();
        let printed = HermitianOperator::from_terms(
            3,
            [("III", 2.0), ("XXX", -1.0), ("YYX", 1.0), ("XYY", 1.0), ("YXY", 1.0)],
        )
        .unwrap();
        assert_eq!(w.operator, printed);
        assert!((target_value(&w) + 2.0).abs() < 1e-10);
    }

    #[test]
    fn ghz_projector_expansion() {
        for n in 2..=6 {
            let p = ghz_projector_as_stabilizer_product(n).unwrap();
            assert_eq!(p.n_terms(), 1 << n);
            for (_, c) in p.terms() {
                assert!((c.abs() - 2f64.powi(-(n as i32))).abs() < 1e-15);
            }
            let dense = states::make_ghz(n).unwrap().projector();
            assert!(max_abs_diff(&p.to_dense().unwrap(), &dense) < 1e-12);
            assert!((p.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cluster_witnesses() {
        for n in 3..=7 {
            for k in 1..n {
                let w2 = cluster_two_term(n, k).unwrap();
                let w3 = cluster_three_term(n, k).unwrap();
                assert!((target_value(&w2) + 1.0).abs() < 1e-10);
                assert!((target_value(&w3) + 2.0).abs() < 1e-10);
                assert!(w2.operator.support().len() <= 4);
                assert!(w3.operator.support().len() <= 4);
            }
            assert!((target_value(&cluster_genuine(n).unwrap()) + 1.0).abs() < 1e-10);
            assert!((target_value(&cluster_projector_witness(n).unwrap()) + 0.5).abs() < 1e-10);
        }
        assert!(cluster_two_term(4, 4).is_err());
        assert!(cluster_two_term(4, 0).is_err());
    }

    #[test]
    fn composite_blocks_and_values() {
        assert_eq!(composite_blocks(2), 1);
        assert_eq!(composite_blocks(6), 2);
        assert_eq!(composite_block_pairs(6), vec![(1, 2), (5, 6)]);
        for n in 2..=9 {
            let w = cluster_composite(n).unwrap();
            let kk = composite_blocks(n) as i32;
            assert!((target_value(&w) - (1.0 - 2f64.powi(kk))).abs() < 1e-10, "n={n}");
        }
        assert!(cluster_composite(1).is_err());
    }

    #[test]
    fn cluster_threshold_formula() {
        assert!((cluster_genuine_threshold(4) - 1.0 / 3.0).abs() < 1e-15);
        assert!((cluster_genuine_threshold(3) - 0.4).abs() < 1e-15);
        for n in 3..=20 {
            assert!(cluster_genuine_threshold(n) > 0.25);
        }
    }

    #[test]
    fn graph_witnesses() {
        let path = Graph::path(5).unwrap();
        let gp = graph_pair(&path, 2, 3).unwrap();
        assert_eq!(gp.operator, cluster_two_term(5, 2).unwrap().operator);
        assert!(matches!(graph_pair(&path, 1, 3), Err(Error::Precondition(_))));
        let star = Graph::star(5).unwrap();
        assert!(graph_pair(&star, 1, 5).is_ok());
        assert!(graph_pair(&star, 5, 1).is_ok());
        assert!(matches!(graph_pair(&star, 2, 3), Err(Error::Precondition(_))));
        let w = graph_genuine(&star, None).unwrap();
        assert!((target_value(&w) + 1.0).abs() < 1e-10);
        assert_eq!(w.claimed_settings, 2);
        assert_eq!(partition_into_settings(&w.operator).count(), 2);
        let tri = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(graph_genuine(&tri, None).unwrap().claimed_settings, 3);
    }

    #[test]
    fn rho3_and_w3() {
        let w = rho3_witness().unwrap();
        assert!((target_value(&w) + 1.0).abs() < 1e-10);
        let zero = states::zero_state(3).unwrap().to_density();
        assert!(w.expectation(&zero).unwrap() >= 0.0);

        let w = w3_witness().unwrap();
        assert!((target_value(&w) + 4.0 / 3.0).abs() < 1e-10);
        let w2 = w3_two_setting().unwrap();
        assert!((target_value(&w2) - (5f64.sqrt() - 3.0)).abs() < 1e-12);
        let wp = w3_projector().unwrap();
        assert!((target_value(&wp) + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(partition_into_settings(&w.operator).count(), 3);
        assert_eq!(partition_into_settings(&w2.operator).count(), 2);
    }

    #[test]
    fn fidelity_operator_is_two_projector_form() {
        for n in 3..=6 {
            let g = stabilizer::ghz_generators(n).unwrap();
            let expect = g.projector_of(&[0]).unwrap() + g.projector_of(&(1..n).collect::<Vec<_>>()).unwrap()
                - HermitianOperator::identity(n, 1.0);
            assert_eq!(fidelity_bound_operator(Family::Ghz, n).unwrap(), expect);
        }
    }

    #[test]
    fn registry_builds_everything() {
        let tri = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        for id in witness_ids() {
            let p = WitnessParams { n: Some(4), graph: Some(tri.clone()), ..Default::default() };
            let w = build(id, &p).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(w.expectation_on_target().unwrap() < 0.0, "{id}");
        }
        assert!(build("nope", &WitnessParams::n(3)).is_err());
        assert!(build("ghz_two_term", &WitnessParams::default()).is_err());
    }
}
