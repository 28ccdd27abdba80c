//! Stabilizer generators, group enumeration, common product eigenstates, the
//! GHZ basis and grouping of Pauli terms into local measurement settings.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::pauli::{HermitianOperator, Letter, PauliKey, PauliString};
use crate::states::{Graph, PureState};

/// Commuting, independent Hermitian Pauli strings and the group they generate.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    /// Checks that every generator has phase `±1`, that they pairwise commute
    /// and that they are independent over GF(2).
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<StabilizerGroup> {
        if generators.is_empty() || generators.len() > n {
            return Err(Error::Precondition(format!("{} generators for {n} qubits", generators.len())));
        }
        for g in &generators {
            check_dims(n, g.n_qubits())?;
            if !g.is_hermitian() {
                return Err(Error::Precondition(format!("generator {g} is not Hermitian")));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b) {
                    return Err(Error::Precondition(format!("generators {a} and {b} anticommute")));
                }
            }
        }
        if symplectic_rank(&generators) != generators.len() {
            return Err(Error::Precondition("generators are not independent".into()));
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        1usize << self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Element `k = prod_l S_l^{a_l}`, where `a_1 a_2 ... a_m` is the binary
    /// expansion of `k` with `a_1` the most significant digit.
    pub fn element(&self, k: usize) -> PauliString {
        let m = self.generators.len();
        let mut acc = PauliString::identity(self.n);
        for (l, g) in self.generators.iter().enumerate() {
            if (k >> (m - 1 - l)) & 1 == 1 {
                acc = acc * *g;
            }
        }
        acc
    }

    /// All group elements in binary-counter order.
    pub fn elements(&self) -> impl Iterator<Item = PauliString> + '_ {
        (0..self.len()).map(move |k| self.element(k))
    }

    /// Indices (0-based) of the generators contained in element `k`.
    pub fn contained_generators(&self, k: usize) -> Vec<usize> {
        let m = self.generators.len();
        (0..m).filter(|&l| (k >> (m - 1 - l)) & 1 == 1).collect()
    }

    pub fn generator_operators(&self) -> Vec<HermitianOperator> {
        self.generators.iter().map(|g| HermitianOperator::term(*g)).collect()
    }

    /// `prod_k (S_k + 1) / 2` expanded into Pauli terms.
    pub fn projector(&self) -> Result<HermitianOperator> {
        self.projector_of(&(0..self.generators.len()).collect::<Vec<_>>())
    }

    /// `prod_{k in subset} (S_k + 1) / 2`, indices 0-based.
    pub fn projector_of(&self, subset: &[usize]) -> Result<HermitianOperator> {
        let factors = subset
            .iter()
            .map(|&k| HermitianOperator::plus_projector(&self.generators[k]))
            .collect::<Result<Vec<_>>>()?;
        HermitianOperator::product(self.n, factors.iter())
    }
}

/// GF(2) rank of the symplectic vectors `(x | z)`.
pub fn symplectic_rank(strings: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = strings
        .iter()
        .map(|s| ((s.key().x_mask() as u128) << 64) | s.key().z_mask() as u128)
        .collect();
    let mut rank = 0;
    for bit in (0..128).rev() {
        let mask = 1u128 << bit;
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) {
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && rows[r] & mask != 0 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

fn letters_at(n: usize, sites: &[(usize, Letter)]) -> PauliString {
    PauliString::on_sites(n, sites)
}

/// `X...X, ZZI..., IZZI..., ...`
pub fn ghz_generators(n: usize) -> Result<StabilizerGroup> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("GHZ generators need N >= 2, got {n}")));
    }
    let mut gens = vec![letters_at(n, &(0..n).map(|q| (q, Letter::X)).collect::<Vec<_>>())];
    for k in 1..n {
        gens.push(letters_at(n, &[(k - 1, Letter::Z), (k, Letter::Z)]));
    }
    StabilizerGroup::new(n, gens)
}

/// `XZ..., ZXZ..., ..., ...ZX`
pub fn cluster_generators(n: usize) -> Result<StabilizerGroup> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("cluster generators need N >= 2, got {n}")));
    }
    graph_generators(&Graph::path(n)?)
}

/// `X` on vertex `k` times `Z` on each neighbor.
pub fn graph_generators(g: &Graph) -> Result<StabilizerGroup> {
    let n = g.n_vertices();
    let gens = (0..n)
        .map(|k| {
            let mut sites = vec![(k, Letter::X)];
            sites.extend(g.neighbors(k).into_iter().map(|l| (l, Letter::Z)));
            letters_at(n, &sites)
        })
        .collect();
    StabilizerGroup::new(n, gens)
}

/// The three nonlocal stabilizing operators of `|W3>`, each a three-term sum
/// with weights 1/3, 2/3, 2/3.
pub fn w3_stabilizing_ops() -> Vec<HermitianOperator> {
    let t = 1.0 / 3.0;
    let u = 2.0 / 3.0;
    [
        [("ZII", t), ("YYZ", u), ("XZX", u)],
        [("IZI", t), ("ZYY", u), ("XXZ", u)],
        [("IIZ", t), ("YZY", u), ("ZXX", u)],
    ]
    .into_iter()
    .map(|terms| HermitianOperator::from_terms(3, terms).expect("valid terms"))
    .collect()
}

/// `U = (XZI + IXZ + ZIX) / sqrt 3`, which maps `|000>` to `|W3>`.
pub fn w3_preparation_unitary() -> CMatrix {
    let s = 1.0 / 3f64.sqrt();
    HermitianOperator::from_terms(3, [("XZI", s), ("IXZ", s), ("ZIX", s)])
        .and_then(|op| op.to_dense())
        .expect("three-qubit operator")
}

/// True iff `||S_k psi - psi|| < 1e-9` for every operator.
pub fn verify_stabilizes(ops: &[HermitianOperator], psi: &PureState) -> Result<bool> {
    for op in ops {
        check_dims(op.n_qubits(), psi.n_qubits())?;
        let residual = op.apply(psi.amplitudes()) - psi.amplitudes();
        if residual.norm() >= 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn eigenvector_plus(l: Letter) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match l {
        Letter::I | Letter::Z => CVector::from_vec(vec![ONE, ZERO]),
        Letter::X => CVector::from_vec(vec![c(s, 0.0), c(s, 0.0)]),
        Letter::Y => CVector::from_vec(vec![c(s, 0.0), c(0.0, s)]),
    }
}

/// A product state that is an eigenstate of both strings, when they commute
/// locally; `None` otherwise.
pub fn common_product_eigenstate(a: &PauliString, b: &PauliString) -> Result<Option<PureState>> {
    if !a.try_commutes_locally(b)? {
        return Ok(None);
    }
    let factors: Vec<CVector> = (0..a.n_qubits())
        .map(|q| {
            let l = if a.letter(q) != Letter::I { a.letter(q) } else { b.letter(q) };
            eigenvector_plus(l)
        })
        .collect();
    PureState::product(&factors).map(Some)
}

/// Labeled common eigenbasis of the GHZ generators.
///
/// The state with label `[s_1 .. s_N]` has eigenvalue `(-1)^{s_k}` for
/// generator `k`; labels are ordered as binary numbers with `s_1` most
/// significant, so label `[0 .. 0]` comes first and is `|GHZ_N>`.
pub fn ghz_basis(n: usize) -> Result<Vec<(Vec<u8>, PureState)>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("GHZ basis needs N >= 2, got {n}")));
    }
    linalg::check_size(n)?;
    let dim = 1usize << n;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut out = Vec::with_capacity(dim);
    for label_index in 0..dim {
        let label: Vec<u8> = (0..n).map(|k| ((label_index >> (n - 1 - k)) & 1) as u8).collect();
        // Z_{k-1} Z_k eigenvalue fixes the parity of neighbouring bits; qubit 1 starts at 0.
        let mut x = 0usize;
        let mut bit = 0u8;
        for (k, &b) in label.iter().enumerate().skip(1) {
            bit ^= b;
            if bit == 1 {
                x |= 1 << (n - 1 - k);
            }
        }
        let xbar = x ^ (dim - 1);
        let mut v = CVector::zeros(dim);
        v[x] = h;
        v[xbar] = if label[0] == 0 { h } else { -h };
        out.push((label, PureState::new(v)?));
    }
    Ok(out)
}

/// Change-of-basis matrix whose columns are the GHZ basis vectors.
pub fn ghz_basis_matrix(n: usize) -> Result<CMatrix> {
    let basis = ghz_basis(n)?;
    let dim = basis.len();
    Ok(CMatrix::from_fn(dim, dim, |r, c| basis[c].1.amplitudes()[r]))
}

/// One single-qubit observable per qubit, or no constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub observables: Vec<Option<Letter>>,
}

impl MeasurementSetting {
    pub fn free(n: usize) -> MeasurementSetting {
        MeasurementSetting { observables: vec![None; n] }
    }

    pub fn from_letters(letters: &[Letter]) -> MeasurementSetting {
        MeasurementSetting {
            observables: letters.iter().map(|&l| if l == Letter::I { None } else { Some(l) }).collect(),
        }
    }

    /// A string is measurable iff every non-identity letter matches the
    /// setting's observable on that qubit.
    pub fn measures(&self, key: &PauliKey) -> bool {
        key.letters()
            .iter()
            .zip(&self.observables)
            .all(|(l, o)| *l == Letter::I || *o == Some(*l))
    }

    /// Like [`measures`](Self::measures) but free qubits accept any letter.
    pub fn accepts(&self, key: &PauliKey) -> bool {
        key.letters()
            .iter()
            .zip(&self.observables)
            .all(|(l, o)| *l == Letter::I || o.is_none() || *o == Some(*l))
    }

    fn absorb(&mut self, key: &PauliKey) {
        for (l, o) in key.letters().into_iter().zip(self.observables.iter_mut()) {
            if l != Letter::I {
                *o = Some(l);
            }
        }
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.observables {
            write!(f, "{}", o.map_or('*', Letter::as_char))?;
        }
        Ok(())
    }
}

/// Terms of an operator grouped by measurement setting.
#[derive(Clone, Debug, PartialEq)]
pub struct SettingPartition {
    pub settings: Vec<MeasurementSetting>,
    /// `terms[i]` are the terms measured by `settings[i]`.
    pub terms: Vec<Vec<(PauliKey, f64)>>,
    /// Identity component; needs no measurement.
    pub constant: f64,
}

impl SettingPartition {
    pub fn count(&self) -> usize {
        self.settings.len()
    }
}

/// Greedy grouping of the non-identity terms into locally compatible sets.
///
/// Terms are visited by descending weight, ties broken lexicographically, and
/// each goes into the first setting that accepts it; free qubits of that
/// setting then take the term's letters.
pub fn partition_into_settings(op: &HermitianOperator) -> SettingPartition {
    let n = op.n_qubits();
    let mut terms: Vec<(PauliKey, f64)> = op.terms().filter(|(k, _)| !k.is_identity()).collect();
    terms.sort_by(|a, b| b.0.weight().cmp(&a.0.weight()).then(a.0.cmp(&b.0)));
    let mut settings: Vec<MeasurementSetting> = Vec::new();
    let mut groups: Vec<Vec<(PauliKey, f64)>> = Vec::new();
    for (key, c) in terms {
        match settings.iter().position(|s| s.accepts(&key)) {
            Some(i) => {
                settings[i].absorb(&key);
                groups[i].push((key, c));
            }
            None => {
                let mut s = MeasurementSetting::free(n);
                s.absorb(&key);
                settings.push(s);
                groups.push(vec![(key, c)]);
            }
        }
    }
    SettingPartition { settings, terms: groups, constant: op.constant_term() }
}

/// Whether every element of the subgroup generated by `subset` (0-based
/// generator indices) fits one measurement setting.
pub fn subgroup_fits_one_setting(group: &StabilizerGroup, subset: &[usize]) -> bool {
    let n = group.n_qubits();
    let gens: Vec<PauliString> = subset.iter().map(|&k| group.generators()[k]).collect();
    let mut seen: Vec<Option<Letter>> = vec![None; n];
    for k in 0..(1usize << gens.len()) {
        let mut e = PauliString::identity(n);
        for (l, g) in gens.iter().enumerate() {
            if (k >> l) & 1 == 1 {
                e = e * *g;
            }
        }
        for (q, slot) in seen.iter_mut().enumerate() {
            let l = e.letter(q);
            if l == Letter::I {
                continue;
            }
            match slot {
                None => *slot = Some(l),
                Some(prev) if *prev != l => return false,
                _ => {}
            }
        }
    }
    true
}

/// Largest subgroup generated by a subset of the generators whose elements
/// can all be measured with a single setting. Exhaustive over subsets.
///
/// Returns the subgroup size and the 0-based generator indices.
pub fn max_one_setting_subgroup(group: &StabilizerGroup) -> (usize, Vec<usize>) {
    let m = group.generators().len();
    for size in (1..=m).rev() {
        let mut found = None;
        for_each_subset(m, size, &mut |subset| {
            if found.is_none() && subgroup_fits_one_setting(group, subset) {
                found = Some(subset.to_vec());
            }
        });
        if let Some(subset) = found {
            return (1usize << size, subset);
        }
    }
    (1, Vec::new())
}

fn for_each_subset(m: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..m {
            if m - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, size, cur, f);
            cur.pop();
        }
    }
    rec(0, m, size, &mut Vec::with_capacity(size), f);
}

/// Partition of the group elements by which of generators `l` and `l + 1`
/// (0-based) they contain: `[only l, only l+1, both]`.
pub fn generator_pair_classes(group: &StabilizerGroup, l: usize) -> Result<[Vec<PauliString>; 3]> {
    let m = group.generators().len();
    if l + 1 >= m {
        return Err(Error::OutOfRange(format!("generator pair ({}, {}) out of range", l + 1, l + 2)));
    }
    let mut classes: [Vec<PauliString>; 3] = Default::default();
    for k in 0..group.len() {
        let c = group.contained_generators(k);
        match (c.contains(&l), c.contains(&(l + 1))) {
            (true, false) => classes[0].push(group.element(k)),
            (false, true) => classes[1].push(group.element(k)),
            (true, true) => classes[2].push(group.element(k)),
            _ => {}
        }
    }
    Ok(classes)
}

/// True iff no single setting can measure elements from two different
/// classes of [`generator_pair_classes`].
pub fn pair_classes_exclusive(group: &StabilizerGroup, l: usize) -> Result<bool> {
    let classes = generator_pair_classes(group, l)?;
    for a in 0..3 {
        for b in a + 1..3 {
            for x in &classes[a] {
                for y in &classes[b] {
                    if x.commutes_locally(y) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Element `k` of the group as a phase-tracked string; re-exported for tests.
pub fn enumerate_group(group: &StabilizerGroup) -> Vec<PauliString> {
    group.elements().collect()
}

/// `|0...0>` stabilizers: `Z` on each qubit.
pub fn computational_zero_generators(n: usize) -> Result<StabilizerGroup> {
    StabilizerGroup::new(n, (0..n).map(|q| PauliString::single(n, q, Letter::Z)).collect())
}
