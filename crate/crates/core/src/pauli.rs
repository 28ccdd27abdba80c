//! Exact algebra of phased Pauli strings and real-weighted Pauli sums.
//!
//! A string on `n` qubits is stored in the symplectic form: one X bit and one
//! Z bit per site, packed into `u64` masks where qubit 1 sits at bit `n - 1`
//! (the most significant position of a computational basis index). This makes
//! the masks line up with dense basis indices, so rendering a string is a
//! signed permutation. Phases live in Z4 and are never approximated.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::linalg::{self, CMatrix, CVector, ZERO};
use crate::states::DensityMatrix;

/// Upper bound on the number of sites a packed string can hold.
pub const MAX_SITES: usize = 64;

/// Powers of `i`: the four exact units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// `+1` or `-1` for real phases.
    pub fn sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Unphased letter pattern; the key of a Pauli sum.
///
/// Ordered lexicographically by letters with qubit 1 first (`I < X < Y < Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliKey {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliKey {
    pub fn identity(n: usize) -> PauliKey {
        PauliKey { n, x: 0, z: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    fn bit(&self, q: usize) -> u64 {
        1u64 << (self.n - 1 - q)
    }

    /// Letter on qubit `q` (0-based, qubit 1 is `q = 0`).
    pub fn letter(&self, q: usize) -> Letter {
        let b = self.bit(q);
        Letter::from_bits(self.x & b != 0, self.z & b != 0)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// 0-based indices of the qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    /// Hermitian string with phase `+1` and these letters.
    pub fn to_string_op(self) -> PauliString {
        PauliString { n: self.n, x: self.x, z: self.z, phase: Phase::ONE }
    }

    fn sort_key(&self) -> (usize, u128) {
        let mut k = 0u128;
        for q in 0..self.n {
            k = (k << 2) | self.letter(q) as u128;
        }
        (self.n, k)
    }
}

impl PartialOrd for PauliKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for PauliKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// A phase in `{+1, -1, +i, -i}` times a tensor product of single-qubit Paulis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        assert!((1..=MAX_SITES).contains(&n), "qubit count {n} outside 1..={MAX_SITES}");
        PauliString { n, x: 0, z: 0, phase: Phase::ONE }
    }

    pub fn from_letters(phase: Phase, letters: &[Letter]) -> PauliString {
        let n = letters.len();
        let mut s = PauliString::identity(n);
        s.phase = phase;
        for (q, l) in letters.iter().enumerate() {
            let (bx, bz) = l.bits();
            let b = 1u64 << (n - 1 - q);
            if bx {
                s.x |= b;
            }
            if bz {
                s.z |= b;
            }
        }
        s
    }

    /// Single letter on qubit `q` (0-based), identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Letter) -> PauliString {
        let mut letters = vec![Letter::I; n];
        letters[q] = letter;
        PauliString::from_letters(Phase::ONE, &letters)
    }

    /// Product of `letter` on every listed qubit (0-based).
    pub fn on_sites(n: usize, sites: &[(usize, Letter)]) -> PauliString {
        let mut letters = vec![Letter::I; n];
        for &(q, l) in sites {
            letters[q] = l;
        }
        PauliString::from_letters(Phase::ONE, &letters)
    }

    /// Parses the text form, panicking on malformed input. Convenience for
    /// constants and tests.
    pub fn must(text: &str) -> PauliString {
        text.parse().unwrap_or_else(|e| panic!("bad Pauli string {text:?}: {e}"))
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }

    pub fn key(&self) -> PauliKey {
        PauliKey { n: self.n, x: self.x, z: self.z }
    }

    pub fn letter(&self, q: usize) -> Letter {
        self.key().letter(q)
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.key().letters()
    }

    pub fn weight(&self) -> usize {
        self.key().weight()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.key().is_identity()
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Exact product `self * rhs`.
    pub fn try_mul(&self, rhs: &PauliString) -> Result<PauliString> {
        check_dims(self.n, rhs.n)?;
        // letters = i^{#Y} X^x Z^z, and Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        let x = self.x ^ rhs.x;
        let z = self.z ^ rhs.z;
        let k = self.phase.0 as u32
            + rhs.phase.0 as u32
            + self.y_count()
            + rhs.y_count()
            + 2 * (self.z & rhs.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok(PauliString { n: self.n, x, z, phase: Phase::from_exponent(k) })
    }

    /// Global commutation: the number of sites with clashing letters is even.
    pub fn try_commutes(&self, rhs: &PauliString) -> Result<bool> {
        check_dims(self.n, rhs.n)?;
        let clashes = (self.x & rhs.z).count_ones() + (self.z & rhs.x).count_ones();
        Ok(clashes.is_multiple_of(2))
    }

    /// Sitewise commutation: on every qubit the letters are equal or one is `I`.
    pub fn try_commutes_locally(&self, rhs: &PauliString) -> Result<bool> {
        check_dims(self.n, rhs.n)?;
        Ok(((self.x & rhs.z) ^ (self.z & rhs.x)) == 0)
    }

    pub fn commutes(&self, rhs: &PauliString) -> bool {
        self.try_commutes(rhs).expect("qubit count mismatch")
    }

    pub fn commutes_locally(&self, rhs: &PauliString) -> bool {
        self.try_commutes_locally(rhs).expect("qubit count mismatch")
    }

    /// Image of basis state `j`: `P|j> = amp * |j'>`.
    #[inline]
    pub fn apply_basis(&self, j: usize) -> (usize, Complex64) {
        let j64 = j as u64;
        let k = self.phase.0 as u32 + self.y_count() + 2 * (j64 & self.z).count_ones();
        (j ^ self.x as usize, Phase::from_exponent(k).to_complex())
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for j in 0..v.len() {
            let (t, a) = self.apply_basis(j);
            out[t] += a * v[j];
        }
        out
    }

    /// Left multiplication `P * m` without forming `P` densely.
    pub fn left_mul(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for j in 0..m.nrows() {
            let (t, a) = self.apply_basis(j);
            for c in 0..m.ncols() {
                out[(t, c)] += a * m[(j, c)];
            }
        }
        out
    }

    /// `Tr(P rho)` for a dense matrix of matching size.
    pub fn trace_with(&self, rho: &CMatrix) -> Complex64 {
        let mut acc = ZERO;
        for k in 0..rho.nrows() {
            let (t, a) = self.apply_basis(k);
            acc += a * rho[(k, t)];
        }
        acc
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        linalg::check_size(self.n)?;
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            let (t, a) = self.apply_basis(k);
            m[(t, k)] = a;
        }
        Ok(m)
    }
}

impl Mul for PauliString {
    type Output = PauliString;
    fn mul(self, rhs: PauliString) -> PauliString {
        self.try_mul(&rhs).expect("qubit count mismatch")
    }
}

impl Neg for PauliString {
    type Output = PauliString;
    fn neg(mut self) -> PauliString {
        self.phase = -self.phase;
        self
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.key())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Optional sign, optional `i`, then one letter per qubit: `"-YXY"`, `"XXIZ"`.
    fn from_str(s: &str) -> Result<PauliString> {
        let s = s.trim();
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let letters: Vec<Letter> = rest
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli letter {c:?} in {s:?}"))))
            .collect::<Result<_>>()?;
        if letters.is_empty() || letters.len() > MAX_SITES {
            return Err(Error::Parse(format!("Pauli string {s:?} must have 1..={MAX_SITES} letters")));
        }
        let mut phase = if imag { Phase::I } else { Phase::ONE };
        if neg {
            phase = -phase;
        }
        Ok(PauliString::from_letters(phase, &letters))
    }
}

/// Real-weighted sum of Hermitian Pauli strings.
///
/// Phases are folded into the coefficients; terms with a zero coefficient are
/// dropped, so the map never holds explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    terms: BTreeMap<PauliKey, f64>,
}

/// Coefficients below this magnitude are pruned.
pub const PRUNE_TOL: f64 = 1e-14;

impl HermitianOperator {
    pub fn zero(n: usize) -> HermitianOperator {
        assert!((1..=MAX_SITES).contains(&n));
        HermitianOperator { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, c: f64) -> HermitianOperator {
        let mut op = HermitianOperator::zero(n);
        op.add_term(PauliKey::identity(n), c);
        op
    }

    /// A single string with coefficient `c`. Fails for `±i` phases.
    pub fn from_pauli(p: &PauliString, c: f64) -> Result<HermitianOperator> {
        let sign = p
            .phase()
            .sign()
            .ok_or_else(|| Error::NonHermitian(format!("string {p} has an imaginary phase")))?;
        let mut op = HermitianOperator::zero(p.n_qubits());
        op.add_term(p.key(), sign * c);
        Ok(op)
    }

    pub fn term(p: PauliString) -> HermitianOperator {
        HermitianOperator::from_pauli(&p, 1.0).expect("Hermitian string")
    }

    /// Builds from `(text, coefficient)` pairs such as `("-YXY", 0.5)`.
    pub fn from_terms<'a>(n: usize, terms: impl IntoIterator<Item = (&'a str, f64)>) -> Result<HermitianOperator> {
        let mut op = HermitianOperator::zero(n);
        for (text, c) in terms {
            let p: PauliString = text.parse()?;
            check_dims(n, p.n_qubits())?;
            op = op + HermitianOperator::from_pauli(&p, c)?;
        }
        Ok(op)
    }

    fn add_term(&mut self, key: PauliKey, c: f64) {
        let e = self.terms.entry(key).or_insert(0.0);
        *e += c;
        if e.abs() < PRUNE_TOL {
            self.terms.remove(&key);
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (PauliKey, f64)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, key: &PauliKey) -> f64 {
        self.terms.get(key).copied().unwrap_or(0.0)
    }

    pub fn coefficient_of(&self, text: &str) -> f64 {
        let p = PauliString::must(text);
        p.phase().sign().unwrap_or(0.0) * self.coefficient(&p.key())
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&PauliKey::identity(self.n))
    }

    /// The operator with its identity component removed.
    pub fn non_constant_part(&self) -> HermitianOperator {
        let mut op = self.clone();
        op.terms.remove(&PauliKey::identity(self.n));
        op
    }

    /// `Tr(op)` over the full `2^n` space.
    pub fn trace(&self) -> f64 {
        self.constant_term() * (self.n as f64).exp2()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(|c| c.is_finite())
    }

    /// Qubits touched by at least one non-identity term.
    pub fn support(&self) -> Vec<usize> {
        let mask = self.terms.keys().fold(0u64, |m, k| m | k.x | k.z);
        (0..self.n).filter(|&q| mask & (1u64 << (self.n - 1 - q)) != 0).collect()
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        let mut op = HermitianOperator::zero(self.n);
        for (k, c) in self.terms() {
            op.add_term(k, s * c);
        }
        op
    }

    /// Operator product. Fails when the product has an anti-Hermitian part
    /// (the factors do not commute term-wise in a cancelling way).
    pub fn try_mul(&self, rhs: &HermitianOperator) -> Result<HermitianOperator> {
        check_dims(self.n, rhs.n)?;
        let mut acc: BTreeMap<PauliKey, Complex64> = BTreeMap::new();
        for (ka, ca) in self.terms() {
            let a = ka.to_string_op();
            for (kb, cb) in rhs.terms() {
                let p = a * kb.to_string_op();
                *acc.entry(p.key()).or_insert(ZERO) += p.phase().to_complex() * (ca * cb);
            }
        }
        let mut op = HermitianOperator::zero(self.n);
        for (k, c) in acc {
            if c.im.abs() > 1e-12 {
                return Err(Error::NonHermitian(format!("product has imaginary coefficient {} on {k}", c.im)));
            }
            op.add_term(k, c.re);
        }
        Ok(op)
    }

    /// Product of several operators; the empty product is the identity.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a HermitianOperator>) -> Result<HermitianOperator> {
        factors
            .into_iter()
            .try_fold(HermitianOperator::identity(n, 1.0), |acc, f| acc.try_mul(f))
    }

    /// `(S + 1) / 2` for a Hermitian string `S`.
    pub fn plus_projector(s: &PauliString) -> Result<HermitianOperator> {
        Ok((HermitianOperator::from_pauli(s, 1.0)? + HermitianOperator::identity(s.n_qubits(), 1.0)).scale(0.5))
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        linalg::check_size(self.n)?;
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (k, c) in self.terms() {
            let p = k.to_string_op();
            for j in 0..dim {
                let (t, a) = p.apply_basis(j);
                m[(t, j)] += a * c;
            }
        }
        Ok(m)
    }

    /// Decomposes a dense Hermitian matrix into Pauli terms by trace
    /// projection: `c_P = Tr(P m) / 2^n`.
    pub fn from_dense(m: &CMatrix) -> Result<HermitianOperator> {
        let dim = m.nrows();
        if dim < 2 || !dim.is_power_of_two() || m.ncols() != dim {
            return Err(Error::Precondition(format!("matrix of shape {}x{} is not a qubit operator", dim, m.ncols())));
        }
        let n = dim.trailing_zeros() as usize;
        linalg::check_size(n)?;
        if linalg::hermiticity_defect(m) > 1e-10 {
            return Err(Error::NonHermitian("dense matrix is not Hermitian".into()));
        }
        let mut op = HermitianOperator::zero(n);
        for x in 0..dim as u64 {
            for z in 0..dim as u64 {
                let key = PauliKey { n, x, z };
                let c = key.to_string_op().trace_with(m) / dim as f64;
                if c.norm() > 1e-13 {
                    op.add_term(key, c.re);
                }
            }
        }
        Ok(op)
    }

    /// `Tr(op rho)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        check_dims(self.n, rho.n_qubits())?;
        let m = rho.matrix();
        let mut acc = ZERO;
        for (k, c) in self.terms() {
            acc += k.to_string_op().trace_with(m) * c;
        }
        if acc.im.abs() > 1e-10 {
            return Err(Error::Internal(format!("expectation has imaginary part {}", acc.im)));
        }
        Ok(acc.re)
    }

    /// `<psi|op|psi>` for a state vector.
    pub fn expectation_vector(&self, psi: &CVector) -> Result<f64> {
        if psi.len() != 1usize << self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: psi.len().trailing_zeros() as usize });
        }
        let mut acc = ZERO;
        for (k, c) in self.terms() {
            let p = k.to_string_op();
            let mut t = ZERO;
            for j in 0..psi.len() {
                let (i, a) = p.apply_basis(j);
                t += psi[i].conj() * a * psi[j];
            }
            acc += t * c;
        }
        if acc.im.abs() > 1e-10 {
            return Err(Error::Internal(format!("expectation has imaginary part {}", acc.im)));
        }
        Ok(acc.re)
    }

    pub fn apply(&self, psi: &CVector) -> CVector {
        let mut out = CVector::zeros(psi.len());
        for (k, c) in self.terms() {
            let p = k.to_string_op();
            for j in 0..psi.len() {
                let (i, a) = p.apply_basis(j);
                out[i] += a * c * psi[j];
            }
        }
        out
    }

    /// Expectation on a product state given by one Bloch vector per qubit.
    pub fn product_expectation(&self, bloch: &[[f64; 3]]) -> f64 {
        self.terms()
            .map(|(k, c)| {
                c * (0..self.n)
                    .map(|q| match k.letter(q) {
                        Letter::I => 1.0,
                        Letter::X => bloch[q][0],
                        Letter::Y => bloch[q][1],
                        Letter::Z => bloch[q][2],
                    })
                    .product::<f64>()
            })
            .sum()
    }

    /// Pretty text form, e.g. `1.5 - XXX - 0.5 ZZI`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms().enumerate() {
            let sign = if c < 0.0 { "-" } else { "+" };
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if k.is_identity() {
                out.push_str(&format_coeff(mag));
            } else if (mag - 1.0).abs() < 1e-15 {
                out.push_str(&k.to_string());
            } else {
                out.push_str(&format!("{} {k}", format_coeff(mag)));
            }
        }
        out
    }
}

fn format_coeff(c: f64) -> String {
    let s = format!("{c:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl Add for HermitianOperator {
    type Output = HermitianOperator;
    fn add(mut self, rhs: HermitianOperator) -> HermitianOperator {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        for (k, c) in rhs.terms() {
            self.add_term(k, c);
        }
        self
    }
}

impl Sub for HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: HermitianOperator) -> HermitianOperator {
        self + rhs.scale(-1.0)
    }
}

impl Neg for HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

impl fmt::Display for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
