//! Pauli strings, pure states and finite ensembles.
//!
//! Basis indices follow the left-to-right tensor-product order: qubit 1 is the
//! most significant bit, so `|b_1 b_2 ... b_N>` sits at index
//! `sum_n b_n * 2^(N-n)`. Every bit mask in this crate (Pauli `x`/`z` masks,
//! stabilizer rows) uses the same convention: qubit `q` (zero-based) is bit
//! `n - 1 - q`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::stabilizer::StabilizerGroup;

/// Normalization tolerance for amplitude vectors and ensemble weights.
pub const NORM_TOL: f64 = 1e-9;

/// Largest imaginary part tolerated in `<psi|P|psi>` before it is treated as
/// an internal inconsistency.
pub const IMAG_TOL: f64 = 1e-9;

/// Strings are packed into `u64` bit masks.
pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// `(x, z)` bits of the single-qubit operator; `Y` carries both.
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// A Hermitian tensor product of single-qubit Paulis, with no phase.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() || ops.len() > MAX_QUBITS {
            return Err(invalid(format!(
                "Pauli string length must be in 1..={MAX_QUBITS}, got {}",
                ops.len()
            )));
        }
        Ok(Self { ops })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    /// Builds a string from symplectic masks (qubit `q` is bit `n - 1 - q`).
    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        let ops = (0..n)
            .map(|q| {
                let bit = 1u64 << (n - 1 - q);
                Pauli::from_bits(x & bit != 0, z & bit != 0)
            })
            .collect();
        Self::new(ops)
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn masks(&self) -> (u64, u64) {
        let n = self.n();
        self.ops
            .iter()
            .enumerate()
            .fold((0, 0), |(x, z), (q, op)| {
                let bit = 1u64 << (n - 1 - q);
                let (bx, bz) = op.bits();
                (
                    if bx { x | bit } else { x },
                    if bz { z | bit } else { z },
                )
            })
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&op| op != Pauli::I).count()
    }

    pub fn is_identity_free(&self) -> bool {
        self.weight() == self.n()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ops.iter().try_for_each(|op| write!(f, "{}", op.as_char()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| invalid(format!("bad Pauli symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

/// An index of the full correlation tensor: one of `1, 2, 3` per qubit,
/// standing for `X, Y, Z`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullIndex {
    indices: Vec<u8>,
}

impl FullIndex {
    pub fn new(indices: Vec<u8>) -> Result<Self> {
        if indices.is_empty() || indices.len() > MAX_QUBITS {
            return Err(invalid("full index length must be in 1..=64"));
        }
        if let Some(bad) = indices.iter().find(|&&i| !(1..=3).contains(&i)) {
            return Err(invalid(format!("full index entries must be 1, 2 or 3, got {bad}")));
        }
        Ok(Self { indices })
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    /// Base-3 key with qubit 1 as the most significant digit, so key order is
    /// lexicographic order on the index tuple.
    pub fn pack(&self) -> u64 {
        self.indices
            .iter()
            .fold(0u64, |acc, &i| acc * 3 + u64::from(i - 1))
    }

    pub fn unpack(n: usize, mut key: u64) -> Self {
        let mut indices = vec![0u8; n];
        for slot in indices.iter_mut().rev() {
            *slot = (key % 3) as u8 + 1;
            key /= 3;
        }
        Self { indices }
    }

    /// Key of the identity-free string with the given masks, or `None` if some
    /// qubit carries the identity.
    pub fn key_from_masks(n: usize, x: u64, z: u64) -> Option<u64> {
        let full = full_mask(n);
        if (x | z) & full != full {
            return None;
        }
        let mut key = 0u64;
        for q in 0..n {
            let bit = 1u64 << (n - 1 - q);
            let digit = match (x & bit != 0, z & bit != 0) {
                (true, false) => 0,
                (true, true) => 1,
                _ => 2,
            };
            key = key * 3 + digit;
        }
        Some(key)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Maps `1 -> X`, `2 -> Y`, `3 -> Z` positionwise.
pub fn embed(idx: &FullIndex) -> PauliString {
    let ops = idx
        .indices
        .iter()
        .map(|&i| match i {
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        })
        .collect();
    PauliString { ops }
}

/// Normalized state vector on `n` qubits.
///
/// States built by [`crate::states`] also carry the stabilizer group that
/// fixes them, which lets [`crate::correlation::full_tensor`] skip the dense
/// sweep.
#[derive(Clone, Debug)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<Complex64>,
    stabilizer: Option<Arc<StabilizerGroup>>,
}

impl PureState {
    /// Accepts an amplitude vector of length `2^n` with unit norm (within
    /// [`NORM_TOL`]).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state is not normalized: |psi|^2 = {norm_sq}")));
        }
        Ok(Self {
            n,
            amplitudes,
            stabilizer: None,
        })
    }

    /// Rescales to unit norm; fails only on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_len(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        let scale = norm_sq.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Self::new(amplitudes)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize - 1 || index >= 1 << n {
            return Err(invalid(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    pub(crate) fn with_stabilizer(mut self, group: StabilizerGroup) -> Self {
        debug_assert_eq!(group.n(), self.n);
        self.stabilizer = Some(Arc::new(group));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The stabilizer group attached by the state constructors, if any.
    pub fn stabilizer(&self) -> Option<&StabilizerGroup> {
        self.stabilizer.as_deref()
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        PureState {
            n: self.n + other.n,
            amplitudes,
            stabilizer: None,
        }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(invalid(format!(
            "amplitude vector length must be 2^n with n >= 1, got {len}"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `<psi|P|psi>`, computed in one pass over the amplitudes.
///
/// `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`, so the sum pairs amplitude `b`
/// with the conjugate of amplitude `b ^ x`.
pub fn expectation(state: &PureState, p: &PauliString) -> Result<f64> {
    if state.n != p.n() {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: p.n(),
        });
    }
    let (x, z) = p.masks();
    expectation_masks(state, x, z)
}

/// [`expectation`] for the string with symplectic masks `(x, z)`.
pub(crate) fn expectation_masks(state: &PureState, x: u64, z: u64) -> Result<f64> {
    let amps = &state.amplitudes;
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, &a) in amps.iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let term = amps[b ^ x as usize].conj() * a;
        if (b as u64 & z).count_ones() & 1 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let value = match (x & z).count_ones() % 4 {
        0 => acc,
        1 => Complex64::new(-acc.im, acc.re),
        2 => -acc,
        _ => Complex64::new(acc.im, -acc.re),
    };
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// Convex mixture of pure states on a common register.
#[derive(Clone, Debug)]
pub struct MixedEnsemble {
    n: usize,
    terms: Vec<(f64, PureState)>,
}

impl MixedEnsemble {
    pub fn new(terms: Vec<(f64, PureState)>) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, s)| s.n)
            .ok_or_else(|| invalid("ensemble must contain at least one term"))?;
        if let Some((_, s)) = terms.iter().find(|(_, s)| s.n != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.n,
            });
        }
        if let Some((w, _)) = terms.iter().find(|(w, _)| !(*w > 0.0)) {
            return Err(invalid(format!("ensemble weights must be positive, got {w}")));
        }
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("ensemble weights sum to {total}, not 1")));
        }
        Ok(Self { n, terms })
    }

    pub fn pure(state: PureState) -> Self {
        Self {
            n: state.n,
            terms: vec![(1.0, state)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PureState)] {
        &self.terms
    }
}

/// `sum_i w_i <psi_i|P|psi_i>`.
pub fn ensemble_expectation(ens: &MixedEnsemble, p: &PauliString) -> Result<f64> {
    if ens.n != p.n() {
        return Err(Error::DimensionMismatch {
            expected: ens.n,
            found: p.n(),
        });
    }
    ens.terms
        .iter()
        .try_fold(0.0, |acc, (w, s)| Ok(acc + w * expectation(s, p)?))
}
