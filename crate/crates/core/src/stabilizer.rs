//! Graph-state stabilizer groups in binary symplectic form.
//!
//! Group elements are tracked in product form `i^phase X^x Z^z`. Multiplying
//! `X^{x1} Z^{z1} X^{x2} Z^{z2}` picks up `(-1)^{|z1 & x2|}` from moving the
//! `Z`s past the `X`s, so phases stay exact without complex arithmetic. A
//! Hermitian Pauli string `P` with masks `(x, z)` equals `i^{|x & z|} X^x Z^z`
//! (one factor of `i` per `Y`), which converts product form back to a sign.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::error::{invalid, Error, Result};
use crate::pauli::{full_mask, FullIndex, PauliString, MAX_QUBITS};
use crate::states::GraphSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PhasedPauli {
    x: u64,
    z: u64,
    phase: u8,
}

impl PhasedPauli {
    const IDENTITY: Self = Self { x: 0, z: 0, phase: 0 };

    fn from_generator(g: &Generator) -> Self {
        let neg = if g.sign < 0 { 2 } else { 0 };
        Self {
            x: g.x,
            z: g.z,
            phase: ((neg + (g.x & g.z).count_ones()) % 4) as u8,
        }
    }

    fn mul(self, rhs: Self) -> Self {
        let swap = 2 * (self.z & rhs.x).count_ones();
        Self {
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: ((u32::from(self.phase) + u32::from(rhs.phase) + swap) % 4) as u8,
        }
    }

    /// Sign `±1` relative to the Hermitian Pauli string with the same masks.
    fn hermitian_sign(self) -> Result<i8> {
        let rel = (u32::from(self.phase) + 4 - (self.x & self.z).count_ones() % 4) % 4;
        match rel {
            0 => Ok(1),
            2 => Ok(-1),
            other => Err(Error::NonHermitianPhase(other as u8)),
        }
    }
}

/// One stabilizer row: `sign * P(x, z)` with `P` the Hermitian Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub x: u64,
    pub z: u64,
    pub sign: i8,
}

impl Generator {
    pub fn pauli(&self, n: usize) -> PauliString {
        PauliString::from_masks(n, self.x, self.z).expect("generator width checked at construction")
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: u128,
    combo: u64,
    pivot: u32,
}

fn symplectic(x: u64, z: u64) -> u128 {
    u128::from(x) | (u128::from(z) << 64)
}

/// `n` commuting, independent signed Pauli generators.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<Generator>,
    echelon: Vec<EchelonRow>,
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<Generator>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(invalid(format!("stabilizer width must be in 1..={MAX_QUBITS}")));
        }
        if generators.len() != n {
            return Err(invalid(format!(
                "need exactly {n} generators, got {}",
                generators.len()
            )));
        }
        let mask = full_mask(n);
        for g in &generators {
            if g.sign != 1 && g.sign != -1 {
                return Err(invalid("generator sign must be +1 or -1"));
            }
            if (g.x | g.z) & !mask != 0 {
                return Err(invalid("generator acts outside the register"));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                let form = (a.x & b.z).count_ones() + (a.z & b.x).count_ones();
                if form % 2 != 0 {
                    return Err(invalid("generators do not commute"));
                }
            }
        }
        let mut echelon: Vec<EchelonRow> = Vec::with_capacity(n);
        for (i, g) in generators.iter().enumerate() {
            let mut vec = symplectic(g.x, g.z);
            let mut combo = 1u64 << i;
            for row in &echelon {
                if vec >> row.pivot & 1 == 1 {
                    vec ^= row.vec;
                    combo ^= row.combo;
                }
            }
            if vec == 0 {
                return Err(invalid("generators are linearly dependent"));
            }
            echelon.push(EchelonRow {
                vec,
                combo,
                pivot: 127 - vec.leading_zeros(),
            });
        }
        Ok(Self {
            n,
            generators,
            echelon,
        })
    }

    /// Row `a` is `X_a Z_{N(a)}`, sign `+1`.
    pub fn from_graph(spec: &GraphSpec) -> Self {
        let n = spec.n();
        let bit = |v: usize| 1u64 << (n - v);
        let mut z = vec![0u64; n];
        for &(a, b) in spec.edges() {
            z[a - 1] |= bit(b);
            z[b - 1] |= bit(a);
        }
        let generators = (1..=n)
            .map(|a| Generator {
                x: bit(a),
                z: z[a - 1],
                sign: 1,
            })
            .collect();
        Self::new(n, generators).expect("graph stabilizers are valid")
    }

    /// `X^{⊗n}` together with `Z_a Z_{a+1}`.
    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("GHZ needs at least 2 qubits"));
        }
        let mask = full_mask(n);
        let mut generators = vec![Generator {
            x: mask,
            z: 0,
            sign: 1,
        }];
        generators.extend((0..n - 1).map(|q| Generator {
            x: 0,
            z: 0b11u64 << (n - 2 - q),
            sign: 1,
        }));
        Self::new(n, generators)
    }

    /// Stabilizers `±Z_a` of a computational basis state.
    pub fn basis(n: usize, index: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS || index & !full_mask(n) != 0 {
            return Err(invalid("basis index out of range"));
        }
        let generators = (0..n)
            .map(|q| {
                let bit = 1u64 << (n - 1 - q);
                Generator {
                    x: 0,
                    z: bit,
                    sign: if index & bit != 0 { -1 } else { 1 },
                }
            })
            .collect();
        Self::new(n, generators)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Which generators multiply to `P(x, z)` up to sign, if any.
    fn decompose(&self, x: u64, z: u64) -> Option<u64> {
        let mut vec = symplectic(x, z);
        let mut combo = 0u64;
        for row in &self.echelon {
            if vec >> row.pivot & 1 == 1 {
                vec ^= row.vec;
                combo ^= row.combo;
            }
        }
        (vec == 0).then_some(combo)
    }

    fn product(&self, combo: u64) -> PhasedPauli {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| combo >> i & 1 == 1)
            .fold(PhasedPauli::IDENTITY, |acc, (_, g)| {
                acc.mul(PhasedPauli::from_generator(g))
            })
    }
}

/// `<P>` on the stabilizer state: `±1` when `±P` is in the group, else 0.
pub fn stabilizer_expectation(g: &StabilizerGroup, p: &PauliString) -> Result<i8> {
    if g.n != p.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n,
            found: p.n(),
        });
    }
    let (x, z) = p.masks();
    let Some(combo) = g.decompose(x, z) else {
        return Ok(0);
    };
    let element = g.product(combo);
    debug_assert_eq!((element.x, element.z), (x, z));
    element.hermitian_sign()
}

/// Signed identity-free elements of a stabilizer group, keyed by packed
/// [`FullIndex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    pub n: usize,
    pub entries: BTreeMap<u64, i8>,
}

impl SupportPattern {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn indices(&self) -> IndexPattern {
        IndexPattern {
            n: self.n,
            keys: self.entries.keys().copied().collect(),
        }
    }
}

/// An unsigned set of packed full-tensor indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPattern {
    pub n: usize,
    pub keys: BTreeSet<u64>,
}

impl IndexPattern {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn pauli_strings(&self) -> Vec<PauliString> {
        self.keys
            .iter()
            .map(|&k| crate::pauli::embed(&FullIndex::unpack(self.n, k)))
            .collect()
    }
}

/// Walks all `2^n` group elements in Gray-code order, one generator
/// multiplication per step, keeping those without identity factors.
pub fn full_weight_support(g: &StabilizerGroup) -> SupportPattern {
    let n = g.n;
    assert!(n < 40, "enumerating 2^{n} stabilizer elements is not supported");
    let rows: Vec<PhasedPauli> = g.generators.iter().map(PhasedPauli::from_generator).collect();
    let mut entries = BTreeMap::new();
    let mut cur = PhasedPauli::IDENTITY;
    for step in 1u64..(1u64 << n) {
        cur = cur.mul(rows[step.trailing_zeros() as usize]);
        if let Some(key) = FullIndex::key_from_masks(n, cur.x, cur.z) {
            let sign = cur
                .hermitian_sign()
                .expect("commuting generators multiply to Hermitian elements");
            entries.insert(key, sign);
        }
    }
    SupportPattern { n, entries }
}

fn check_pattern_width(n: usize) -> Result<()> {
    if !(2..40).contains(&n) {
        return Err(invalid(format!("pattern width must be in 2..40, got {n}")));
    }
    Ok(())
}

/// Permutations of `X^{⊗x} Z^{⊗(n-x)}` for odd `x`, plus `Y^{⊗n}` for even `n`.
pub fn cg_nonzero_pattern(n: usize) -> Result<IndexPattern> {
    check_pattern_width(n)?;
    let full = full_mask(n);
    let mut keys: BTreeSet<u64> = (0..=full)
        .filter(|m| m.count_ones() % 2 == 1)
        .filter_map(|m| FullIndex::key_from_masks(n, m, full ^ m))
        .collect();
    if n % 2 == 0 {
        keys.extend(FullIndex::key_from_masks(n, full, full));
    }
    Ok(IndexPattern { n, keys })
}

/// Permutations of `Y^{⊗x} X^{⊗(n-x)}` for even `x`, plus `Z^{⊗n}` for even `n`.
pub fn ghz_nonzero_pattern(n: usize) -> Result<IndexPattern> {
    check_pattern_width(n)?;
    let full = full_mask(n);
    let mut keys: BTreeSet<u64> = (0..=full)
        .filter(|m| m.count_ones() % 2 == 0)
        .filter_map(|m| FullIndex::key_from_masks(n, full, m))
        .collect();
    if n % 2 == 0 {
        keys.extend(FullIndex::key_from_masks(n, 0, full));
    }
    Ok(IndexPattern { n, keys })
}

/// `2^{n-1} + s`, with `s = 1` for even `n`.
pub fn cg_support_count(n: usize) -> u64 {
    assert!((1..=64).contains(&n), "support count defined for 1..=64 qubits");
    (1u64 << (n - 1)) + u64::from(n % 2 == 0)
}

/// Squared norm of the full correlation tensor of the `n`-qubit complete
/// graph state, square-rooted.
pub fn cg_norm_closed(n: usize) -> f64 {
    (cg_support_count(n) as f64).sqrt()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * (n - k + i) / i)
}

/// Term-by-term count of the complete-graph support.
#[derive(Clone, Debug)]
pub struct PermutationCount {
    pub n: usize,
    /// `(x, C(n, x))` for every odd `x`.
    pub terms: Vec<(usize, BigUint)>,
    /// The extra `Y^{⊗n}` string, present for even `n`.
    pub y_term: bool,
    pub total: BigUint,
    pub closed_form: BigUint,
}

impl PermutationCount {
    pub fn agrees(&self) -> bool {
        self.total == self.closed_form
    }
}

pub fn permutation_terms(n: usize) -> Result<PermutationCount> {
    if n < 2 {
        return Err(invalid(format!("permutation count needs n >= 2, got {n}")));
    }
    let terms: Vec<(usize, BigUint)> = (1..=n)
        .step_by(2)
        .map(|x| (x, binomial(n as u64, x as u64)))
        .collect();
    let y_term = n % 2 == 0;
    let total = terms.iter().map(|(_, c)| c).sum::<BigUint>() + u32::from(y_term);
    let closed_form = (BigUint::from(1u32) << (n - 1)) + u32::from(y_term);
    Ok(PermutationCount {
        n,
        terms,
        y_term,
        total,
        closed_form,
    })
}

/// Number of complete-graph support strings, summed from binomials.
pub fn permutation_count(n: usize) -> Result<BigUint> {
    Ok(permutation_terms(n)?.total)
}
