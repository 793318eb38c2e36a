//! Full N-body correlation tensors and their standard (Frobenius) norm.
//!
//! A tensor is stored sparsely: only identity-free strings whose expectation
//! exceeds `zero_tol` in magnitude are kept, keyed by the packed base-3 index
//! of [`FullIndex::pack`]. Keys iterate in lexicographic index order, which
//! makes serialized output deterministic.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::pauli::{expectation_masks, FullIndex, MixedEnsemble, Pauli, PauliString, PureState};
use crate::stabilizer::{cg_nonzero_pattern, full_weight_support, ghz_nonzero_pattern};
use crate::states::Family;

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
pub const DEFAULT_DENSE_LIMIT: usize = 10;

/// How [`full_tensor`] evaluates expectation values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TensorPath {
    /// Stabilizer enumeration when every ensemble member carries a stabilizer
    /// group, the dense sweep otherwise.
    #[default]
    Auto,
    /// Always sweep all `3^n` strings against the amplitudes.
    Dense,
    /// Require the stabilizer route.
    Stabilizer,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorOptions {
    pub zero_tol: f64,
    /// Widest register the dense sweep will accept.
    pub dense_limit: usize,
    pub path: TensorPath,
}

impl Default for TensorOptions {
    fn default() -> Self {
        Self {
            zero_tol: DEFAULT_ZERO_TOL,
            dense_limit: DEFAULT_DENSE_LIMIT,
            path: TensorPath::Auto,
        }
    }
}

impl TensorOptions {
    pub fn dense() -> Self {
        Self {
            path: TensorPath::Dense,
            ..Self::default()
        }
    }

    pub fn stabilizer() -> Self {
        Self {
            path: TensorPath::Stabilizer,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    n: usize,
    entries: BTreeMap<u64, f64>,
    zero_tol: f64,
}

impl CorrelationTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    /// Stored entries by packed key.
    pub fn entries(&self) -> &BTreeMap<u64, f64> {
        &self.entries
    }

    /// Entry value; absent indices are zero.
    pub fn get(&self, idx: &FullIndex) -> f64 {
        self.entries.get(&idx.pack()).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (FullIndex, f64)> + '_ {
        self.entries
            .iter()
            .map(|(&k, &v)| (FullIndex::unpack(self.n, k), v))
    }

    /// Sum of squared entries.
    pub fn norm_sq(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum()
    }

    /// `sum_I T_I * U_I` over the common support.
    pub fn dot(&self, other: &CorrelationTensor) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .entries
            .iter()
            .filter_map(|(k, v)| other.entries.get(k).map(|w| v * w))
            .sum())
    }
}

fn masks_from_key(n: usize, mut key: u64) -> (u64, u64) {
    let (mut x, mut z) = (0u64, 0u64);
    for bit in 0..n {
        match key % 3 {
            0 => x |= 1 << bit,
            1 => {
                x |= 1 << bit;
                z |= 1 << bit;
            }
            _ => z |= 1 << bit,
        }
        key /= 3;
    }
    (x, z)
}

fn dense_entries(ens: &MixedEnsemble, zero_tol: f64) -> Result<BTreeMap<u64, f64>> {
    let n = ens.n();
    let total = 3u64.pow(n as u32);
    let kept: Vec<(u64, f64)> = (0..total)
        .into_par_iter()
        .map(|key| {
            let (x, z) = masks_from_key(n, key);
            let value = ens
                .terms()
                .iter()
                .try_fold(0.0, |acc, (w, s)| Ok::<_, Error>(acc + w * expectation_masks(s, x, z)?))?;
            Ok((key, value))
        })
        .filter(|r: &Result<(u64, f64)>| r.as_ref().map_or(true, |(_, v)| v.abs() > zero_tol))
        .collect::<Result<_>>()?;
    Ok(kept.into_iter().collect())
}

fn stabilizer_entries(ens: &MixedEnsemble, zero_tol: f64) -> Option<BTreeMap<u64, f64>> {
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    for (w, state) in ens.terms() {
        let group = state.stabilizer()?;
        for (key, sign) in full_weight_support(group).entries {
            *acc.entry(key).or_insert(0.0) += w * f64::from(sign);
        }
    }
    acc.retain(|_, v| v.abs() > zero_tol);
    Some(acc)
}

/// Every identity-free expectation of `ens` with magnitude above `zero_tol`.
pub fn full_tensor(ens: &MixedEnsemble, opts: &TensorOptions) -> Result<CorrelationTensor> {
    if !(opts.zero_tol >= 0.0) {
        return Err(invalid(format!("zero tolerance must be non-negative, got {}", opts.zero_tol)));
    }
    let n = ens.n();
    let fast_path = || {
        let all_tagged = ens.terms().iter().all(|(_, s)| s.stabilizer().is_some());
        all_tagged.then(|| stabilizer_entries(ens, opts.zero_tol)).flatten()
    };
    let dense = || {
        if n > opts.dense_limit {
            return Err(Error::ResourceLimit {
                n,
                limit: opts.dense_limit,
            });
        }
        dense_entries(ens, opts.zero_tol)
    };
    let entries = match opts.path {
        TensorPath::Dense => dense()?,
        TensorPath::Stabilizer => fast_path()
            .ok_or_else(|| invalid("stabilizer path requested for a state without a stabilizer group"))?,
        TensorPath::Auto => match fast_path() {
            Some(entries) => entries,
            None => dense()?,
        },
    };
    Ok(CorrelationTensor {
        n,
        entries,
        zero_tol: opts.zero_tol,
    })
}

/// [`full_tensor`] of a single pure state.
pub fn pure_tensor(state: &PureState, opts: &TensorOptions) -> Result<CorrelationTensor> {
    full_tensor(&MixedEnsemble::pure(state.clone()), opts)
}

pub fn tensor_norm(t: &CorrelationTensor) -> f64 {
    t.norm_sq().sqrt()
}

pub fn support_size(t: &CorrelationTensor) -> usize {
    t.entries.len()
}

/// Observables whose expectations determine the tensor norm of a
/// complete-graph (or GHZ) state, optionally mixed with `|1...1>`.
///
/// The noise adds `Z^{⊗n}`; for the GHZ family at even `n` it is already in
/// the support.
pub fn measurement_settings(family: Family, n: usize, noise: bool) -> Result<Vec<PauliString>> {
    let mut pattern = match family {
        Family::Cg => cg_nonzero_pattern(n)?,
        Family::Ghz => ghz_nonzero_pattern(n)?,
        other => {
            return Err(invalid(format!(
                "measurement settings are only defined for cg and ghz, not {other}"
            )))
        }
    };
    if noise {
        let zn = FullIndex::new(vec![3; n])?.pack();
        pattern.keys.insert(zn);
    }
    debug_assert!(pattern
        .pauli_strings()
        .iter()
        .all(|p| p.ops().iter().all(|&op| op != Pauli::I)));
    Ok(pattern.pauli_strings())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormRow {
    pub family: Family,
    pub n: usize,
    pub norm_sq: f64,
    pub norm: f64,
}

/// One row per `(family, n)`, family-major, `n` ascending.
pub fn norm_table(
    families: &[Family],
    n_min: usize,
    n_max: usize,
    opts: &TensorOptions,
) -> Result<Vec<NormRow>> {
    if n_min < 2 || n_min > n_max {
        return Err(invalid(format!("bad qubit range {n_min}..={n_max}")));
    }
    let mut rows = Vec::with_capacity(families.len() * (n_max - n_min + 1));
    for &family in families {
        for n in n_min..=n_max {
            let t = pure_tensor(&family.state(n)?, opts)?;
            let norm_sq = t.norm_sq();
            rows.push(NormRow {
                family,
                n,
                norm_sq,
                norm: norm_sq.sqrt(),
            });
        }
    }
    Ok(rows)
}
