//! Constructors for graph, GHZ, W and cluster states and their mixtures with
//! the `|1...1>` product state.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::pauli::{MixedEnsemble, PureState};
use crate::stabilizer::StabilizerGroup;

/// Dense state vectors above this width are refused by the constructors.
pub const MAX_STATE_QUBITS: usize = 26;

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphSpec {
    /// Edges are unordered pairs; `(a, b)` and `(b, a)` in the same list count
    /// as a duplicate.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_width(n)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            if !(1..=n).contains(&a) || !(1..=n).contains(&b) {
                return Err(invalid(format!("edge {{{a},{b}}} leaves vertex range 1..={n}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(invalid(format!("duplicate edge {{{a},{b}}}")));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))))
    }

    /// Linear chain `{a, a+1}`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|a| (a, a + 1)))
    }

    /// Vertex 1 joined to every other vertex.
    pub fn star(n: usize) -> Result<Self> {
        Self::new(n, (2..=n).map(|b| (1, b)))
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Undirected DOT rendering with nodes and edges in ascending order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn check_width(n: usize) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("need at least 2 qubits, got {n}")));
    }
    if n > MAX_STATE_QUBITS {
        return Err(invalid(format!(
            "{n} qubits exceeds the state-vector limit of {MAX_STATE_QUBITS}"
        )));
    }
    Ok(())
}

/// Weight of the `|1...1>` admixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    p: f64,
}

impl NoiseSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("noise probability must lie in [0, 1], got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `prod_{ab in E} CZ_ab |+>^n`: every amplitude is `±2^{-n/2}`, negative
/// exactly when the basis string has an odd number of edges with both ends set.
pub fn graph_state(spec: &GraphSpec) -> PureState {
    let n = spec.n;
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let mut amps = vec![Complex64::new(scale, 0.0); 1 << n];
    for &(a, b) in &spec.edges {
        let both = (1usize << (n - a)) | (1usize << (n - b));
        amps.iter_mut()
            .enumerate()
            .filter(|(idx, _)| idx & both == both)
            .for_each(|(_, amp)| *amp = -*amp);
    }
    PureState::new(amps)
        .expect("graph state is normalized")
        .with_stabilizer(StabilizerGroup::from_graph(spec))
}

pub fn ghz_state(n: usize) -> Result<PureState> {
    check_width(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(s, 0.0);
    amps[(1 << n) - 1] = Complex64::new(s, 0.0);
    Ok(PureState::new(amps)?.with_stabilizer(StabilizerGroup::ghz(n)?))
}

pub fn w_state(n: usize) -> Result<PureState> {
    check_width(n)?;
    let s = (n as f64).sqrt().recip();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for q in 0..n {
        amps[1 << q] = Complex64::new(s, 0.0);
    }
    PureState::new(amps)
}

/// The linear-chain graph state, local-unitarily equivalent to the 1D cluster
/// state.
pub fn cluster_state(n: usize) -> Result<PureState> {
    Ok(graph_state(&GraphSpec::chain(n)?))
}

pub fn complete_graph_state(n: usize) -> Result<PureState> {
    Ok(graph_state(&GraphSpec::complete(n)?))
}

/// `|1>^{⊗n}`.
pub fn all_ones_state(n: usize) -> Result<PureState> {
    if n == 0 || n > MAX_STATE_QUBITS {
        return Err(invalid(format!("unsupported width {n}")));
    }
    let index = (1usize << n) - 1;
    Ok(PureState::basis(n, index)?.with_stabilizer(StabilizerGroup::basis(n, index as u64)?))
}

/// `(1-p) |base><base| + p |1..1><1..1|`; the endpoints collapse to one term.
pub fn noisy_mixture(base: PureState, noise: NoiseSpec) -> Result<MixedEnsemble> {
    let p = noise.p;
    if p == 0.0 {
        return Ok(MixedEnsemble::pure(base));
    }
    let ones = all_ones_state(base.n())?;
    if p == 1.0 {
        return Ok(MixedEnsemble::pure(ones));
    }
    MixedEnsemble::new(vec![(1.0 - p, base), (p, ones)])
}

/// The four state families compared by tensor norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Cg,
    Ghz,
    W,
    Cluster,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Cg, Family::Ghz, Family::W, Family::Cluster];

    pub fn state(self, n: usize) -> Result<PureState> {
        match self {
            Family::Cg => complete_graph_state(n),
            Family::Ghz => ghz_state(n),
            Family::W => w_state(n),
            Family::Cluster => cluster_state(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cg => "cg",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::Cluster => "cluster",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cg" | "complete" => Ok(Family::Cg),
            "ghz" => Ok(Family::Ghz),
            "w" => Ok(Family::W),
            "cluster" => Ok(Family::Cluster),
            other => Err(invalid(format!("unknown state family {other:?}"))),
        }
    }
}
