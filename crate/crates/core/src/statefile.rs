//! TOML state descriptions consumed by `ksep detect`.
//!
//! Either a named family:
//!
//! ```toml
//! family = "graph"   # cg | ghz | w | cluster | graph
//! n = 4
//! edges = [[1, 2], [2, 3], [3, 4]]
//! p = 0.1            # optional |1..1> admixture
//! ```
//!
//! or raw amplitudes as `[re, im]` pairs, qubit 1 being the most significant
//! bit of the basis index:
//!
//! ```toml
//! n = 1
//! amplitudes = [[0.6, 0.0], [0.0, 0.8]]
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{MixedEnsemble, PureState};
use crate::states::{graph_state, noisy_mixture, Family, GraphSpec, NoiseSpec};

/// Raw amplitude vectors further than this from unit norm are rescaled with a
/// warning.
pub const RENORMALIZE_WARN_TOL: f64 = 1e-6;

const HEADER: &str = "\
# ksep state file
# basis order: qubit 1 is the most significant bit of the amplitude index
# complex amplitudes are [re, im] pairs
";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

/// An ensemble together with any non-fatal notes raised while building it.
#[derive(Clone, Debug)]
pub struct LoadedState {
    pub ensemble: MixedEnsemble,
    pub warnings: Vec<String>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::StateFile(msg.into())
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: StateFile = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        match (&self.family, &self.amplitudes) {
            (Some(_), Some(_)) => return Err(bad("give either `family` or `amplitudes`, not both")),
            (None, None) => return Err(bad("missing `family` or `amplitudes`")),
            _ => {}
        }
        if self.edges.is_some() && self.family.as_deref() != Some("graph") {
            return Err(bad("`edges` is only meaningful with family = \"graph\""));
        }
        if let Some(amps) = &self.amplitudes {
            if self.n == 0 || self.n >= usize::BITS as usize || amps.len() != 1 << self.n {
                return Err(bad(format!(
                    "expected 2^{} amplitudes, found {}",
                    self.n,
                    amps.len()
                )));
            }
        }
        Ok(())
    }

    /// The pure state before any noise is mixed in.
    pub fn base_state(&self) -> Result<(PureState, Vec<String>)> {
        self.validate()?;
        if let Some(amps) = &self.amplitudes {
            let vec: Vec<Complex64> = amps.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            let norm_sq: f64 = vec.iter().map(|a| a.norm_sqr()).sum();
            let mut warnings = Vec::new();
            if (norm_sq - 1.0).abs() > RENORMALIZE_WARN_TOL {
                warnings.push(format!("amplitudes had squared norm {norm_sq}; renormalized"));
            }
            let state = PureState::normalized(vec).map_err(|e| bad(e.to_string()))?;
            return Ok((state, warnings));
        }
        let name = self.family.as_deref().unwrap_or_default();
        let state = if name == "graph" {
            let edges = self.edges.clone().unwrap_or_default();
            graph_state(&GraphSpec::new(self.n, edges.into_iter().map(|[a, b]| (a, b)))?)
        } else {
            name.parse::<Family>()?.state(self.n)?
        };
        Ok((state, Vec::new()))
    }

    pub fn to_ensemble(&self) -> Result<LoadedState> {
        let (state, warnings) = self.base_state()?;
        let noise = NoiseSpec::new(self.p.unwrap_or(0.0))?;
        Ok(LoadedState {
            ensemble: noisy_mixture(state, noise)?,
            warnings,
        })
    }

    /// Same state with the base spelled out as amplitudes.
    pub fn to_raw(&self) -> Result<StateFile> {
        let (state, _) = self.base_state()?;
        Ok(StateFile {
            family: None,
            n: state.n(),
            edges: None,
            p: self.p,
            amplitudes: Some(state.amplitudes().iter().map(|a| [a.re, a.im]).collect()),
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        let body = toml::to_string(self).map_err(|e| bad(e.to_string()))?;
        Ok(format!("{HEADER}{body}"))
    }
}
