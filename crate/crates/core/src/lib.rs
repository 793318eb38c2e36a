//! Full correlation tensors of multiqubit states and a partition-based test
//! for non-k-separability of complete graph states.
//!
//! ```
//! use ksep::correlation::{pure_tensor, tensor_norm, TensorOptions};
//! use ksep::separability::{detect, Outcome};
//! use ksep::states::complete_graph_state;
//!
//! let g6 = complete_graph_state(6)?;
//! let norm = tensor_norm(&pure_tensor(&g6, &TensorOptions::default())?);
//! assert!((norm - 33f64.sqrt()).abs() < 1e-9);
//! assert_eq!(detect(norm, 6, 2)?.outcome, Outcome::NonKSeparable);
//! # Ok::<(), ksep::Error>(())
//! ```
//!
//! The `book/` directory at the repository root walks through the concepts;
//! its code listings compile as doc-tests of this crate.

pub mod cli;
pub mod correlation;
pub mod error;
pub mod pauli;
pub mod separability;
pub mod stabilizer;
pub mod statefile;
pub mod states;

pub use error::{Error, Result};

// Each book chapter is checked by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pauli-and-states.md")]
    mod pauli_and_states {}
    #[doc = include_str!("../../../book/src/correlation-tensors.md")]
    mod correlation_tensors {}
    #[doc = include_str!("../../../book/src/stabilizer-support.md")]
    mod stabilizer_support {}
    #[doc = include_str!("../../../book/src/separability-bounds.md")]
    mod separability_bounds {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
