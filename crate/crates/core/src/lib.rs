//! Exact arithmetic for Hermitian lattices over a ramified quadratic
//! extension of `Q_p`, and the invariants of the associated local special
//! cycles.
//!
//! The pipeline is: [`RamifiedContext`] fixes `p`, `ε` and `δ²`; a
//! [`HermGram`] is split into Jordan components by [`jordan_split`];
//! [`cycle::analyze`] reads off dimension and irreducibility; the
//! [`oracle`] module enumerates vertex lattices to cross-check those
//! answers; [`global`] handles the positive-definite global case.

pub mod cycle;
pub mod error;
pub mod global;
pub mod jordan;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod padic;
pub mod ramified;

pub use cycle::{analyze, cycle_invariants, CycleInvariants, CycleStatus};
pub use error::{Error, Result};
pub use jordan::{jordan_split, JordanBlock, JordanReport};
pub use lattice::{HermGram, HermLattice};
pub use padic::{hilbert_symbol, Place, Rational, SplittingType};
pub use ramified::{OhElement, RamifiedContext};
