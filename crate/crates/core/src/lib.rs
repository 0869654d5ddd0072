//! Computations with submonoids of `(N0*)^s` arising as solution sets of
//! homogeneous linear Diophantine systems, their systems of supports, and the
//! monoid-theoretic tests built on them.

pub mod classify;
pub mod constructions;
pub mod error;
pub mod extnat;
pub mod hilbert;
pub mod levyodenthal;
pub mod supports;
pub mod system;

pub use error::{Error, Result};
pub use extnat::{ExtNat, ExtVec, Fin, IndexSet, Inf, MAX_DIM};
pub use hilbert::{find_order_unit, hilbert_basis, in_generated, HilbertBasis};
pub use system::{DioSystem, ShiftMode};
pub use supports::{extract, generators, member_via_supports, SystemOfSupports};
