//! Exact computation with Casimir invariants of the stable general linear
//! algebra on unitarizable highest-weight modules.
//!
//! The crate computes invariant eigenvalues in closed form, realizes the
//! corresponding finite-rank modules explicitly, and verifies characteristic
//! identities of the generator matrix as exact zero-operator statements.

pub mod casimir;
pub mod charmat;
pub mod cli;
pub mod exact;
pub mod sweep;
pub mod gt;
pub mod par;
pub mod tensor;
pub mod weights;
