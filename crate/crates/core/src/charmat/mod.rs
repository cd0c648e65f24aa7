//! Characteristic matrices, invariant operators, and the polynomial
//! identities they satisfy on concrete modules.
//!
//! The characteristic matrix A of rank n packs every generator matrix into
//! one block operator on (C^n tensor V_n(lambda)). Everything downstream is
//! exact: powers of A, block traces, the recursive Casimir scalars, and the
//! annihilation certificates for products of the form prod (A - alpha).

mod block;
mod identities;
mod invariants;

pub use block::{char_matrix, op_power, split_casimir, BlockOperator};
pub use identities::{
    reduced_family_pq, reduced_identity_roots, root_minimality, theorem5_roots,
    theorem6_full_roots, verify_theorem5, verify_theorem5_at, verify_theorem5_reduced,
    verify_theorem6, verify_theorem6_at, verify_theorem6_reduced,
};
pub use invariants::{
    glk_trace_operator, invariant_operator, invariant_scalar, invariant_scalars, prop1_sample,
    verify_prop1, verify_prop2,
};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{MatError, Rat};
use crate::gt::GtError;
use crate::weights::{HighestWeight, WeightError};

#[derive(Debug, Error)]
pub enum CharError {
    #[error("split Casimir needs both modules at one rank, got {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank {n} too small for this identity, need at least {needed}")]
    RankTooSmall { n: usize, needed: usize },
    #[error(
        "invariant of order {m} on {lambda} at rank {n} is not scalar: \
         representation data is corrupt"
    )]
    NotScalar { lambda: String, n: usize, m: u32 },
    #[error("characteristic identity violated for {lambda}{} at rank {n}",
            .mu.as_deref().map(|m| format!(" (x) {m}")).unwrap_or_default())]
    IdentityViolation {
        lambda: String,
        mu: Option<String>,
        n: usize,
    },
    #[error("operator entry ({row}, {col}) crosses weight spaces; the grading is broken")]
    GradingViolation { row: usize, col: usize },
    #[error("two-block family needs p > q > 0 and k, l >= 1, got p={p} q={q} k={k} l={l}")]
    FamilyCondition { p: i64, q: i64, k: usize, l: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Gt(#[from] GtError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Outcome of one annihilation check. `kernel_dims` records the kernel
/// dimension of each left partial product, so the last entry equals the full
/// space dimension exactly when the residual vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCertificate {
    pub lambda: HighestWeight,
    pub mu: Option<HighestWeight>,
    pub n: usize,
    pub roots: Vec<Rat>,
    pub residual_zero: bool,
    pub kernel_dims: Vec<usize>,
}
