//! Eigenvalues of the Casimir chain on highest-weight modules.
//!
//! The invariants are defined by I_1 = tr A and I_m = tr[A^m - I_{m-1}],
//! where A is the generator matrix. On the module labelled by a partition
//! `lambda` every I_m acts by a scalar. Two independent evaluations are
//! implemented:
//!
//! * a recursion that peels the invariant down to a finite-rank trace,
//!   chi(I_m) = chi(I_m^(k)) - k chi(I_{m-1}), seeded with chi(I_1) = |lambda|;
//! * a closed form through the polynomial family P_m(x) = x^m - k P_{m-1}(x),
//!   P_1(x) = x, evaluated at the characteristic roots.
//!
//! Both are exact and rank-stable: any truncation rank k at least the depth
//! of `lambda` gives the same value, which the property tests pin down.

use serde::Serialize;

use crate::exact::Rat;
use crate::weights::{HighestWeight, WeightError};

/// Coefficients of P_m for rank `k`, lowest degree first (length `m + 1`).
pub fn pm_polynomial(m: u32, k: usize) -> Vec<Rat> {
    assert!(m >= 1, "P_m is defined for m >= 1");
    let neg_k = Rat::from_int(-(k as i64));
    let mut coeffs = vec![Rat::zero(), Rat::one()];
    for deg in 2..=m as usize {
        let mut next: Vec<Rat> = coeffs.iter().map(|c| &neg_k * c).collect();
        next.push(Rat::zero());
        next[deg] += &Rat::one();
        coeffs = next;
    }
    coeffs
}

/// P_m(x) by the defining recursion.
pub fn pm_eval(m: u32, k: usize, x: &Rat) -> Rat {
    assert!(m >= 1, "P_m is defined for m >= 1");
    let kr = Rat::from_int(k as i64);
    let mut p = x.clone();
    for deg in 2..=m {
        p = x.pow(deg) - &kr * p;
    }
    p
}

/// P_m(x) by the geometric-sum closed form; `None` at the pole x = -k.
pub fn pm_eval_closed(m: u32, k: usize, x: &Rat) -> Option<Rat> {
    assert!(m >= 1, "P_m is defined for m >= 1");
    let kr = Rat::from_int(k as i64);
    let denom = x + &kr;
    if denom.is_zero() {
        return None;
    }
    let minus_k_pow = (-kr).pow(m);
    Some(x * (x.pow(m) - minus_k_pow) / denom)
}

/// The interpolation weights prod_{j != i} (a_i - a_j + 1)/(a_i - a_j).
fn root_weights(roots: &[i64]) -> Vec<Rat> {
    roots
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let mut w = Rat::one();
            for (j, &aj) in roots.iter().enumerate() {
                if j != i {
                    let diff = Rat::from_int(ai - aj);
                    w = w * (&diff + &Rat::one()) / diff;
                }
            }
            w
        })
        .collect()
}

/// Eigenvalue of the rank-`k` trace invariant tr(A^m) on the module
/// labelled by `lambda`, via the characteristic roots.
pub fn glk_invariant_eigenvalue(
    lambda: &HighestWeight,
    k: usize,
    m: u32,
) -> Result<Rat, WeightError> {
    assert!(m >= 1, "invariants are indexed from 1");
    let roots = lambda.alpha_roots(k)?;
    let weights = root_weights(&roots);
    Ok(roots
        .iter()
        .zip(&weights)
        .map(|(&a, w)| Rat::from_int(a).pow(m) * w)
        .sum())
}

/// chi(I_m) by the recursion, peeled through rank `k`.
pub fn casimir_eigenvalue_recursive_at(
    lambda: &HighestWeight,
    m: u32,
    k: usize,
) -> Result<Rat, WeightError> {
    assert!(m >= 1, "invariants are indexed from 1");
    if k < lambda.depth() {
        return Err(WeightError::TruncationTooSmall {
            needed: lambda.depth(),
            got: k,
        });
    }
    let kr = Rat::from_int(k as i64);
    let mut chi = Rat::from_int(lambda.size());
    for deg in 2..=m {
        chi = glk_invariant_eigenvalue(lambda, k, deg)? - &kr * chi;
    }
    Ok(chi)
}

/// chi(I_m) by the recursion at the minimal rank.
pub fn casimir_eigenvalue_recursive(lambda: &HighestWeight, m: u32) -> Rat {
    let k = lambda.depth().max(1);
    casimir_eigenvalue_recursive_at(lambda, m, k).expect("rank covers the depth")
}

/// chi(I_m) by the closed form sum_i P_m(alpha_i) times the interpolation
/// weight of alpha_i, at rank `k`.
pub fn casimir_eigenvalue_closed_at(
    lambda: &HighestWeight,
    m: u32,
    k: usize,
) -> Result<Rat, WeightError> {
    assert!(m >= 1, "invariants are indexed from 1");
    let roots = lambda.alpha_roots(k.max(1))?;
    let weights = root_weights(&roots);
    Ok(roots
        .iter()
        .zip(&weights)
        .map(|(&a, w)| pm_eval(m, k.max(1), &Rat::from_int(a)) * w)
        .sum())
}

/// chi(I_m) by the closed form at the minimal rank.
pub fn casimir_eigenvalue_closed(lambda: &HighestWeight, m: u32) -> Rat {
    let k = lambda.depth().max(1);
    casimir_eigenvalue_closed_at(lambda, m, k).expect("rank covers the depth")
}

/// chi(I_1), ..., chi(I_m_max) in one pass of the recursion.
pub fn casimir_eigenvalue_sequence(lambda: &HighestWeight, m_max: u32) -> Vec<Rat> {
    assert!(m_max >= 1, "invariants are indexed from 1");
    let k = lambda.depth().max(1);
    let kr = Rat::from_int(k as i64);
    let mut out = Vec::with_capacity(m_max as usize);
    let mut chi = Rat::from_int(lambda.size());
    out.push(chi.clone());
    for deg in 2..=m_max {
        chi = glk_invariant_eigenvalue(lambda, k, deg).expect("rank covers the depth") - &kr * chi;
        out.push(chi.clone());
    }
    out
}

/// One eigenvalue computed every way we know how.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueReport {
    pub lambda: HighestWeight,
    pub m: u32,
    pub closed: Rat,
    pub recursive: Rat,
    pub agree: bool,
    /// Closed form re-evaluated through the geometric-sum expression for P_m;
    /// absent if any root hits the pole of that expression.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Rat>,
}

/// Computes chi(I_m) by both routes and cross-checks them.
pub fn eigenvalue_report(lambda: &HighestWeight, m: u32) -> EigenvalueReport {
    let closed = casimir_eigenvalue_closed(lambda, m);
    let recursive = casimir_eigenvalue_recursive(lambda, m);
    let k = lambda.depth().max(1);
    let oracle = (|| {
        let roots = lambda.alpha_roots(k).ok()?;
        let weights = root_weights(&roots);
        let mut total = Rat::zero();
        for (&a, w) in roots.iter().zip(&weights) {
            total = total + pm_eval_closed(m, k, &Rat::from_int(a))? * w;
        }
        Some(total)
    })();
    EigenvalueReport {
        lambda: lambda.clone(),
        m,
        agree: closed == recursive,
        closed,
        recursive,
        oracle,
    }
}
