//! Invariant operators extracted from powers of the characteristic matrix,
//! plus the commutator and truncation checks that pin the construction down.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::casimir::casimir_eigenvalue_closed;
use crate::exact::{Rat, SparseMatrix};
use crate::gt::ModuleRep;
use crate::par::ExecMode;

use super::block::{char_matrix, op_power};
use super::CharError;

/// Scalars of the invariant chain on `rep` for orders `1..=m_max`.
///
/// Order m is the block trace of `A^m` minus `n` times the previous scalar;
/// each step must come out as an exact multiple of the identity on the
/// irreducible module, anything else means the generator data is corrupt.
/// The scalars are rank-independent: any rank at which the module builds
/// reproduces the same chain.
pub fn invariant_scalars(
    rep: &ModuleRep,
    m_max: u32,
    mode: ExecMode,
) -> Result<Vec<Rat>, CharError> {
    chain(rep, m_max, mode).map(|(_, scalars)| scalars)
}

/// The order-`m` invariant as a matrix on `rep`, a scalar multiple of the
/// identity.
pub fn invariant_operator(
    rep: &ModuleRep,
    m: u32,
    mode: ExecMode,
) -> Result<SparseMatrix, CharError> {
    chain(rep, m, mode).map(|(op, _)| op)
}

pub fn invariant_scalar(rep: &ModuleRep, m: u32, mode: ExecMode) -> Result<Rat, CharError> {
    invariant_scalars(rep, m, mode).map(|mut v| v.pop().expect("m >= 1 yields a scalar"))
}

fn chain(
    rep: &ModuleRep,
    m_max: u32,
    mode: ExecMode,
) -> Result<(SparseMatrix, Vec<Rat>), CharError> {
    assert!(m_max >= 1, "invariant orders start at 1");
    let a = char_matrix(rep);
    let d = rep.dim();
    let n = Rat::from_int(rep.n() as i64);
    let mut pow = a.clone();
    let mut prev = Rat::zero();
    let mut scalars = Vec::with_capacity(m_max as usize);
    let mut op = SparseMatrix::new(d, d);
    for m in 1..=m_max {
        let mut traced = pow.block_trace();
        let shift = -(&n * &prev);
        if !shift.is_zero() {
            for r in 0..d {
                traced.add_to(r, r, &shift);
            }
        }
        let scalar = traced
            .scalar_identity_value()
            .ok_or_else(|| CharError::NotScalar {
                lambda: rep.lambda().to_string(),
                n: rep.n(),
                m,
            })?;
        prev = scalar.clone();
        scalars.push(scalar);
        op = traced;
        if m < m_max {
            pow = pow.compose(&a, mode);
        }
    }
    Ok((op, scalars))
}

/// The raw block trace `sum_i (A^m)_i^i` without the rank correction: the
/// order-m invariant of the finite algebra at the module's own rank. Central,
/// hence again scalar on the module.
pub fn glk_trace_operator(rep: &ModuleRep, m: u32, mode: ExecMode) -> SparseMatrix {
    op_power(&char_matrix(rep), m, mode).block_trace()
}

/// Index quadruples (k, l, i, j) for the commutator check: exhaustive up to
/// rank 3, seeded samples above that.
pub fn prop1_sample(n: usize, seed: u64) -> Vec<(usize, usize, usize, usize)> {
    if n <= 3 {
        let mut all = Vec::with_capacity(n.pow(4));
        for k in 1..=n {
            for l in 1..=n {
                for i in 1..=n {
                    for j in 1..=n {
                        all.push((k, l, i, j));
                    }
                }
            }
        }
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..96)
        .map(|_| {
            (
                rng.gen_range(1..=n),
                rng.gen_range(1..=n),
                rng.gen_range(1..=n),
                rng.gen_range(1..=n),
            )
        })
        .collect()
}

/// Checks `[e_kl, (A^m)_i^j] = delta_jl (A^m)_i^k - delta_ik (A^m)_l^j` on
/// the given index quadruples (all 1-based).
pub fn verify_prop1(
    rep: &ModuleRep,
    m: u32,
    samples: &[(usize, usize, usize, usize)],
    mode: ExecMode,
) -> Result<bool, CharError> {
    let pw = op_power(&char_matrix(rep), m, mode);
    for &(k, l, i, j) in samples {
        let e_kl = rep.try_gen(k, l)?;
        rep.try_gen(i, j)?;
        let b_ij = pw.block_or_zero(i - 1, j - 1);
        let lhs = SparseMatrix::commutator(e_kl, &b_ij)?;
        let mut rhs = SparseMatrix::new(rep.dim(), rep.dim());
        if j == l {
            rhs.add_assign_scaled(&pw.block_or_zero(i - 1, k - 1), &Rat::one())?;
        }
        if i == k {
            rhs.add_assign_scaled(&pw.block_or_zero(l - 1, j - 1), &Rat::from_int(-1))?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `(A^m)_i^i` acts as the order-(m-1) eigenvalue on every basis
/// vector whose weight support stays below i. This is the stabilization that
/// makes the trace of `A^m - I_(m-1)` finite.
pub fn verify_prop2(rep: &ModuleRep, m: u32, mode: ExecMode) -> Result<bool, CharError> {
    assert!(m >= 2, "orders below 2 say nothing here");
    let n = rep.n();
    let pw = op_power(&char_matrix(rep), m, mode);
    let chi = casimir_eigenvalue_closed(rep.lambda(), m - 1);
    for i in 1..=n {
        let diag = pw.block_or_zero(i - 1, i - 1);
        for v in 0..rep.dim() {
            if rep.weight_of(v).support() >= i {
                continue;
            }
            let col = diag.column(v);
            for (row, val) in col.iter().enumerate() {
                let ok = if row == v { *val == chi } else { val.is_zero() };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
