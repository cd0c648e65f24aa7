//! Polynomial identities for the characteristic matrix and the split
//! Casimir: exact annihilation certificates with per-factor kernel growth.

use std::collections::BTreeMap;

use crate::exact::{rank_dense, Rat, SparseMatrix};
use crate::gt::{build_module, ModuleRep};
use crate::par::ExecMode;
use crate::tensor::{lr_decompose, module_distinct_weights};
use crate::weights::{HighestWeight, Weight};

use super::block::{char_matrix, split_casimir, BlockOperator};
use super::{CharError, IdentityCertificate};

/// The full root list `lambda_i + 1 - i` for `i = 1 ..= depth + 1`.
pub fn theorem5_roots(lambda: &HighestWeight) -> Vec<Rat> {
    lambda
        .alpha_roots(lambda.depth() + 1)
        .expect("depth + 1 rows always fit")
        .into_iter()
        .map(Rat::from_int)
        .collect()
}

/// Roots for the split Casimir on `V(lambda) (x) V(mu)` at rank `n`: one per
/// distinct weight w of the rank-n module of lambda,
/// `(w, w + 2 rho)/2 + (w, mu) - (lambda, lambda + 2 rho)/2`.
pub fn theorem6_full_roots(lambda: &HighestWeight, mu: &HighestWeight, n: usize) -> Vec<Rat> {
    let c2_lambda = lambda.c2();
    module_distinct_weights(n, lambda)
        .iter()
        .map(|w| split_root(w, mu, c2_lambda))
        .collect()
}

fn split_root(w: &Weight, mu: &HighestWeight, c2_lambda: i64) -> Rat {
    let raw = w.c2() + 2 * w.dot(mu.weight()) - c2_lambda;
    Rat::new(raw, 2)
}

/// Roots of the reduced identity: one per summand of the tensor-product
/// decomposition, `[(nu, nu + 2 rho) - (lambda, ...) - (mu, ...)]/2`. A
/// sub-multiset of the full root list.
pub fn reduced_identity_roots(lambda: &HighestWeight, mu: &HighestWeight) -> Vec<Rat> {
    let base = lambda.c2() + mu.c2();
    lr_decompose(lambda, mu)
        .summands
        .iter()
        .map(|(nu, _)| Rat::new(nu.c2() - base, 2))
        .collect()
}

/// Reduced roots for the two-block family `(p, .., p, q, .., q)` with k
/// copies of p and l of q: `[p, q - k, -(k + l)]`. Only the dominant case
/// `p > q > 0` makes sense; anything else is rejected.
pub fn reduced_family_pq(
    p: i64,
    q: i64,
    k: usize,
    l: usize,
) -> Result<(HighestWeight, Vec<Rat>), CharError> {
    if !(p > q && q > 0 && k >= 1 && l >= 1) {
        return Err(CharError::FamilyCondition { p, q, k, l });
    }
    let mut parts = vec![p; k];
    parts.extend(std::iter::repeat_n(q, l));
    let lambda = HighestWeight::new(parts).expect("p > q > 0 is dominant");
    let roots = vec![
        Rat::from_int(p),
        Rat::from_int(q - k as i64),
        Rat::from_int(-((k + l) as i64)),
    ];
    Ok((lambda, roots))
}

/// Weight of each flattened index of `C^n (x) V_n(lambda)`.
fn char_groups(rep: &ModuleRep) -> BTreeMap<Weight, Vec<usize>> {
    let d = rep.dim();
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for b in 0..rep.n() {
        let outer = Weight::zero().plus_epsilon(b + 1);
        for r in 0..d {
            let w = outer.add(rep.weight_of(r));
            groups.entry(w).or_default().push(b * d + r);
        }
    }
    groups
}

/// Weight of each flattened index of `V(lambda) (x) V(mu)`.
fn split_groups(left: &ModuleRep, right: &ModuleRep) -> BTreeMap<Weight, Vec<usize>> {
    let d = right.dim();
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for a in 0..left.dim() {
        for b in 0..d {
            let w = left.weight_of(a).add(right.weight_of(b));
            groups.entry(w).or_default().push(a * d + b);
        }
    }
    groups
}

/// Kernel dimension of a weight-preserving operator, computed one weight
/// space at a time. Any entry crossing weight spaces is a hard error: the
/// operators here are built from weight-zero sums, so the grading must hold.
fn graded_kernel_dim(
    flat: &SparseMatrix,
    groups: &BTreeMap<Weight, Vec<usize>>,
) -> Result<usize, CharError> {
    let total = flat.rows();
    let mut loc = vec![usize::MAX; total];
    let sizes: Vec<usize> = groups.values().map(Vec::len).collect();
    let mut pos = vec![0usize; total];
    for (gi, idxs) in groups.values().enumerate() {
        for (p, &t) in idxs.iter().enumerate() {
            loc[t] = gi;
            pos[t] = p;
        }
    }
    debug_assert!(loc.iter().all(|&g| g != usize::MAX), "grading covers all indices");
    let mut dense: Vec<Vec<Vec<Rat>>> = sizes
        .iter()
        .map(|&s| vec![vec![Rat::zero(); s]; s])
        .collect();
    for (r, c, v) in flat.iter() {
        if loc[r] != loc[c] {
            return Err(CharError::GradingViolation { row: r, col: c });
        }
        dense[loc[r]][pos[r]][pos[c]] = v.clone();
    }
    let mut kernel = 0;
    for d in dense {
        let s = d.len();
        kernel += s - rank_dense(d);
    }
    Ok(kernel)
}

/// Multiplies out `prod (a - root)` left to right, recording the kernel
/// dimension after each factor. Returns whether the final product vanishes.
fn certify(
    a: &BlockOperator,
    roots: &[Rat],
    groups: &BTreeMap<Weight, Vec<usize>>,
    mode: ExecMode,
) -> Result<(bool, Vec<usize>), CharError> {
    let mut product = BlockOperator::identity(a.outer_dim(), a.inner_dim());
    let mut kernels = Vec::with_capacity(roots.len());
    for root in roots {
        product = product.compose(&a.sub_scalar(root), mode);
        kernels.push(graded_kernel_dim(&product.flatten(), groups)?);
    }
    let zero = product.is_zero();
    if !roots.is_empty() {
        debug_assert_eq!(
            zero,
            kernels.last() == Some(&a.total_dim()),
            "kernel accounting must agree with the residual"
        );
    }
    Ok((zero, kernels))
}

/// For each root, whether dropping that factor leaves a nonzero residual.
/// A `false` entry is a degenerate coincidence worth surfacing.
pub fn root_minimality(a: &BlockOperator, roots: &[Rat], mode: ExecMode) -> Vec<bool> {
    (0..roots.len())
        .map(|skip| {
            let mut product = BlockOperator::identity(a.outer_dim(), a.inner_dim());
            for (t, root) in roots.iter().enumerate() {
                if t != skip {
                    product = product.compose(&a.sub_scalar(root), mode);
                }
            }
            !product.is_zero()
        })
        .collect()
}

fn certificate_for(
    lambda: &HighestWeight,
    mu: Option<&HighestWeight>,
    n: usize,
    a: &BlockOperator,
    roots: Vec<Rat>,
    groups: &BTreeMap<Weight, Vec<usize>>,
    mode: ExecMode,
) -> Result<IdentityCertificate, CharError> {
    let (zero, kernels) = certify(a, &roots, groups, mode)?;
    if !zero {
        return Err(CharError::IdentityViolation {
            lambda: lambda.to_string(),
            mu: mu.map(ToString::to_string),
            n,
        });
    }
    Ok(IdentityCertificate {
        lambda: lambda.clone(),
        mu: mu.cloned(),
        n,
        roots,
        residual_zero: true,
        kernel_dims: kernels,
    })
}

/// Verifies `prod_{i=1}^{k+1} (A - alpha_i) = 0` on `C^n (x) V_n(lambda)`
/// at the given rank. The root list does not depend on n, so certificates
/// at different ranks must agree.
pub fn verify_theorem5_at(
    lambda: &HighestWeight,
    n: usize,
    mode: ExecMode,
) -> Result<IdentityCertificate, CharError> {
    let k = lambda.depth();
    if n < k + 1 {
        return Err(CharError::RankTooSmall { n, needed: k + 1 });
    }
    let rep = build_module(n, lambda)?;
    let a = char_matrix(&rep);
    if k == 0 && !a.is_zero() {
        // Degenerate case: the trivial module must kill A outright.
        return Err(CharError::IdentityViolation {
            lambda: lambda.to_string(),
            mu: None,
            n,
        });
    }
    let groups = char_groups(&rep);
    certificate_for(lambda, None, n, &a, theorem5_roots(lambda), &groups, mode)
}

/// The characteristic identity at its natural rank, one past the depth.
pub fn verify_theorem5(lambda: &HighestWeight) -> Result<IdentityCertificate, CharError> {
    verify_theorem5_at(lambda, lambda.depth() + 1, ExecMode::default())
}

/// The reduced identity: only roots whose box-added weight stays dominant,
/// equivalently one root per summand of `V(box) (x) V(lambda)`.
pub fn verify_theorem5_reduced(
    lambda: &HighestWeight,
    mode: ExecMode,
) -> Result<IdentityCertificate, CharError> {
    let n = lambda.depth() + 1;
    let rep = build_module(n, lambda)?;
    let a = char_matrix(&rep);
    let one_box = HighestWeight::new(vec![1]).expect("single box is dominant");
    let roots = reduced_identity_roots(&one_box, lambda);
    let groups = char_groups(&rep);
    certificate_for(lambda, None, n, &a, roots, &groups, mode)
}

/// Verifies the split-Casimir identity on `V(lambda) (x) V(mu)` at rank `n`
/// with one root per distinct weight of the lambda module.
pub fn verify_theorem6_at(
    lambda: &HighestWeight,
    mu: &HighestWeight,
    n: usize,
    mode: ExecMode,
) -> Result<IdentityCertificate, CharError> {
    let left = build_module(n, lambda)?;
    let right = build_module(n, mu)?;
    let a = split_casimir(&left, &right, mode)?;
    let groups = split_groups(&left, &right);
    let roots = theorem6_full_roots(lambda, mu, n);
    certificate_for(lambda, Some(mu), n, &a, roots, &groups, mode)
}

/// The split-Casimir identity at its natural rank, the sum of both depths.
pub fn verify_theorem6(
    lambda: &HighestWeight,
    mu: &HighestWeight,
) -> Result<IdentityCertificate, CharError> {
    verify_theorem6_at(lambda, mu, lambda.depth() + mu.depth(), ExecMode::default())
}

/// The reduced split-Casimir identity: roots only for summands that occur.
pub fn verify_theorem6_reduced(
    lambda: &HighestWeight,
    mu: &HighestWeight,
    mode: ExecMode,
) -> Result<IdentityCertificate, CharError> {
    let n = lambda.depth() + mu.depth();
    let left = build_module(n, lambda)?;
    let right = build_module(n, mu)?;
    let a = split_casimir(&left, &right, mode)?;
    let groups = split_groups(&left, &right);
    let roots = reduced_identity_roots(lambda, mu);
    certificate_for(lambda, Some(mu), n, &a, roots, &groups, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmat::op_power;

    fn hw(parts: &[i64]) -> HighestWeight {
        HighestWeight::new(parts.to_vec()).unwrap()
    }

    fn rats(vals: &[i64]) -> Vec<Rat> {
        vals.iter().copied().map(Rat::from_int).collect()
    }

    #[test]
    fn box_identity_at_rank_two() {
        let cert = verify_theorem5(&hw(&[1])).unwrap();
        assert_eq!(cert.n, 2);
        assert_eq!(cert.roots, rats(&[1, -1]));
        assert!(cert.residual_zero);
        assert_eq!(cert.kernel_dims, vec![3, 4]);
    }

    #[test]
    fn antisymmetric_square_identity_and_kernels() {
        let cert = verify_theorem5(&hw(&[1, 1])).unwrap();
        assert_eq!(cert.n, 3);
        assert_eq!(cert.roots, rats(&[1, 0, -2]));
        // One summand per eigenvalue 1 and -2; the root 0 contributes no
        // kernel growth at all.
        assert_eq!(cert.kernel_dims, vec![8, 8, 9]);
    }

    #[test]
    fn roots_do_not_depend_on_the_rank() {
        for parts in [vec![1], vec![2, 1]] {
            let lam = hw(&parts);
            let k = lam.depth();
            let low = verify_theorem5_at(&lam, k + 1, ExecMode::Sequential).unwrap();
            let high = verify_theorem5_at(&lam, k + 2, ExecMode::Sequential).unwrap();
            assert_eq!(low.roots, high.roots);
            assert!(low.residual_zero && high.residual_zero);
        }
    }

    #[test]
    fn trivial_weight_certificate_degenerates_cleanly() {
        let cert = verify_theorem5(&HighestWeight::zero()).unwrap();
        assert_eq!(cert.roots, rats(&[0]));
        assert_eq!(cert.kernel_dims, vec![1]);
    }

    #[test]
    fn rank_below_depth_plus_one_is_rejected() {
        assert!(matches!(
            verify_theorem5_at(&hw(&[2, 1]), 2, ExecMode::Sequential),
            Err(CharError::RankTooSmall { n: 2, needed: 3 })
        ));
    }

    #[test]
    fn reduced_identity_drops_only_non_dominant_roots() {
        // (1,1): adding a box in row 2 is not dominant, so the reduced
        // identity keeps 1 and -2 only.
        let cert = verify_theorem5_reduced(&hw(&[1, 1]), ExecMode::Sequential).unwrap();
        assert_eq!(cert.roots, rats(&[1, -2]));
        assert_eq!(cert.kernel_dims, vec![8, 9]);
    }

    #[test]
    fn row_weight_reduced_identity_coincides_with_the_full_one() {
        // Single-row weights keep every root: both box additions stay
        // dominant.
        for c in [1i64, 2, 3] {
            let lam = hw(&[c]);
            let full = theorem5_roots(&lam);
            let reduced = reduced_identity_roots(&hw(&[1]), &lam);
            assert_eq!(full, reduced, "c = {c}");
            assert_eq!(reduced, rats(&[c, -1]));
            let cert = verify_theorem5_reduced(&lam, ExecMode::Sequential).unwrap();
            assert!(cert.residual_zero);
        }
    }

    #[test]
    fn column_weight_reduced_roots() {
        for k in [1usize, 2, 3] {
            let lam = hw(&vec![1; k]);
            let reduced = reduced_identity_roots(&hw(&[1]), &lam);
            assert_eq!(reduced, rats(&[1, -(k as i64)]), "k = {k}");
        }
    }

    #[test]
    fn two_block_family_roots() {
        let (lam, roots) = reduced_family_pq(2, 1, 1, 1).unwrap();
        assert_eq!(lam, hw(&[2, 1]));
        assert_eq!(roots, rats(&[2, 0, -2]));
        assert_eq!(roots, reduced_identity_roots(&hw(&[1]), &lam));

        let (lam, roots) = reduced_family_pq(3, 1, 1, 1).unwrap();
        assert_eq!(lam, hw(&[3, 1]));
        assert_eq!(roots, rats(&[3, 0, -2]));
        assert_eq!(roots, reduced_identity_roots(&hw(&[1]), &lam));

        let (lam, roots) = reduced_family_pq(3, 2, 2, 1).unwrap();
        assert_eq!(lam, hw(&[3, 3, 2]));
        assert_eq!(roots, rats(&[3, 0, -3]));
        assert_eq!(roots, reduced_identity_roots(&hw(&[1]), &lam));
    }

    #[test]
    fn two_block_family_rejects_the_impossible_reading() {
        for (p, q, k, l) in [(1, 2, 1, 1), (2, 2, 1, 1), (2, 0, 1, 1), (2, 1, 0, 1)] {
            assert!(
                matches!(
                    reduced_family_pq(p, q, k, l),
                    Err(CharError::FamilyCondition { .. })
                ),
                "p={p} q={q} k={k} l={l}"
            );
        }
    }

    #[test]
    fn split_identity_for_box_against_a_hook() {
        let cert = verify_theorem6(&hw(&[1]), &hw(&[2, 1])).unwrap();
        assert_eq!(cert.n, 3);
        assert_eq!(cert.roots, rats(&[2, 0, -2]));
        assert!(cert.residual_zero);
        assert_eq!(cert.mu, Some(hw(&[2, 1])));
    }

    #[test]
    fn split_identity_for_antisymmetric_square_against_a_box() {
        let cert = verify_theorem6(&hw(&[1, 1]), &hw(&[1])).unwrap();
        assert_eq!(cert.n, 3);
        assert_eq!(cert.roots, rats(&[1, 0, -2]));
        let reduced = verify_theorem6_reduced(&hw(&[1, 1]), &hw(&[1]), ExecMode::Sequential)
            .unwrap();
        assert_eq!(reduced.roots, rats(&[1, -2]));
        assert!(reduced.residual_zero);
    }

    #[test]
    fn split_identity_against_a_row() {
        let cert = verify_theorem6(&hw(&[1, 1]), &hw(&[2])).unwrap();
        assert_eq!(cert.roots, rats(&[2, 1, -2]));
        let reduced =
            verify_theorem6_reduced(&hw(&[1, 1]), &hw(&[2]), ExecMode::Sequential).unwrap();
        assert_eq!(reduced.roots, rats(&[2, -2]));
    }

    #[test]
    fn split_identity_trivial_pair() {
        let cert = verify_theorem6(&HighestWeight::zero(), &HighestWeight::zero()).unwrap();
        assert_eq!(cert.n, 0);
        assert_eq!(cert.roots, rats(&[0]));
        assert!(cert.residual_zero);
    }

    #[test]
    fn reduced_roots_are_a_subset_of_the_full_roots() {
        let pairs = [
            (vec![1], vec![2, 1]),
            (vec![1, 1], vec![1]),
            (vec![1, 1], vec![2]),
        ];
        for (a, b) in pairs {
            let lam = hw(&a);
            let mu = hw(&b);
            let n = lam.depth() + mu.depth();
            let full = theorem6_full_roots(&lam, &mu, n);
            let reduced = reduced_identity_roots(&lam, &mu);
            for r in &reduced {
                let have = full.iter().filter(|x| *x == r).count();
                let need = reduced.iter().filter(|x| *x == r).count();
                assert!(have >= need, "root {r} under-represented");
            }
        }
    }

    #[test]
    fn every_reduced_root_is_needed() {
        let rep = build_module(3, &hw(&[1, 1])).unwrap();
        let a = char_matrix(&rep);
        let reduced = reduced_identity_roots(&hw(&[1]), &hw(&[1, 1]));
        assert_eq!(
            root_minimality(&a, &reduced, ExecMode::Sequential),
            vec![true, true]
        );
        // The full list carries the non-dominant root 0, which is not
        // needed: dropping it still annihilates.
        let full = theorem5_roots(&hw(&[1, 1]));
        assert_eq!(
            root_minimality(&a, &full, ExecMode::Sequential),
            vec![true, false, true]
        );
    }

    #[test]
    fn certificates_serialize_with_fixed_field_names() {
        let cert = verify_theorem5(&hw(&[1, 1])).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "lambda": [1, 1],
                "mu": null,
                "n": 3,
                "roots": ["1", "0", "-2"],
                "residual_zero": true,
                "kernel_dims": [8, 8, 9],
            })
        );
    }

    #[test]
    fn violation_reports_as_an_error() {
        // Wrong roots must refuse to certify.
        let rep = build_module(2, &hw(&[1])).unwrap();
        let a = char_matrix(&rep);
        let groups = super::char_groups(&rep);
        let bad = certificate_for(
            &hw(&[1]),
            None,
            2,
            &a,
            rats(&[1, 1]),
            &groups,
            ExecMode::Sequential,
        );
        assert!(matches!(bad, Err(CharError::IdentityViolation { .. })));
    }

    #[test]
    fn kernel_accounting_is_graded() {
        // Rank factor by factor for the hook at rank 3: the partial products
        // must lose rank exactly as the summand dimensions dictate.
        let lam = hw(&[2, 1]);
        let rep = build_module(3, &lam).unwrap();
        let a = char_matrix(&rep);
        let groups = super::char_groups(&rep);
        let roots = theorem5_roots(&lam);
        let (zero, kernels) = certify(&a, &roots, &groups, ExecMode::Sequential).unwrap();
        assert!(zero);
        assert_eq!(kernels.len(), 3);
        assert_eq!(*kernels.last().unwrap(), a.total_dim());
        assert!(kernels.windows(2).all(|w| w[0] <= w[1]));
        // Cross-check one partial product against a dense kernel count.
        let first = op_power(&a.sub_scalar(&roots[0]), 1, ExecMode::Sequential);
        let flat = first.flatten();
        let dense: Vec<Vec<Rat>> = (0..flat.rows())
            .map(|i| (0..flat.cols()).map(|j| flat.get(i, j)).collect())
            .collect();
        assert_eq!(kernels[0], flat.rows() - rank_dense(dense));
    }
}
