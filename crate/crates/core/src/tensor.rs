//! Tensor product decompositions of highest-weight modules.
//!
//! Two independent routes compute the same decomposition:
//!
//! * `lr_decompose` counts lattice-word skew fillings (the classical
//!   combinatorial rule), which is rank-independent;
//! * `decompose_by_weights` convolves weight multiplicities of the two
//!   factors at a fixed rank and peels dominant leading terms.
//!
//! At any rank at least the combined depth the two agree, which is one of
//! the standing cross-checks in the test suite.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::gt::{enumerate_patterns, weyl_dim, GtPattern};
use crate::weights::{HighestWeight, Weight, WeightError};

/// Failure inside a tensor decomposition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("dominance peeling reached the non-dominant leading weight {0}")]
    NonDominantLead(String),
    #[error("dominance peeling drove the multiplicity of {0} negative")]
    NegativeMultiplicity(String),
    #[error("dimension audit at rank {n} failed: factors give {expected}, summands give {got}")]
    DimensionMismatch {
        n: usize,
        expected: BigInt,
        got: BigInt,
    },
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// A tensor product decomposition with multiplicities, summands in
/// descending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub lambda: HighestWeight,
    pub mu: HighestWeight,
    pub summands: Vec<(HighestWeight, u64)>,
}

impl Decomposition {
    pub fn multiplicity(&self, nu: &HighestWeight) -> u64 {
        self.summands
            .iter()
            .find(|(s, _)| s == nu)
            .map_or(0, |(_, c)| *c)
    }

    /// Total multiplicity-weighted dimension of the summands at rank `n`.
    pub fn total_dim_at(&self, n: usize) -> BigInt {
        self.summands
            .iter()
            .map(|(nu, c)| weyl_dim(n, nu) * BigInt::from(*c))
            .sum()
    }
}

/// Candidate summand shapes: partitions of the right size containing
/// `lambda`, depth at most the combined depth, descending lexicographic.
fn candidate_shapes(lambda: &HighestWeight, mu: &HighestWeight) -> Vec<HighestWeight> {
    let total = lambda.size() + mu.size();
    let maxd = lambda.depth() + mu.depth();
    fn rec(
        i: usize,
        remaining: i64,
        prev: i64,
        lambda: &HighestWeight,
        maxd: usize,
        cur: &mut Vec<i64>,
        out: &mut Vec<HighestWeight>,
    ) {
        if remaining == 0 {
            if lambda.part(i) == 0 {
                out.push(HighestWeight::new(cur.clone()).expect("partition by construction"));
            }
            return;
        }
        if i > maxd {
            return;
        }
        let lo = lambda.part(i).max(1);
        let hi = prev.min(remaining);
        for v in (lo..=hi).rev() {
            cur.push(v);
            rec(i + 1, remaining - v, v, lambda, maxd, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    // Row 1 of any valid filling holds only the smallest letter, so the
    // first part grows by at most mu_1.
    let cap1 = lambda.part(1) + mu.part(1);
    rec(1, total, cap1, lambda, maxd, &mut Vec::new(), &mut out);
    out
}

/// Number of lattice-word skew fillings of `nu / lambda` with content `mu`.
pub fn lr_coefficient(lambda: &HighestWeight, mu: &HighestWeight, nu: &HighestWeight) -> u64 {
    if !nu.contains(lambda) || nu.size() != lambda.size() + mu.size() {
        return 0;
    }
    if mu.is_zero() {
        return 1;
    }
    let m = mu.depth();
    // Cells in reverse reading order: rows top to bottom, right to left,
    // so the lattice condition is checkable as each letter is placed.
    let mut cells = Vec::new();
    for r in 1..=nu.depth() {
        for c in (lambda.part(r)..nu.part(r)).rev() {
            cells.push((r, c as usize));
        }
    }
    let width = nu.part(1) as usize;
    struct Filling<'a> {
        cells: Vec<(usize, usize)>,
        grid: Vec<Vec<usize>>,
        content: Vec<i64>,
        lambda: &'a HighestWeight,
        mu: &'a HighestWeight,
        nu: &'a HighestWeight,
        m: usize,
    }
    impl Filling<'_> {
        fn count(&mut self, idx: usize) -> u64 {
            let Some(&(r, c)) = self.cells.get(idx) else {
                return 1;
            };
            let mut total = 0;
            for v in 1..=self.m {
                if self.content[v] >= self.mu.part(v) {
                    continue;
                }
                if v >= 2 && self.content[v] >= self.content[v - 1] {
                    continue;
                }
                // Weak increase along the row: the right neighbour is already
                // placed whenever it lies in the skew part.
                if (c as i64) + 1 < self.nu.part(r) && v > self.grid[r][c + 1] {
                    continue;
                }
                // Strict increase down a column, against a skew cell above.
                if r >= 2 && (c as i64) >= self.lambda.part(r - 1) && v <= self.grid[r - 1][c] {
                    continue;
                }
                self.grid[r][c] = v;
                self.content[v] += 1;
                total += self.count(idx + 1);
                self.content[v] -= 1;
                self.grid[r][c] = 0;
            }
            total
        }
    }
    Filling {
        cells,
        grid: vec![vec![0usize; width]; nu.depth() + 1],
        content: vec![0i64; m + 1],
        lambda,
        mu,
        nu,
        m,
    }
    .count(0)
}

/// Full decomposition of `V(lambda) (x) V(mu)` by the combinatorial rule.
pub fn lr_decompose(lambda: &HighestWeight, mu: &HighestWeight) -> Decomposition {
    let summands = candidate_shapes(lambda, mu)
        .into_iter()
        .filter_map(|nu| {
            let c = lr_coefficient(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect();
    Decomposition {
        lambda: lambda.clone(),
        mu: mu.clone(),
        summands,
    }
}

/// Summands of `V(lambda) (x) V(box)`: one box added in every row that
/// stays dominant, in descending lexicographic order. Cross-checked against
/// the general rule in the tests.
pub fn pieri_row(lambda: &HighestWeight) -> Vec<HighestWeight> {
    (1..=lambda.depth() + 1)
        .filter_map(|i| {
            let w = lambda.weight().plus_epsilon(i);
            HighestWeight::new(w.components().to_vec()).ok()
        })
        .collect()
}

/// `pieri_row` packaged as a decomposition of `V(box) (x) V(lambda)`, equal
/// to `lr_decompose(box, lambda)` including summand order.
pub fn pieri_vector(lambda: &HighestWeight) -> Decomposition {
    let one_box = HighestWeight::new(vec![1]).expect("single box is dominant");
    Decomposition {
        lambda: one_box,
        mu: lambda.clone(),
        summands: pieri_row(lambda).into_iter().map(|nu| (nu, 1)).collect(),
    }
}

/// Weight multiplicities of the rank-`n` module.
fn weight_multiplicities(n: usize, lambda: &HighestWeight) -> BTreeMap<Weight, i64> {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for p in enumerate_patterns(n, lambda) {
        *out.entry(p.weight()).or_insert(0) += 1;
    }
    out
}

/// Decomposes the tensor product at rank `n` by convolving weight
/// multiplicities and peeling dominant leading terms. Agrees with
/// `lr_decompose` whenever `n` is at least the combined depth.
pub fn decompose_by_weights(
    lambda: &HighestWeight,
    mu: &HighestWeight,
    n: usize,
) -> Result<Vec<(HighestWeight, u64)>, TensorError> {
    if n < lambda.depth() {
        return Err(WeightError::TruncationTooSmall {
            needed: lambda.depth(),
            got: n,
        }
        .into());
    }
    if n < mu.depth() {
        return Err(WeightError::TruncationTooSmall {
            needed: mu.depth(),
            got: n,
        }
        .into());
    }
    let left = weight_multiplicities(n, lambda);
    let right = weight_multiplicities(n, mu);
    let mut conv: BTreeMap<Weight, i64> = BTreeMap::new();
    for (wl, cl) in &left {
        for (wr, cr) in &right {
            *conv.entry(wl.add(wr)).or_insert(0) += cl * cr;
        }
    }
    fn leading(conv: &BTreeMap<Weight, i64>) -> Option<(Weight, i64)> {
        conv.iter()
            .rev()
            .find(|(_, &c)| c != 0)
            .map(|(w, &c)| (w.clone(), c))
    }
    let mut cache: HashMap<HighestWeight, BTreeMap<Weight, i64>> = HashMap::new();
    let mut out = Vec::new();
    while let Some((w, c)) = leading(&conv) {
        if c < 0 {
            return Err(TensorError::NegativeMultiplicity(w.to_string()));
        }
        if !w.is_partition() {
            return Err(TensorError::NonDominantLead(w.to_string()));
        }
        let nu = HighestWeight::new(w.components().to_vec()).expect("dominant by check");
        let table = cache
            .entry(nu.clone())
            .or_insert_with(|| weight_multiplicities(n, &nu));
        for (wn, cn) in table.iter() {
            *conv.entry(wn.clone()).or_insert(0) -= c * cn;
        }
        out.push((nu, c as u64));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(out)
}

/// Checks that the rank-`n` and rank-`n + 1` peelings both reproduce the
/// rank-independent decomposition, at the first stable rank.
pub fn stability_check(lambda: &HighestWeight, mu: &HighestWeight) -> Result<bool, TensorError> {
    let stable = lr_decompose(lambda, mu).summands;
    let n0 = lambda.depth() + mu.depth();
    Ok(decompose_by_weights(lambda, mu, n0)? == stable
        && decompose_by_weights(lambda, mu, n0 + 1)? == stable)
}

/// Verifies that summand dimensions add up to the product of the factor
/// dimensions at rank `n` (which must be at least the combined depth).
pub fn dimension_audit(d: &Decomposition, n: usize) -> Result<(), TensorError> {
    let needed = d.lambda.depth() + d.mu.depth();
    if n < needed {
        return Err(WeightError::TruncationTooSmall { needed, got: n }.into());
    }
    let expected = weyl_dim(n, &d.lambda) * weyl_dim(n, &d.mu);
    let got = d.total_dim_at(n);
    if expected != got {
        return Err(TensorError::DimensionMismatch { n, expected, got });
    }
    Ok(())
}

/// Distinct weights of a weight list, descending lexicographic.
pub fn distinct_weights(weights: &[Weight]) -> Vec<Weight> {
    let mut out: Vec<Weight> = weights.to_vec();
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

/// Distinct weights of the rank-`n` module for `lambda`.
pub fn module_distinct_weights(n: usize, lambda: &HighestWeight) -> Vec<Weight> {
    let weights: Vec<Weight> = enumerate_patterns(n, lambda)
        .iter()
        .map(GtPattern::weight)
        .collect();
    distinct_weights(&weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hw(parts: &[i64]) -> HighestWeight {
        HighestWeight::new(parts.to_vec()).unwrap()
    }

    fn pairs(list: &[(&[i64], u64)]) -> Vec<(HighestWeight, u64)> {
        list.iter().map(|(p, c)| (hw(p), *c)).collect()
    }

    #[test]
    fn box_squared() {
        let d = lr_decompose(&hw(&[1]), &hw(&[1]));
        assert_eq!(d.summands, pairs(&[(&[2], 1), (&[1, 1], 1)]));
    }

    #[test]
    fn antisymmetric_squares() {
        let d = lr_decompose(&hw(&[1, 1]), &hw(&[1, 1]));
        assert_eq!(
            d.summands,
            pairs(&[(&[2, 2], 1), (&[2, 1, 1], 1), (&[1, 1, 1, 1], 1)])
        );
        assert_eq!(d.multiplicity(&hw(&[3, 1])), 0);
        dimension_audit(&d, 4).unwrap();
        // 6 * 6 = 20 + 15 + 1 at rank 4.
        assert_eq!(d.total_dim_at(4), BigInt::from(36));
    }

    #[test]
    fn hook_times_hook_has_multiplicity_two() {
        assert_eq!(lr_coefficient(&hw(&[2, 1]), &hw(&[2, 1]), &hw(&[3, 2, 1])), 2);
        let d = lr_decompose(&hw(&[2, 1]), &hw(&[2, 1]));
        assert_eq!(d.multiplicity(&hw(&[3, 2, 1])), 2);
        dimension_audit(&d, 4).unwrap();
        dimension_audit(&d, 5).unwrap();
    }

    #[test]
    fn pieri_agrees_with_the_general_rule() {
        for parts in [vec![], vec![1], vec![2], vec![2, 1], vec![3, 1, 1], vec![2, 2]] {
            let lam = HighestWeight::new(parts).unwrap();
            let via_rule = lr_decompose(&lam, &hw(&[1]));
            assert!(via_rule.summands.iter().all(|(_, c)| *c == 1));
            let mut from_rule: Vec<HighestWeight> =
                via_rule.summands.iter().map(|(nu, _)| nu.clone()).collect();
            from_rule.sort();
            let mut pieri = pieri_row(&lam);
            pieri.sort();
            assert_eq!(pieri, from_rule, "lambda = {lam}");
            assert_eq!(pieri_vector(&lam), lr_decompose(&hw(&[1]), &lam));
        }
    }

    #[test]
    fn convolution_oracle_agrees() {
        let shapes = [vec![1], vec![2], vec![1, 1], vec![2, 1]];
        for a in &shapes {
            for b in &shapes {
                let lam = HighestWeight::new(a.clone()).unwrap();
                let mu = HighestWeight::new(b.clone()).unwrap();
                let stable = lr_decompose(&lam, &mu).summands;
                let n = lam.depth() + mu.depth();
                let peeled = decompose_by_weights(&lam, &mu, n).unwrap();
                assert_eq!(peeled, stable, "{lam} (x) {mu}");
                assert!(stability_check(&lam, &mu).unwrap(), "{lam} (x) {mu}");
            }
        }
    }

    #[test]
    fn trivial_factors() {
        let d = lr_decompose(&hw(&[]), &hw(&[]));
        assert_eq!(d.summands, pairs(&[(&[], 1)]));
        let d = lr_decompose(&hw(&[2, 1]), &hw(&[]));
        assert_eq!(d.summands, pairs(&[(&[2, 1], 1)]));
        assert!(stability_check(&hw(&[]), &hw(&[])).unwrap());
    }

    #[test]
    fn distinct_weight_listing() {
        let ws = module_distinct_weights(2, &hw(&[2]));
        assert_eq!(
            ws,
            vec![
                Weight::new(vec![2]),
                Weight::new(vec![1, 1]),
                Weight::new(vec![0, 2]),
            ]
        );
    }

    #[test]
    fn truncation_guard() {
        assert!(matches!(
            decompose_by_weights(&hw(&[1, 1]), &hw(&[1]), 1),
            Err(TensorError::Weight(_))
        ));
        assert!(matches!(
            dimension_audit(&lr_decompose(&hw(&[1, 1]), &hw(&[1])), 2),
            Err(TensorError::Weight(_))
        ));
    }

    fn arb_small_partition() -> impl Strategy<Value = HighestWeight> {
        proptest::collection::vec(0i64..=3, 0..=2).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            HighestWeight::new(v).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rule_is_commutative(a in arb_small_partition(), b in arb_small_partition()) {
            let ab = lr_decompose(&a, &b).summands;
            let ba = lr_decompose(&b, &a).summands;
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn summand_sizes_are_consistent(a in arb_small_partition(), b in arb_small_partition()) {
            let d = lr_decompose(&a, &b);
            prop_assert!(!d.summands.is_empty());
            for (nu, c) in &d.summands {
                prop_assert!(*c >= 1);
                prop_assert_eq!(nu.size(), a.size() + b.size());
                prop_assert!(nu.contains(&a));
                prop_assert!(nu.contains(&b));
            }
        }

        #[test]
        fn peeling_matches_the_rule(a in arb_small_partition(), b in arb_small_partition()) {
            let n = a.depth() + b.depth();
            prop_assert_eq!(
                decompose_by_weights(&a, &b, n).unwrap(),
                lr_decompose(&a, &b).summands
            );
        }
    }
}
