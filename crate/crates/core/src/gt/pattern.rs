//! Triangular interlacing patterns indexing module bases.
//!
//! A pattern for rank `n` has rows of lengths 1..=n, stored bottom-up:
//! `rows[k-1]` is row `k`. Row `n` is the highest weight padded to length
//! `n`, and adjacent rows interlace,
//! `row[k+1][i] >= row[k][i] >= row[k+1][i+1]`.
//!
//! Enumeration returns patterns in descending lexicographic order of the
//! top-down flattening, so the highest pattern (every row the padded highest
//! weight) always sits at index 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::weights::{HighestWeight, Weight};

/// One interlacing pattern; rows bottom-up, row `k` has length `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GtPattern {
    rows: Vec<Vec<i64>>,
}

impl GtPattern {
    /// Wraps explicit rows (bottom-up). Panics if the row lengths are not
    /// 1..=n; interlacing is the caller's concern, checked via `is_valid`.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        for (idx, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), idx + 1, "row {} must have length {}", idx + 1, idx + 1);
        }
        GtPattern { rows }
    }

    /// The pattern with every row equal to the padded highest weight.
    pub fn highest(n: usize, lambda: &HighestWeight) -> Self {
        assert!(lambda.depth() <= n, "weight does not fit the rank");
        let rows = (1..=n)
            .map(|k| (1..=k).map(|i| lambda.part(i)).collect())
            .collect();
        GtPattern { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row `k`, 1-based.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.rows[k - 1]
    }

    /// Entry `(k, i)`, both 1-based.
    pub fn entry(&self, k: usize, i: usize) -> i64 {
        self.rows[k - 1][i - 1]
    }

    /// The shifted entry `l(k, i) = entry(k, i) - i` controlling all the
    /// transition coefficients.
    pub fn l_value(&self, k: usize, i: usize) -> i64 {
        self.entry(k, i) - i as i64
    }

    /// Checks the interlacing inequalities.
    pub fn is_valid(&self) -> bool {
        for k in 1..self.rank() {
            let lower = &self.rows[k - 1];
            let upper = &self.rows[k];
            for i in 0..k {
                if !(upper[i] >= lower[i] && lower[i] >= upper[i + 1]) {
                    return false;
                }
            }
        }
        true
    }

    /// Weight of the pattern: component `k` is the difference between the
    /// sums of rows `k` and `k - 1`.
    pub fn weight(&self) -> Weight {
        let mut prev = 0i64;
        let comps = self
            .rows
            .iter()
            .map(|row| {
                let s: i64 = row.iter().sum();
                let c = s - prev;
                prev = s;
                c
            })
            .collect();
        Weight::new(comps)
    }

    /// Copy with entry `(k, i)` shifted by `delta`; validity not rechecked.
    pub fn bumped(&self, k: usize, i: usize, delta: i64) -> GtPattern {
        let mut rows = self.rows.clone();
        rows[k - 1][i - 1] += delta;
        GtPattern { rows }
    }

    /// Rows concatenated top row first; the basis is ordered by this key,
    /// descending.
    pub fn flatten_top_down(&self) -> Vec<i64> {
        self.rows.iter().rev().flatten().copied().collect()
    }
}

impl Serialize for GtPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(serializer)
    }
}

/// All rows of length `upper.len() - 1` interlacing `upper`, in descending
/// lexicographic order.
fn interlacing_rows(upper: &[i64]) -> Vec<Vec<i64>> {
    let k = upper.len() - 1;
    let mut out = Vec::new();
    let mut cur = vec![0i64; k];
    fn rec(pos: usize, upper: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in (upper[pos + 1]..=upper[pos]).rev() {
            cur[pos] = v;
            rec(pos + 1, upper, cur, out);
        }
    }
    rec(0, upper, &mut cur, &mut out);
    out
}

/// Every pattern with top row `lambda` padded to length `n`, descending in
/// the top-down flattening. Requires `lambda.depth() <= n`.
pub fn enumerate_patterns(n: usize, lambda: &HighestWeight) -> Vec<GtPattern> {
    assert!(lambda.depth() <= n, "weight does not fit the rank");
    if n == 0 {
        return vec![GtPattern { rows: Vec::new() }];
    }
    let top: Vec<i64> = (1..=n).map(|i| lambda.part(i)).collect();
    let mut out = Vec::new();
    let mut acc = vec![top];
    fn descend(acc: &mut Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
        if acc.last().expect("nonempty").len() == 1 {
            let rows = acc.iter().rev().cloned().collect();
            out.push(GtPattern { rows });
            return;
        }
        for row in interlacing_rows(acc.last().expect("nonempty")) {
            acc.push(row);
            descend(acc, out);
            acc.pop();
        }
    }
    descend(&mut acc, &mut out);
    out
}

/// Dimension of the rank-`n` module by the product formula, independently of
/// any pattern count.
pub fn weyl_dim(n: usize, lambda: &HighestWeight) -> BigInt {
    assert!(lambda.depth() <= n, "weight does not fit the rank");
    let l: Vec<i64> = (1..=n)
        .map(|i| lambda.part(i) + n as i64 - i as i64)
        .collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(l[i] - l[j]);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "dimension product must divide exactly");
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(parts: &[i64]) -> HighestWeight {
        HighestWeight::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_matches_dimension_formula() {
        for (n, parts) in [
            (0usize, vec![]),
            (1, vec![4]),
            (2, vec![2, 1]),
            (3, vec![1]),
            (3, vec![1, 1]),
            (3, vec![2, 1]),
            (4, vec![2, 2]),
            (4, vec![3, 1, 1]),
            (5, vec![3, 1, 1]),
        ] {
            let lam = hw(&parts);
            let pats = enumerate_patterns(n, &lam);
            assert_eq!(
                BigInt::from(pats.len()),
                weyl_dim(n, &lam),
                "n={n} lambda={lam}"
            );
            assert!(pats.iter().all(GtPattern::is_valid));
        }
    }

    #[test]
    fn dimension_values() {
        assert_eq!(weyl_dim(3, &hw(&[2, 1])), BigInt::from(8));
        assert_eq!(weyl_dim(3, &hw(&[1, 1])), BigInt::from(3));
        assert_eq!(weyl_dim(4, &hw(&[2, 2])), BigInt::from(20));
        assert_eq!(weyl_dim(5, &hw(&[3, 1, 1])), BigInt::from(126));
        assert_eq!(weyl_dim(5, &hw(&[4, 1, 1])), BigInt::from(280));
        assert_eq!(weyl_dim(5, &hw(&[3, 2, 1])), BigInt::from(280));
        assert_eq!(weyl_dim(6, &hw(&[])), BigInt::from(1));
    }

    #[test]
    fn ordering_puts_the_highest_pattern_first() {
        let lam = hw(&[2, 1]);
        let pats = enumerate_patterns(3, &lam);
        assert_eq!(pats[0], GtPattern::highest(3, &lam));
        let keys: Vec<Vec<i64>> = pats.iter().map(GtPattern::flatten_top_down).collect();
        assert!(keys.windows(2).all(|w| w[0] > w[1]), "strictly descending");
    }

    #[test]
    fn weights_and_entries() {
        let p = GtPattern::from_rows(vec![vec![1], vec![2, 0], vec![2, 1, 0]]);
        assert!(p.is_valid());
        assert_eq!(p.weight().components(), &[1, 1, 1]);
        assert_eq!(p.entry(2, 1), 2);
        assert_eq!(p.l_value(2, 2), -2);
        assert_eq!(p.flatten_top_down(), vec![2, 1, 0, 2, 0, 1]);
        let q = p.bumped(1, 1, 1);
        assert_eq!(q.entry(1, 1), 2);
        assert!(q.is_valid());
        let bad = GtPattern::from_rows(vec![vec![3], vec![2, 0], vec![2, 1, 0]]);
        assert!(!bad.is_valid());
    }

    #[test]
    fn highest_pattern_weight_is_the_highest_weight() {
        let lam = hw(&[3, 1, 1]);
        let top = GtPattern::highest(5, &lam);
        assert_eq!(top.weight(), *lam.weight());
    }
}
