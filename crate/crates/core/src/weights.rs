//! Weights and highest weights for the stable general linear algebra.
//!
//! A weight is a finitely supported integer sequence, stored trimmed of
//! trailing zeros so that equal weights compare equal structurally. Highest
//! weights of the unitarizable modules considered here are partitions:
//! non-increasing, non-negative, finitely many nonzero parts.
//!
//! The half-sum of positive roots enters only through the pairing
//! `2 rho = (-1, -3, -5, ...)` shifted by one, i.e. `(2 rho)_i = 1 - 2i`,
//! which keeps every formula in integers.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Finitely supported integer weight, trimmed of trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weight(Vec<i64>);

impl Weight {
    /// Builds a weight, trimming trailing zeros.
    pub fn new(mut components: Vec<i64>) -> Self {
        while components.last() == Some(&0) {
            components.pop();
        }
        Weight(components)
    }

    pub fn zero() -> Self {
        Weight(Vec::new())
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// Component `i`, 1-based; zero beyond the support.
    pub fn component(&self, i: usize) -> i64 {
        assert!(i >= 1, "weight components are 1-based");
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Index of the last nonzero component (0 for the zero weight).
    pub fn support(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of all components.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        let n = self.0.len().max(other.0.len());
        Weight::new(
            (1..=n)
                .map(|i| self.component(i) + other.component(i))
                .collect(),
        )
    }

    /// `self + epsilon_i`, 1-based.
    pub fn plus_epsilon(&self, i: usize) -> Weight {
        assert!(i >= 1, "weight components are 1-based");
        let mut v = self.0.clone();
        if v.len() < i {
            v.resize(i, 0);
        }
        v[i - 1] += 1;
        Weight::new(v)
    }

    /// Non-increasing with non-negative parts.
    pub fn is_partition(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.last().is_none_or(|&x| x >= 0)
    }

    /// Euclidean pairing `(self, other)`.
    pub fn dot(&self, other: &Weight) -> i64 {
        let n = self.0.len().min(other.0.len());
        (0..n).map(|i| self.0[i] * other.0[i]).sum()
    }

    /// `(2 rho, self)` where `(2 rho)_i = 1 - 2i`.
    pub fn two_rho_pairing(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(idx, &w)| (1 - 2 * (idx as i64 + 1)) * w)
            .sum()
    }

    /// The quadratic form `(self, self + 2 rho)`.
    pub fn c2(&self) -> i64 {
        self.dot(self) + self.two_rho_pairing()
    }
}

/// Lexicographic order on zero-padded component sequences.
impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in 1..=n {
            match self.component(i).cmp(&other.component(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        for (idx, w) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Weight::new(Vec::<i64>::deserialize(deserializer)?))
    }
}

/// Error building or truncating a highest weight.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("part {index} is {value}; parts of a highest weight must be non-negative")]
    NegativePart { index: usize, value: i64 },
    #[error(
        "part {index} ({value}) exceeds part {prev_index} ({prev_value}); \
         parts must be non-increasing"
    )]
    IncreasingPair {
        index: usize,
        value: i64,
        prev_index: usize,
        prev_value: i64,
    },
    #[error("truncation rank {got} is below the weight depth {needed}")]
    TruncationTooSmall { needed: usize, got: usize },
}

/// A partition labelling a unitarizable highest-weight module.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HighestWeight {
    weight: Weight,
}

impl HighestWeight {
    /// Validates `parts` as a partition (1-based indices in errors).
    pub fn new(parts: Vec<i64>) -> Result<Self, WeightError> {
        for (idx, &p) in parts.iter().enumerate() {
            if p < 0 {
                return Err(WeightError::NegativePart {
                    index: idx + 1,
                    value: p,
                });
            }
            if idx > 0 && p > parts[idx - 1] {
                return Err(WeightError::IncreasingPair {
                    index: idx + 1,
                    value: p,
                    prev_index: idx,
                    prev_value: parts[idx - 1],
                });
            }
        }
        Ok(HighestWeight {
            weight: Weight::new(parts),
        })
    }

    pub fn zero() -> Self {
        HighestWeight {
            weight: Weight::zero(),
        }
    }

    pub fn parts(&self) -> &[i64] {
        self.weight.components()
    }

    /// Part `i`, 1-based; zero beyond the depth.
    pub fn part(&self, i: usize) -> i64 {
        self.weight.component(i)
    }

    /// Number of nonzero parts.
    pub fn depth(&self) -> usize {
        self.weight.support()
    }

    /// Sum of the parts.
    pub fn size(&self) -> i64 {
        self.weight.total()
    }

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero()
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// The quadratic form `(lambda, lambda + 2 rho)`.
    pub fn c2(&self) -> i64 {
        self.weight.c2()
    }

    /// Characteristic roots `alpha_i = lambda_i + 1 - i` for `i = 1..=count`.
    ///
    /// Strictly decreasing; requires `count` at least the depth.
    pub fn alpha_roots(&self, count: usize) -> Result<Vec<i64>, WeightError> {
        if count < self.depth() {
            return Err(WeightError::TruncationTooSmall {
                needed: self.depth(),
                got: count,
            });
        }
        Ok((1..=count as i64).map(|i| self.part(i as usize) + 1 - i).collect())
    }

    /// Containment of Young diagrams: every part of `inner` fits in `self`.
    pub fn contains(&self, inner: &HighestWeight) -> bool {
        (1..=inner.depth()).all(|i| inner.part(i) <= self.part(i))
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.weight, f)
    }
}

impl Serialize for HighestWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.weight.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HighestWeight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<i64>::deserialize(deserializer)?;
        HighestWeight::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions with at most `max_depth` parts and size at most `max_size`,
/// in a deterministic order starting from the zero partition.
pub fn enumerate_partitions(max_depth: usize, max_size: i64) -> Vec<HighestWeight> {
    fn rec(
        cur: &mut Vec<i64>,
        remaining_depth: usize,
        max_part: i64,
        budget: i64,
        out: &mut Vec<HighestWeight>,
    ) {
        out.push(HighestWeight::new(cur.clone()).expect("partition by construction"));
        if remaining_depth == 0 || budget == 0 {
            return;
        }
        for p in (1..=max_part.min(budget)).rev() {
            cur.push(p);
            rec(cur, remaining_depth - 1, p, budget - p, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), max_depth, max_size.max(0), max_size.max(0), &mut out);
    out
}
