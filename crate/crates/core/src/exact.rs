//! Exact rational scalars and sparse matrices.
//!
//! Everything downstream is exact: scalars are arbitrary-precision rationals
//! and matrices store only nonzero entries. A matrix is zero exactly when its
//! entry map is empty, so operator identities are structural statements,
//! never tolerance checks.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number.
///
/// Wraps `BigRational` with the display, parsing, and serde conventions used
/// throughout the crate: a rational serializes as the string `"p/q"`, or just
/// `"p"` when the denominator is one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// Builds `num/den`. Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rat(Pow::pow(&self.0, exp as i32))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error parsing a rational literal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer {0:?} in rational literal")]
    BadInt(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let parse_int = |part: &str| {
            BigInt::from_str(part.trim()).map_err(|_| ParseRatError::BadInt(part.to_owned()))
        };
        match s.split_once('/') {
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
            Some((num, den)) => {
                let num = parse_int(num)?;
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(ParseRatError::ZeroDenominator(s.to_owned()));
                }
                Ok(Rat(BigRational::new(num, den)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($trait::$method(&self.0, rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Structural error from a matrix operation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("entry ({row}, {col}) outside a {rows} x {cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Sparse matrix over `Rat` with ordered `(row, col) -> value` storage.
///
/// Invariant: no stored entry is zero. Every mutation re-establishes this, so
/// `is_zero` and equality are plain structural checks on the entry map.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, &Rat::one())
    }

    /// `c` times the identity; the zero matrix when `c` is zero.
    pub fn scaled_identity(n: usize, c: &Rat) -> Self {
        let mut m = Self::new(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.entries.insert((i, i), c.clone());
            }
        }
        m
    }

    /// Standard basis matrix with a single one in row `i`, column `j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::new(n, n);
        assert!(i < n && j < n, "elementary index out of range");
        m.entries.insert((i, j), Rat::one());
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets, accumulating
    /// duplicates and dropping entries that cancel to zero.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rat)>,
    ) -> Result<Self, MatError> {
        let mut m = Self::new(rows, cols);
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(MatError::OutOfBounds {
                    row: i,
                    col: j,
                    rows,
                    cols,
                });
            }
            m.add_to(i, j, &v);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Adds `v` into entry `(i, j)`, removing the entry if it cancels.
    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            return;
        }
        match self.entries.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.entries
            .range((i, 0)..=(i, usize::MAX))
            .map(|(&(_, j), v)| (j, v))
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<(), MatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::DimMismatch {
                op,
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_shape(other, "add")?;
        let mut out = self.clone();
        for (i, j, v) in other.iter() {
            out.add_to(i, j, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_shape(other, "sub")?;
        let mut out = self.clone();
        for (i, j, v) in other.iter() {
            out.add_to(i, j, &(-v));
        }
        Ok(out)
    }

    /// `self += c * other`.
    pub fn add_assign_scaled(&mut self, other: &Self, c: &Rat) -> Result<(), MatError> {
        self.check_same_shape(other, "add_assign_scaled")?;
        if c.is_zero() {
            return Ok(());
        }
        for (i, j, v) in other.iter() {
            self.add_to(i, j, &(c * v));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::new(self.rows, self.cols);
        }
        let entries = self
            .entries
            .iter()
            .map(|(&k, v)| (k, c * v))
            .collect::<BTreeMap<_, _>>();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimMismatch {
                op: "mul",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = Self::new(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (j, b) in other.row(k) {
                out.add_to(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    /// `a b - b a`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self, MatError> {
        a.mul(b)?.sub(&b.mul(a)?)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rat]) -> Result<Vec<Rat>, MatError> {
        if v.len() != self.cols {
            return Err(MatError::DimMismatch {
                op: "apply",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}", v.len()),
            });
        }
        let mut out = vec![Rat::zero(); self.rows];
        for (i, j, a) in self.iter() {
            let term = a * &v[j];
            out[i] += &term;
        }
        Ok(out)
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Rat> {
        assert!(j < self.cols, "column out of range");
        let mut out = vec![Rat::zero(); self.rows];
        for (&(i, c), v) in &self.entries {
            if c == j {
                out[i] = v.clone();
            }
        }
        out
    }

    /// Sum of diagonal entries. Panics unless square.
    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows)
            .filter_map(|i| self.entries.get(&(i, i)))
            .sum()
    }

    /// `Some(c)` exactly when the matrix equals `c` times the identity.
    pub fn scalar_identity_value(&self) -> Option<Rat> {
        if self.rows != self.cols {
            return None;
        }
        if self.entries.is_empty() {
            return Some(Rat::zero());
        }
        if self.entries.len() != self.rows {
            return None;
        }
        let mut value: Option<&Rat> = None;
        for (&(i, j), v) in &self.entries {
            if i != j {
                return None;
            }
            match value {
                None => value = Some(v),
                Some(c) if c == v => {}
                Some(_) => return None,
            }
        }
        value.cloned()
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} ({} nnz)", self.rows, self.cols, self.nnz())?;
        for (i, j, v) in self.iter() {
            writeln!(f, "  ({i}, {j}) = {v}")?;
        }
        Ok(())
    }
}

/// Rank of a dense matrix given as rows, by fraction-free-enough Gaussian
/// elimination (exact pivots, no magnitude concerns).
pub fn rank_dense(mut m: Vec<Vec<Rat>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().expect("pivot is nonzero");
        let (pivot_rows, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &pivot_rows[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] * &inv;
            for (entry, pivot_entry) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                let delta = &factor * pivot_entry;
                *entry -= &delta;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(r(3, 4).to_string(), "3/4");
        assert_eq!(r(-6, 4).to_string(), "-3/2");
        assert_eq!(Rat::from_int(-2).to_string(), "-2");
        assert_eq!(Rat::zero().to_string(), "0");
        assert_eq!("5/10".parse::<Rat>().unwrap(), r(1, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::from_int(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
    }

    #[test]
    fn arithmetic_basics() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(1, 2) - r(1, 2), Rat::zero());
        assert_eq!(r(2, 3) * r(3, 4), r(1, 2));
        assert_eq!(r(1, 2) / r(1, 4), Rat::from_int(2));
        assert_eq!(-r(1, 2), r(-1, 2));
        assert_eq!(r(-3, 7).abs(), r(3, 7));
    }

    #[test]
    fn pow_and_inverse() {
        assert_eq!(r(2, 3).pow(3), r(8, 27));
        assert_eq!(r(2, 3).pow(0), Rat::one());
        assert_eq!(r(2, 3).inverse().unwrap(), r(3, 2));
        assert_eq!(Rat::zero().inverse(), None);
    }

    #[test]
    fn serde_round_trip() {
        let x = r(-5, 6);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"-5/6\"");
        let back: Rat = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let int: Rat = serde_json::from_str("\"42\"").unwrap();
        assert_eq!(int, Rat::from_int(42));
    }

    #[test]
    fn elementary_commutator_is_cartan_difference() {
        let e12 = SparseMatrix::elementary(2, 0, 1);
        let e21 = SparseMatrix::elementary(2, 1, 0);
        let comm = SparseMatrix::commutator(&e12, &e21).unwrap();
        let mut expected = SparseMatrix::new(2, 2);
        expected.set(0, 0, Rat::one());
        expected.set(1, 1, -Rat::one());
        assert_eq!(comm, expected);
    }

    #[test]
    fn triplets_accumulate_and_cancel() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, r(1, 2)),
                (0, 0, r(1, 2)),
                (1, 1, Rat::one()),
                (1, 1, -Rat::one()),
            ],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 0), Rat::one());
        assert_eq!(m.get(1, 1), Rat::zero());
        assert!(SparseMatrix::from_triplets(1, 1, vec![(0, 1, Rat::one())]).is_err());
    }

    #[test]
    fn scalar_identity_detection() {
        assert_eq!(
            SparseMatrix::new(3, 3).scalar_identity_value(),
            Some(Rat::zero())
        );
        assert_eq!(
            SparseMatrix::scaled_identity(4, &r(7, 3)).scalar_identity_value(),
            Some(r(7, 3))
        );
        let mut m = SparseMatrix::identity(3);
        m.set(0, 1, Rat::one());
        assert_eq!(m.scalar_identity_value(), None);
        let mut d = SparseMatrix::identity(3);
        d.set(2, 2, Rat::from_int(2));
        assert_eq!(d.scalar_identity_value(), None);
        let mut partial = SparseMatrix::new(3, 3);
        partial.set(0, 0, Rat::one());
        assert_eq!(partial.scalar_identity_value(), None);
        assert_eq!(SparseMatrix::new(2, 3).scalar_identity_value(), None);
    }

    #[test]
    fn shape_errors() {
        let a = SparseMatrix::new(2, 3);
        let b = SparseMatrix::new(2, 3);
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_ok());
        assert!(a.add(&SparseMatrix::new(3, 2)).is_err());
        assert!(a.apply(&vec![Rat::zero(); 2]).is_err());
    }

    #[test]
    fn apply_and_column() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, r(1, 1)), (0, 1, r(2, 1)), (1, 1, r(3, 1))],
        )
        .unwrap();
        let v = m.apply(&[Rat::one(), Rat::one()]).unwrap();
        assert_eq!(v, vec![Rat::from_int(3), Rat::from_int(3)]);
        assert_eq!(m.column(1), vec![Rat::from_int(2), Rat::from_int(3)]);
        assert_eq!(m.trace(), Rat::from_int(4));
    }

    #[test]
    fn rank_computation() {
        let rows = vec![
            vec![r(1, 1), r(2, 1), r(3, 1)],
            vec![r(2, 1), r(4, 1), r(6, 1)],
            vec![r(0, 1), r(1, 1), r(1, 1)],
        ];
        assert_eq!(rank_dense(rows), 2);
        assert_eq!(rank_dense(vec![]), 0);
        assert_eq!(rank_dense(vec![vec![Rat::zero(); 3]; 2]), 0);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=10).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn ring_identities(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
            prop_assert_eq!(&a - &a, Rat::zero());
            if !b.is_zero() {
                prop_assert_eq!(&a / &b * &b, a.clone());
            }
        }

        #[test]
        fn parse_round_trip(a in small_rat()) {
            prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
        }

        #[test]
        fn matrix_distributivity(
            xs in proptest::collection::vec(-5i64..=5, 9),
            ys in proptest::collection::vec(-5i64..=5, 9),
            zs in proptest::collection::vec(-5i64..=5, 9),
        ) {
            let dense = |vals: &[i64]| {
                SparseMatrix::from_triplets(
                    3,
                    3,
                    vals.iter().enumerate().map(|(k, &v)| (k / 3, k % 3, Rat::from_int(v))),
                )
                .unwrap()
            };
            let (a, b, c) = (dense(&xs), dense(&ys), dense(&zs));
            let lhs = a.add(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
