//! Finite-rank modules built explicitly on the pattern basis.
//!
//! The basis is normalized so that all transition coefficients are rational
//! (a diagonal rescaling of the classical orthonormal basis by row
//! Vandermonde factors). In this normalization the rank-n vector module
//! comes out with generators equal to the elementary matrices on the nose.
//!
//! Simple raising and lowering generators act by one-entry bumps on
//! patterns. A bump is applied only when the bumped pattern still
//! interlaces; for such moves the coefficient below is a nonzero rational,
//! which is what keeps the matrices well-defined:
//!
//! * raising at (k, i):  -prod_j (l(k,i) - l(k+1,j)) / prod_{j != i} (l(k,i) + 1 - l(k,j))
//! * lowering at (k, i):  prod_j (l(k,i) - l(k-1,j)) / prod_{j != i} (l(k,i) - 1 - l(k,j))
//!
//! Every remaining generator is a commutator of one-step ones. Nothing here
//! is trusted blindly: `verify_commutation` replays all n^4 defining
//! relations on the realized matrices, and `build_module` checks the
//! dimension against the product formula and the highest-vector conditions
//! every time.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde_json::json;
use thiserror::Error;

use crate::exact::{MatError, Rat, SparseMatrix};
use crate::par::{self, ExecMode};
use crate::weights::{HighestWeight, Weight};

use super::pattern::{enumerate_patterns, weyl_dim, GtPattern};

/// Modules at most this large get the full commutation scan at build time;
/// larger ones validate dimension and highest-vector conditions only, with
/// `verify_commutation` available on demand.
const AUTO_VERIFY_DIM: usize = 200;

/// Failure while constructing or validating a module.
#[derive(Debug, Error)]
pub enum GtError {
    #[error("rank {n} cannot carry {lambda}: the weight has depth {depth}")]
    Truncation {
        n: usize,
        lambda: String,
        depth: usize,
    },
    #[error("generator index ({i}, {j}) outside rank {n}")]
    GeneratorIndex { i: usize, j: usize, n: usize },
    #[error(
        "commutation relation for [e({i},{j}), e({k},{l})] fails on the {lambda} module at rank {n}"
    )]
    Commutation {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        lambda: String,
        n: usize,
    },
    #[error("highest-vector condition fails for e({i},{j}) on {lambda} at rank {n}")]
    HighestVector {
        i: usize,
        j: usize,
        lambda: String,
        n: usize,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// A concrete rank-`n` module: basis, weights, and one matrix per generator.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    n: usize,
    lambda: HighestWeight,
    basis: Vec<GtPattern>,
    index: HashMap<Vec<i64>, usize>,
    weights: Vec<Weight>,
    gens: Vec<Vec<SparseMatrix>>,
    hwv_index: usize,
}

fn raise_valid(p: &GtPattern, k: usize, i: usize) -> bool {
    let bumped = p.entry(k, i) + 1;
    if p.entry(k + 1, i) < bumped {
        return false;
    }
    i == 1 || p.entry(k - 1, i - 1) >= bumped
}

fn lower_valid(p: &GtPattern, k: usize, i: usize) -> bool {
    let bumped = p.entry(k, i) - 1;
    if i < k && p.entry(k - 1, i) > bumped {
        return false;
    }
    // Against row k + 1 only the lower interlacing bound can break.
    p.entry(k + 1, i + 1) <= bumped
}

fn raise_coeff(p: &GtPattern, k: usize, i: usize) -> Rat {
    let l = p.l_value(k, i);
    let mut num = Rat::one();
    for j in 1..=k + 1 {
        num = num * Rat::from_int(l - p.l_value(k + 1, j));
    }
    let mut den = Rat::one();
    for j in 1..=k {
        if j != i {
            den = den * Rat::from_int(l + 1 - p.l_value(k, j));
        }
    }
    -num / den
}

fn lower_coeff(p: &GtPattern, k: usize, i: usize) -> Rat {
    let l = p.l_value(k, i);
    let mut num = Rat::one();
    for j in 1..k {
        num = num * Rat::from_int(l - p.l_value(k - 1, j));
    }
    let mut den = Rat::one();
    for j in 1..=k {
        if j != i {
            den = den * Rat::from_int(l - 1 - p.l_value(k, j));
        }
    }
    num / den
}

/// Constructs the module for `lambda` at rank `n` and validates it.
pub fn build_module(n: usize, lambda: &HighestWeight) -> Result<ModuleRep, GtError> {
    if lambda.depth() > n {
        return Err(GtError::Truncation {
            n,
            lambda: lambda.to_string(),
            depth: lambda.depth(),
        });
    }
    let basis = enumerate_patterns(n, lambda);
    let dim = basis.len();
    if BigInt::from(dim) != weyl_dim(n, lambda) {
        return Err(GtError::Internal(format!(
            "pattern count {dim} disagrees with the dimension formula for {lambda} at rank {n}"
        )));
    }
    let index: HashMap<Vec<i64>, usize> = basis
        .iter()
        .enumerate()
        .map(|(idx, p)| (p.flatten_top_down(), idx))
        .collect();
    let weights: Vec<Weight> = basis.iter().map(GtPattern::weight).collect();

    let mut gens: Vec<Vec<SparseMatrix>> = vec![vec![SparseMatrix::new(dim, dim); n]; n];
    for k in 1..=n {
        let mut d = SparseMatrix::new(dim, dim);
        for (c, w) in weights.iter().enumerate() {
            d.set(c, c, Rat::from_int(w.component(k)));
        }
        gens[k - 1][k - 1] = d;
    }
    for k in 1..n {
        let mut raise = SparseMatrix::new(dim, dim);
        let mut lower = SparseMatrix::new(dim, dim);
        for (c, p) in basis.iter().enumerate() {
            for i in 1..=k {
                if raise_valid(p, k, i) {
                    let target = index[&p.bumped(k, i, 1).flatten_top_down()];
                    raise.add_to(target, c, &raise_coeff(p, k, i));
                }
                if lower_valid(p, k, i) {
                    let target = index[&p.bumped(k, i, -1).flatten_top_down()];
                    lower.add_to(target, c, &lower_coeff(p, k, i));
                }
            }
        }
        gens[k - 1][k] = raise;
        gens[k][k - 1] = lower;
    }
    for dist in 2..n {
        for i in 1..=n - dist {
            let j = i + dist;
            gens[i - 1][j - 1] =
                SparseMatrix::commutator(&gens[i - 1][j - 2], &gens[j - 2][j - 1])?;
            gens[j - 1][i - 1] = SparseMatrix::commutator(&gens[j - 1][i], &gens[i][i - 1])?;
        }
    }

    let rep = ModuleRep {
        n,
        lambda: lambda.clone(),
        basis,
        index,
        weights,
        gens,
        hwv_index: 0,
    };
    rep.verify_highest_vector()?;
    if dim <= AUTO_VERIFY_DIM {
        rep.verify_commutation(ExecMode::default())?;
    }
    Ok(rep)
}

impl ModuleRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &HighestWeight {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GtPattern] {
        &self.basis
    }

    pub fn hwv_index(&self) -> usize {
        self.hwv_index
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight_of(&self, idx: usize) -> &Weight {
        &self.weights[idx]
    }

    /// Basis index of a pattern, if it belongs to this module.
    pub fn pattern_index(&self, p: &GtPattern) -> Option<usize> {
        self.index.get(&p.flatten_top_down()).copied()
    }

    /// The matrix of `e(i, j)`, indices 1-based.
    pub fn gen(&self, i: usize, j: usize) -> &SparseMatrix {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "generator index ({i}, {j}) outside rank {}",
            self.n
        );
        &self.gens[i - 1][j - 1]
    }

    /// Fallible lookup used by callers holding user input.
    pub fn try_gen(&self, i: usize, j: usize) -> Result<&SparseMatrix, GtError> {
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(GtError::GeneratorIndex { i, j, n: self.n });
        }
        Ok(&self.gens[i - 1][j - 1])
    }

    /// Basis indices grouped by weight; generators of equal left and right
    /// index preserve these groups, and weight-preserving operators built
    /// from the generator matrix are block-diagonal across them.
    pub fn weight_groups(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (idx, w) in self.weights.iter().enumerate() {
            groups.entry(w.clone()).or_default().push(idx);
        }
        groups
    }

    /// Checks that the highest vector is killed by raising generators and
    /// has the right diagonal eigenvalues.
    pub fn verify_highest_vector(&self) -> Result<(), GtError> {
        let v = self.hwv_index;
        if self.n > 0 && self.weights[v] != *self.lambda.weight() {
            return Err(GtError::Internal(format!(
                "highest vector carries weight {} instead of {}",
                self.weights[v], self.lambda
            )));
        }
        for i in 1..=self.n {
            for j in 1..=self.n {
                let col = self.gens[i - 1][j - 1].column(v);
                if i < j {
                    if col.iter().any(|x| !x.is_zero()) {
                        return Err(GtError::HighestVector {
                            i,
                            j,
                            lambda: self.lambda.to_string(),
                            n: self.n,
                        });
                    }
                } else if i == j {
                    let expected = Rat::from_int(self.lambda.part(i));
                    let ok = col
                        .iter()
                        .enumerate()
                        .all(|(r, x)| if r == v { *x == expected } else { x.is_zero() });
                    if !ok {
                        return Err(GtError::HighestVector {
                            i,
                            j,
                            lambda: self.lambda.to_string(),
                            n: self.n,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Replays every defining relation
    /// `[e(i,j), e(k,l)] = delta_jk e(i,l) - delta_li e(k,j)`
    /// on the realized matrices. This is the binding check that the module
    /// really is a module.
    pub fn verify_commutation(&self, mode: ExecMode) -> Result<(), GtError> {
        let n = self.n;
        let dim = self.dim();
        let mut quads = Vec::with_capacity(n * n * n * n);
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        quads.push((i, j, k, l));
                    }
                }
            }
        }
        let violation = par::find_first(mode, quads, |(i, j, k, l)| {
            let lhs = SparseMatrix::commutator(self.gen(i, j), self.gen(k, l))
                .expect("generator shapes agree");
            let mut rhs = SparseMatrix::new(dim, dim);
            if j == k {
                rhs = rhs.add(self.gen(i, l)).expect("generator shapes agree");
            }
            if l == i {
                rhs = rhs.sub(self.gen(k, j)).expect("generator shapes agree");
            }
            (lhs != rhs).then_some((i, j, k, l))
        });
        match violation {
            None => Ok(()),
            Some((i, j, k, l)) => Err(GtError::Commutation {
                i,
                j,
                k,
                l,
                lambda: self.lambda.to_string(),
                n,
            }),
        }
    }

    /// Copy with one generator entry shifted, for fault-injection tests.
    /// The result is deliberately not re-validated.
    pub fn with_perturbed_generator(
        &self,
        i: usize,
        j: usize,
        row: usize,
        col: usize,
        delta: &Rat,
    ) -> Result<ModuleRep, GtError> {
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(GtError::GeneratorIndex { i, j, n: self.n });
        }
        if row >= self.dim() || col >= self.dim() {
            return Err(GtError::Internal(format!(
                "perturbation site ({row}, {col}) outside dimension {}",
                self.dim()
            )));
        }
        let mut copy = self.clone();
        copy.gens[i - 1][j - 1].add_to(row, col, delta);
        Ok(copy)
    }

    /// Deterministic JSON dump of the realized module, for external
    /// inspection and frozen fixtures.
    pub fn fixture_json(&self) -> serde_json::Value {
        let mut generators = BTreeMap::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let entries: Vec<serde_json::Value> = self.gens[i - 1][j - 1]
                    .iter()
                    .map(|(r, c, v)| json!([r, c, v.to_string()]))
                    .collect();
                generators.insert(format!("e_{i}_{j}"), serde_json::Value::Array(entries));
            }
        }
        json!({
            "n": self.n,
            "lambda": self.lambda,
            "dim": self.dim(),
            "hwv_index": self.hwv_index,
            "basis": self.basis,
            "weights": self.weights,
            "generators": generators,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(parts: &[i64]) -> HighestWeight {
        HighestWeight::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn vector_module_generators_are_elementary_matrices() {
        for n in 1..=4usize {
            let rep = build_module(n, &hw(&[1])).unwrap();
            assert_eq!(rep.dim(), n);
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(
                        *rep.gen(i, j),
                        SparseMatrix::elementary(n, i - 1, j - 1),
                        "n={n} e({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn antisymmetric_square_coefficients() {
        // On the rank-3 module for (1,1) the one-step transitions carry the
        // coefficients 1/2 and 2 between the top two basis vectors.
        let rep = build_module(3, &hw(&[1, 1])).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.gen(3, 2).get(1, 0), Rat::new(1, 2));
        assert_eq!(rep.gen(2, 3).get(0, 1), Rat::from_int(2));
    }

    #[test]
    fn highest_vector_sits_first() {
        let lam = hw(&[2, 1]);
        let rep = build_module(3, &lam).unwrap();
        assert_eq!(rep.hwv_index(), 0);
        assert_eq!(rep.weight_of(0), lam.weight());
        assert_eq!(rep.dim(), 8);
    }

    #[test]
    fn commutation_holds_across_small_modules() {
        for (n, parts) in [
            (2usize, vec![2]),
            (3, vec![1, 1]),
            (3, vec![2, 1]),
            (4, vec![2, 2]),
            (4, vec![1, 1, 1]),
        ] {
            let rep = build_module(n, &hw(&parts)).unwrap();
            rep.verify_commutation(ExecMode::Sequential).unwrap();
            rep.verify_commutation(ExecMode::Parallel).unwrap();
        }
    }

    #[test]
    fn truncation_is_rejected() {
        match build_module(1, &hw(&[2, 1])) {
            Err(GtError::Truncation { n: 1, depth: 2, .. }) => {}
            other => panic!("expected a truncation error, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_generator_breaks_commutation() {
        let rep = build_module(2, &hw(&[1])).unwrap();
        let bad = rep
            .with_perturbed_generator(1, 2, 0, 0, &Rat::one())
            .unwrap();
        assert!(matches!(
            bad.verify_commutation(ExecMode::default()),
            Err(GtError::Commutation { .. })
        ));
        // The unperturbed module passes the same scan.
        rep.verify_commutation(ExecMode::default()).unwrap();
    }

    #[test]
    fn restriction_embeds_faithfully() {
        // Patterns at rank 2 embed into rank 3 by freezing row 3 at the
        // padded weight; generators with both indices <= 2 must agree with
        // the rank-2 module through that embedding.
        let lam = hw(&[2, 1]);
        let small = build_module(2, &lam).unwrap();
        let big = build_module(3, &lam).unwrap();
        let embed: Vec<usize> = small
            .basis()
            .iter()
            .map(|p| {
                let mut rows: Vec<Vec<i64>> = (1..=2).map(|k| p.row(k).to_vec()).collect();
                rows.push((1..=3).map(|i| lam.part(i)).collect());
                big.pattern_index(&GtPattern::from_rows(rows))
                    .expect("embedded pattern exists")
            })
            .collect();
        for i in 1..=2usize {
            for j in 1..=2usize {
                for (sc, &bc) in embed.iter().enumerate() {
                    for (sr, &br) in embed.iter().enumerate() {
                        assert_eq!(
                            small.gen(i, j).get(sr, sc),
                            big.gen(i, j).get(br, bc),
                            "e({i},{j}) entry ({sr},{sc})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rank_zero_module() {
        let rep = build_module(0, &hw(&[])).unwrap();
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.weights()[0], Weight::zero());
    }

    #[test]
    fn weight_groups_partition_the_basis() {
        let rep = build_module(3, &hw(&[2, 1])).unwrap();
        let groups = rep.weight_groups();
        let total: usize = groups.values().map(Vec::len).sum();
        assert_eq!(total, rep.dim());
        // (2,1) at rank 3 has weight (1,1,1) with multiplicity 2.
        assert_eq!(groups[&Weight::new(vec![1, 1, 1])].len(), 2);
    }

    #[test]
    fn fixture_dump_is_deterministic() {
        let rep = build_module(2, &hw(&[1])).unwrap();
        let a = serde_json::to_string(&rep.fixture_json()).unwrap();
        let b = serde_json::to_string(&rep.fixture_json()).unwrap();
        assert_eq!(a, b);
        let value = rep.fixture_json();
        assert_eq!(value["dim"], 2);
        assert_eq!(value["generators"]["e_1_2"], json!([[0, 1, "1"]]));
    }
}
