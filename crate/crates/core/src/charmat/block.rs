//! Block operators on a tensor product space.

use std::collections::BTreeMap;

use crate::exact::{Rat, SparseMatrix};
use crate::gt::ModuleRep;
use crate::par::{self, ExecMode};

use super::CharError;

/// Square operator on `outer (x) inner` stored as a sparse grid of sparse
/// blocks. Absent blocks are zero and stored blocks are nonzero. The pair
/// `(b, r)` flattens to index `b * inner + r`.
///
/// The characteristic matrix A lives here: its block in row i, column b is
/// the representing matrix of `e(b+1, i+1)`, so A sends `(basis b) (x) v`
/// to the sum over i of `(basis i) (x) e(b+1, i+1) v`. The flattened block
/// `(i, j)` of a power of A is the matrix the recursion
/// `sum_k A_i^k (A^(m-1))_k^j` produces for the entry with upper index j+1
/// and lower index i+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOperator {
    outer: usize,
    inner: usize,
    blocks: BTreeMap<(usize, usize), SparseMatrix>,
}

impl BlockOperator {
    pub fn zero(outer: usize, inner: usize) -> Self {
        BlockOperator {
            outer,
            inner,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(outer: usize, inner: usize) -> Self {
        let mut op = BlockOperator::zero(outer, inner);
        for i in 0..outer {
            op.set_block(i, i, SparseMatrix::identity(inner));
        }
        op
    }

    pub fn outer_dim(&self) -> usize {
        self.outer
    }

    pub fn inner_dim(&self) -> usize {
        self.inner
    }

    pub fn total_dim(&self) -> usize {
        self.outer * self.inner
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&SparseMatrix> {
        self.blocks.get(&(i, j))
    }

    /// Block `(i, j)` as an owned matrix, zero when absent.
    pub fn block_or_zero(&self, i: usize, j: usize) -> SparseMatrix {
        self.blocks
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::new(self.inner, self.inner))
    }

    pub fn set_block(&mut self, i: usize, j: usize, m: SparseMatrix) {
        assert!(i < self.outer && j < self.outer, "block index out of range");
        assert!(
            m.rows() == self.inner && m.cols() == self.inner,
            "block shape {}x{} does not match inner dimension {}",
            m.rows(),
            m.cols(),
            self.inner
        );
        if m.is_zero() {
            self.blocks.remove(&(i, j));
        } else {
            self.blocks.insert((i, j), m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `self - c * identity`.
    pub fn sub_scalar(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        for i in 0..self.outer {
            let mut d = out.block_or_zero(i, i);
            for r in 0..self.inner {
                d.add_to(r, r, &-c);
            }
            out.set_block(i, i, d);
        }
        out
    }

    /// Operator composition `self * other`, block row times block column.
    pub fn compose(&self, other: &Self, mode: ExecMode) -> Self {
        assert!(
            self.outer == other.outer && self.inner == other.inner,
            "operator shapes differ"
        );
        // Only rows present on the left and columns present on the right can
        // produce anything.
        let mut left_rows: Vec<usize> = self.blocks.keys().map(|&(i, _)| i).collect();
        left_rows.dedup();
        let mut right_cols: Vec<usize> = other.blocks.keys().map(|&(_, j)| j).collect();
        right_cols.sort_unstable();
        right_cols.dedup();
        let cells: Vec<(usize, usize)> = left_rows
            .iter()
            .flat_map(|&i| right_cols.iter().map(move |&j| (i, j)))
            .collect();
        let computed = par::map_collect(mode, cells, |(i, j)| {
            let mut acc: Option<SparseMatrix> = None;
            for k in 0..self.outer {
                let (Some(a), Some(b)) = (self.block(i, k), other.block(k, j)) else {
                    continue;
                };
                let prod = a.mul(b).expect("inner dimensions agree");
                acc = Some(match acc {
                    None => prod,
                    Some(s) => s.add(&prod).expect("inner dimensions agree"),
                });
            }
            acc.and_then(|m| (!m.is_zero()).then_some(((i, j), m)))
        });
        let mut out = BlockOperator::zero(self.outer, self.inner);
        out.blocks = computed.into_iter().flatten().collect();
        out
    }

    /// Sum of the diagonal blocks, the block-trace `sum_i (A^m)_i^i`.
    pub fn block_trace(&self) -> SparseMatrix {
        let mut acc = SparseMatrix::new(self.inner, self.inner);
        let one = Rat::one();
        for i in 0..self.outer {
            if let Some(b) = self.block(i, i) {
                acc.add_assign_scaled(b, &one).expect("shapes agree");
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.total_dim(), "vector length mismatch");
        let mut out = vec![Rat::zero(); v.len()];
        for (&(i, j), b) in &self.blocks {
            for (r, c, val) in b.iter() {
                let term = val * &v[j * self.inner + c];
                if !term.is_zero() {
                    out[i * self.inner + r] += &term;
                }
            }
        }
        out
    }

    /// The operator as one big sparse matrix over the flattened index.
    pub fn flatten(&self) -> SparseMatrix {
        let t = self.total_dim();
        let mut out = SparseMatrix::new(t, t);
        for (&(i, j), b) in &self.blocks {
            for (r, c, val) in b.iter() {
                out.set(i * self.inner + r, j * self.inner + c, val.clone());
            }
        }
        out
    }
}

/// The characteristic matrix of a module: block `(i, b)` is the matrix of
/// `e(b+1, i+1)`, acting on `C^n (x) V_n(lambda)`. This space is invariant
/// because every module weight is supported inside the first n rows, which
/// kills all generator columns beyond n.
pub fn char_matrix(rep: &ModuleRep) -> BlockOperator {
    let n = rep.n();
    let mut a = BlockOperator::zero(n, rep.dim());
    for i in 0..n {
        for b in 0..n {
            a.set_block(i, b, rep.gen(b + 1, i + 1).clone());
        }
    }
    a
}

/// The split Casimir `sum_{i,j} pi_left(e_ij) (x) pi_right(e_ji)` as a block
/// operator whose outer index runs over the basis of the left module. With a
/// vector module on the left this is exactly `char_matrix(right)`.
pub fn split_casimir(
    left: &ModuleRep,
    right: &ModuleRep,
    mode: ExecMode,
) -> Result<BlockOperator, CharError> {
    if left.n() != right.n() {
        return Err(CharError::RankMismatch {
            left: left.n(),
            right: right.n(),
        });
    }
    let n = left.n();
    // Generator index pairs feeding one block, with their scalar weights.
    type BlockTerms = Vec<(usize, usize, Rat)>;
    // Group the scalar contributions by target block first, then build each
    // block independently.
    let mut cells: BTreeMap<(usize, usize), BlockTerms> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            for (a, b, c) in left.gen(i, j).iter() {
                cells.entry((a, b)).or_default().push((i, j, c.clone()));
            }
        }
    }
    let d = right.dim();
    let built = par::map_collect(mode, cells.into_iter().collect(), |((a, b), terms)| {
        let mut acc = SparseMatrix::new(d, d);
        for (i, j, c) in terms {
            acc.add_assign_scaled(right.gen(j, i), &c)
                .expect("right blocks share one shape");
        }
        ((a, b), acc)
    });
    let mut op = BlockOperator::zero(left.dim(), d);
    for ((a, b), m) in built {
        op.set_block(a, b, m);
    }
    Ok(op)
}

/// `a^m` by repeated composition; `m = 0` gives the identity.
pub fn op_power(a: &BlockOperator, m: u32, mode: ExecMode) -> BlockOperator {
    let mut out = BlockOperator::identity(a.outer_dim(), a.inner_dim());
    for _ in 0..m {
        out = out.compose(a, mode);
    }
    out
}
