//! Dense bit-packed linear algebra over GF(2).

use std::fmt;

/// A dense vector over GF(2), packed 64 bits per word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Highest set bit, if any.
    pub fn last_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A matrix over GF(2) stored as columns: `cols[j]` is the image of basis
/// vector `j`. This matches how chain maps are built (one image per source
/// point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<BitVec>,
}

impl Matrix {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![BitVec::zeros(rows); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cols[col].get(row)
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.ncols());
        let mut out = BitVec::zeros(self.rows);
        for j in v.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.rows);
        Matrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.ncols(), other.ncols());
        let mut out = self.clone();
        for (a, b) in out.cols.iter_mut().zip(&other.cols) {
            a.xor_assign(b);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.ncols(), self.rows);
        for (j, c) in self.cols.iter().enumerate() {
            for i in c.ones() {
                t.cols[i].set(j, true);
            }
        }
        t
    }
}

/// Reduce a list of vectors to a basis of their span in reduced echelon form
/// (pivot = lowest set bit, each pivot cleared from all other vectors).
pub fn echelon_basis(vectors: impl IntoIterator<Item = BitVec>) -> Vec<BitVec> {
    let mut basis: Vec<BitVec> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            let p = b.first_one().unwrap();
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        if let Some(p) = v.first_one() {
            for b in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&v);
                }
            }
            basis.push(v);
        }
    }
    basis.sort_by_key(|b| b.first_one());
    basis
}

/// Whether `v` lies in the span of a basis produced by [`echelon_basis`].
pub fn in_span(basis: &[BitVec], v: &BitVec) -> bool {
    let mut v = v.clone();
    for b in basis {
        let p = b.first_one().unwrap();
        if v.get(p) {
            v.xor_assign(b);
        }
    }
    v.is_zero()
}

/// Kernel of a column-stored matrix, as a reduced basis.
pub fn kernel(m: &Matrix) -> Vec<BitVec> {
    let n = m.ncols();
    let mut sys = LinearSystem::new(n);
    // rows of m: equation i is sum_j m[i][j] x_j = 0
    let t = m.transpose();
    for row in &t.cols {
        sys.push(row.clone(), false);
    }
    sys.nullspace()
}

/// An affine system `A x = b` over GF(2), solved by elimination.
///
/// Solutions are lexicographically least with variable 0 most significant:
/// pivots are taken from the highest-index column downward, so each pivot
/// variable depends only on lower-index free variables, and all free
/// variables are then set to zero.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    nvars: usize,
    rows: Vec<(BitVec, bool)>,
}

#[derive(Clone, Debug)]
struct Reduced {
    /// (pivot column, row bits, rhs)
    pivots: Vec<(usize, BitVec, bool)>,
    consistent: bool,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nequations(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, coeffs: BitVec, rhs: bool) {
        assert_eq!(coeffs.len(), self.nvars);
        if coeffs.is_zero() && !rhs {
            return;
        }
        self.rows.push((coeffs, rhs));
    }

    pub fn push_indices(&mut self, idx: impl IntoIterator<Item = usize>, rhs: bool) {
        let v = BitVec::from_indices(self.nvars, idx);
        self.push(v, rhs);
    }

    fn reduce(&self) -> Reduced {
        let mut rows = self.rows.clone();
        let mut pivots: Vec<(usize, BitVec, bool)> = Vec::new();
        let mut col = self.nvars;
        while col > 0 {
            col -= 1;
            let Some(pos) = rows.iter().position(|(r, _)| r.get(col)) else {
                continue;
            };
            let (prow, prhs) = rows.swap_remove(pos);
            for (r, rhs) in rows.iter_mut() {
                if r.get(col) {
                    r.xor_assign(&prow);
                    *rhs ^= prhs;
                }
            }
            for (_, r, rhs) in pivots.iter_mut() {
                if r.get(col) {
                    r.xor_assign(&prow);
                    *rhs ^= prhs;
                }
            }
            pivots.push((col, prow, prhs));
        }
        // leftover rows have no coefficients left
        let consistent = rows.iter().all(|(_, rhs)| !*rhs);
        Reduced { pivots, consistent }
    }

    /// Lexicographically least solution, or `None` if inconsistent.
    pub fn solve(&self) -> Option<BitVec> {
        let red = self.reduce();
        if !red.consistent {
            return None;
        }
        let mut x = BitVec::zeros(self.nvars);
        for (col, _, rhs) in &red.pivots {
            x.set(*col, *rhs);
        }
        Some(x)
    }

    pub fn is_solvable(&self) -> bool {
        self.reduce().consistent
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        self.reduce().pivots.len()
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let red = self.reduce();
        let pivot_cols: Vec<bool> = {
            let mut p = vec![false; self.nvars];
            for (c, _, _) in &red.pivots {
                p[*c] = true;
            }
            p
        };
        let mut out = Vec::new();
        for free in (0..self.nvars).filter(|&c| !pivot_cols[c]) {
            let mut v = BitVec::unit(self.nvars, free);
            for (c, row, _) in &red.pivots {
                if row.get(free) {
                    v.set(*c, true);
                }
            }
            out.push(v);
        }
        echelon_basis(out)
    }
}
