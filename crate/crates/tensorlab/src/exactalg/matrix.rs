//! Dense exact matrices over [`FieldScalar`].
//!
//! Rank and determinant over the rationals go through fraction-free Bareiss
//! elimination on integer matrices (denominators cleared per row), which
//! keeps intermediate entries polynomially sized. Prime fields use ordinary
//! Gaussian elimination. Kernels, solving, and inverses use reduced row
//! echelon form directly; sizes in this crate stay small enough for that.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{Field, FieldScalar};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<FieldScalar>, // row-major, length rows*cols
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from row-major scalar data; every entry must be in `field`.
    pub fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<FieldScalar>) -> ExactMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        assert!(entries.iter().all(|e| e.field() == field), "mixed-field entries");
        ExactMatrix { rows, cols, field, entries }
    }

    /// Convenience constructor from small signed integers.
    pub fn from_i64(field: Field, data: &[&[i64]]) -> ExactMatrix {
        let rows = data.len();
        let cols = if rows == 0 { 0 } else { data[0].len() };
        let mut entries = Vec::with_capacity(rows * cols);
        for r in data {
            assert_eq!(r.len(), cols, "ragged rows");
            for &v in *r {
                entries.push(field.from_i64(v));
            }
        }
        ExactMatrix { rows, cols, field, entries }
    }

    /// Outer product `u vᵀ`; the canonical rank-one (or zero) matrix.
    pub fn outer(u: &[FieldScalar], v: &[FieldScalar]) -> ExactMatrix {
        assert!(!u.is_empty() && !v.is_empty());
        let field = u[0].field();
        let mut m = ExactMatrix::zeros(field, u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.set(i, j, ui.mul(vj));
            }
        }
        m
    }

    /// Assembles a matrix from a grid of blocks. Within a block-row all
    /// blocks must agree on height; within a block-column, on width.
    pub fn from_blocks(blocks: &[Vec<ExactMatrix>]) -> ExactMatrix {
        assert!(!blocks.is_empty() && !blocks[0].is_empty());
        let field = blocks[0][0].field;
        let block_cols = blocks[0].len();
        let col_widths: Vec<usize> = (0..block_cols).map(|j| blocks[0][j].cols).collect();
        let total_cols: usize = col_widths.iter().sum();
        let mut rows_out: Vec<FieldScalar> = Vec::new();
        let mut total_rows = 0;
        for brow in blocks {
            assert_eq!(brow.len(), block_cols, "ragged block grid");
            let h = brow[0].rows;
            for (j, b) in brow.iter().enumerate() {
                assert_eq!(b.rows, h, "block height mismatch");
                assert_eq!(b.cols, col_widths[j], "block width mismatch");
                assert_eq!(b.field, field, "mixed-field blocks");
            }
            for r in 0..h {
                for b in brow {
                    for c in 0..b.cols {
                        rows_out.push(b.get(r, c).clone());
                    }
                }
            }
            total_rows += h;
        }
        ExactMatrix::from_entries(field, total_rows, total_cols, rows_out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert_eq!(v.field(), self.field, "mixed-field entry");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn row(&self, r: usize) -> Vec<FieldScalar> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<FieldScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Row-major flattening; matrices double as vectors of length rows*cols.
    pub fn flatten(&self) -> Vec<FieldScalar> {
        self.entries.clone()
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, flat: Vec<FieldScalar>) -> ExactMatrix {
        ExactMatrix::from_entries(field, rows, cols, flat)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        ExactMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactMatrix {
        let entries = self.entries.iter().map(|a| a.neg()).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }
    }

    pub fn scale(&self, s: &FieldScalar) -> ExactMatrix {
        let entries = self.entries.iter().map(|a| a.mul(s)).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, field: self.field, entries }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = ExactMatrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (k, vk) in v.iter().enumerate() {
                    if !vk.is_zero() {
                        acc = acc.add(&self.get(i, k).mul(vk));
                    }
                }
                acc
            })
            .collect()
    }

    /// Extracts the `rs x cs` submatrix with upper-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rs: usize, cs: usize) -> ExactMatrix {
        assert!(r0 + rs <= self.rows && c0 + cs <= self.cols, "block out of range");
        let mut out = ExactMatrix::zeros(self.field, rs, cs);
        for r in 0..rs {
            for c in 0..cs {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let tmp = m.get(row, c).clone();
                    m.set(row, c, m.get(pr, c).clone());
                    m.set(pr, c, tmp);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(row, c, m.get(row, c).mul(&inv));
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c).sub(&f.mul(m.get(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Prime(_) => self.rref().1.len(),
            Field::Rational => {
                let (ints, _) = self.cleared_integer_rows();
                bareiss_rank(ints)
            }
        }
    }

    pub fn det(&self) -> Result<FieldScalar> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        match self.field {
            Field::Prime(_) => Ok(self.det_by_elimination()),
            Field::Rational => {
                let (ints, scales) = self.cleared_integer_rows();
                let d = bareiss_det(ints);
                let mut scale = BigInt::one();
                for s in scales {
                    scale *= s;
                }
                Ok(FieldScalar::Rational(BigRational::new(d, scale)))
            }
        }
    }

    fn det_by_elimination(&self) -> FieldScalar {
        let mut m = self.clone();
        let n = m.rows;
        let mut det = m.field.one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return m.field.zero();
            };
            if pr != col {
                for c in 0..n {
                    let tmp = m.get(col, c).clone();
                    m.set(col, c, m.get(pr, c).clone());
                    m.set(pr, c, tmp);
                }
                det = det.neg();
            }
            let pivot = m.get(col, col).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("pivot is nonzero");
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).mul(&inv);
                for c in col..n {
                    let v = m.get(r, c).sub(&f.mul(m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Clears denominators row by row, returning an integer matrix with the
    /// same rank and the per-row scaling factors (each strictly positive).
    fn cleared_integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut ints = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                if let FieldScalar::Rational(q) = self.get(r, c) {
                    lcm = lcm.lcm(q.denom());
                } else {
                    unreachable!("rational matrix expected");
                }
            }
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                if let FieldScalar::Rational(q) = self.get(r, c) {
                    row.push(q.numer() * (&lcm / q.denom()));
                }
            }
            ints.push(row);
            scales.push(lcm);
        }
        (ints, scales)
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldScalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (prow, &pc) in pivots.iter().enumerate() {
                v[pc] = Some(prow);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![self.field.zero(); self.cols];
            x[free] = self.field.one();
            for (col, p) in pivot_set.iter().enumerate() {
                if let Some(prow) = p {
                    x[col] = r.get(*prow, free).neg();
                }
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = ExactMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// The adjugate (classical adjoint): `adj(A) A = A adj(A) = det(A) I`.
    /// For `n = 1` this is `[[1]]` by the empty-minor convention. Invertible
    /// matrices go through the solver; singular ones fall back to cofactor
    /// determinants, each computed by elimination.
    pub fn adjugate(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ExactMatrix::zeros(self.field, 0, 0));
        }
        if n == 1 {
            return Ok(ExactMatrix::identity(self.field, 1));
        }
        let det = self.det()?;
        if !det.is_zero() {
            // adj = det * A^{-1}
            let inv = self.inverse().expect("nonzero determinant");
            return Ok(inv.scale(&det));
        }
        let mut adj = ExactMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let mut cof = minor.det()?;
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                adj.set(j, i, cof);
            }
        }
        Ok(adj)
    }

    /// Writes a nonzero rank-one matrix as an outer product `u vᵀ`;
    /// `None` if the matrix is zero or has rank at least two.
    pub fn rank_one_factor(&self) -> Option<(Vec<FieldScalar>, Vec<FieldScalar>)> {
        let pivot_row = (0..self.rows).find(|&r| (0..self.cols).any(|c| !self.get(r, c).is_zero()))?;
        let v = self.row(pivot_row);
        let pivot_col = v.iter().position(|x| !x.is_zero()).expect("row is nonzero");
        let inv = v[pivot_col].inv().expect("pivot is nonzero");
        let u: Vec<FieldScalar> = (0..self.rows)
            .map(|r| self.get(r, pivot_col).mul(&inv))
            .collect();
        if &ExactMatrix::outer(&u, &v) == self {
            Some((u, v))
        } else {
            None
        }
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.field, self.rows - 1, self.cols - 1);
        let mut rr = 0;
        for r in 0..self.rows {
            if r == skip_r {
                continue;
            }
            let mut cc = 0;
            for c in 0..self.cols {
                if c == skip_c {
                    continue;
                }
                out.set(rr, cc, self.get(r, c).clone());
                cc += 1;
            }
            rr += 1;
        }
        out
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = FieldScalar;

    fn index(&self, (r, c): (usize, usize)) -> &FieldScalar {
        self.get(r, c)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) rank of an integer matrix. Uses full pivoting;
/// row and column swaps do not change rank.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut k = 0;
    loop {
        if k == rows || k == cols {
            return k;
        }
        // full pivot search in the trailing submatrix
        let mut pivot = None;
        'outer: for r in k..rows {
            for c in k..cols {
                if !m[r][c].is_zero() {
                    pivot = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some((pr, pc)) = pivot else {
            return k;
        };
        m.swap(k, pr);
        if pc != k {
            for row in m.iter_mut() {
                row.swap(k, pc);
            }
        }
        for r in k + 1..rows {
            for c in k + 1..cols {
                let num = &m[r][c] * &m[k][k] - &m[r][k] * &m[k][c];
                m[r][c] = num / &prev; // exact division by Bareiss identity
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
        k += 1;
    }
}

/// Bareiss determinant of a square integer matrix.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut sign = 1i64;
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(pr) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, pr);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let num = &m[r][c] * &m[k][k] - &m[r][k] * &m[k][c];
                m[r][c] = num / &prev;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// An incrementally maintained row space in reduced echelon form. The basis
/// rows are pivot-normalized and fully back-substituted, so membership and
/// reduction are single passes.
#[derive(Clone, Debug)]
pub struct VecSpace {
    field: Field,
    len: usize,
    rows: Vec<Vec<FieldScalar>>, // sorted by pivot column
    pivots: Vec<usize>,
}

impl VecSpace {
    pub fn new(field: Field, len: usize) -> VecSpace {
        VecSpace { field, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(field: Field, len: usize, vecs: impl IntoIterator<Item = Vec<FieldScalar>>) -> VecSpace {
        let mut s = VecSpace::new(field, len);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[Vec<FieldScalar>] {
        &self.rows
    }

    /// Reduces `v` modulo the space (in place) and returns it.
    pub fn reduce(&self, mut v: Vec<FieldScalar>) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.sub(&f.mul(r));
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldScalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Inserts a vector; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: Vec<FieldScalar>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero leading coefficient");
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        // back-substitute into existing rows to keep the basis reduced
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, n) in row.iter_mut().zip(&v) {
                    *x = x.sub(&f.mul(n));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Expresses `v` in the stored basis, if it lies in the space.
    pub fn coordinates(&self, v: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        let mut v = v.to_vec();
        let mut coords = vec![self.field.zero(); self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            coords[i] = f.clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.sub(&f.mul(r));
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_of_known_matrices() {
        let m = ExactMatrix::from_i64(q(), &[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let id = ExactMatrix::identity(q(), 4);
        assert_eq!(id.rank(), 4);
        let z = ExactMatrix::zeros(q(), 3, 5);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn rank_over_gf2_differs_from_q() {
        // All-ones 2x2 plus identity has rank 2 over Q but the matrix
        // [[1,1],[1,1]] has rank 1 over any field; check GF(2) pivots.
        let f = Field::prime(2).unwrap();
        let m = ExactMatrix::from_i64(f, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
        let m2 = ExactMatrix::from_i64(f, &[&[1, 1], &[1, 0]]);
        assert_eq!(m2.rank(), 2);
    }

    #[test]
    fn determinant_matches_cofactor_values() {
        let m = ExactMatrix::from_i64(q(), &[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        // det = 2*(1*1-0*3) - 0 + 1*(1*3-1*0) = 2 + 3 = 5
        assert_eq!(m.det().unwrap(), q().from_i64(5));
        let singular = ExactMatrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert!(singular.det().unwrap().is_zero());
    }

    #[test]
    fn determinant_with_rational_entries() {
        let f = q();
        let half = f.parse("1/2").unwrap();
        let third = f.parse("1/3").unwrap();
        let mut m = ExactMatrix::zeros(f, 2, 2);
        m.set(0, 0, half.clone());
        m.set(1, 1, third.clone());
        assert_eq!(m.det().unwrap(), f.parse("1/6").unwrap());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = ExactMatrix::from_i64(q(), &[&[1, 2, 3], &[4, 5, 6]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_finds_particular_solution() {
        let m = ExactMatrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let b = vec![q().from_i64(3), q().from_i64(1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let inconsistent = ExactMatrix::from_i64(q(), &[&[1, 1], &[1, 1]]);
        assert!(inconsistent.solve(&[q().from_i64(0), q().from_i64(1)]).is_none());
    }

    #[test]
    fn inverse_round_trips() {
        let m = ExactMatrix::from_i64(q(), &[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(q(), 2));
        let singular = ExactMatrix::from_i64(q(), &[&[1, 1], &[1, 1]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn adjugate_identity_nonsingular_and_singular() {
        let f = q();
        let m = ExactMatrix::from_i64(f, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let adj = m.adjugate().unwrap();
        let det = m.det().unwrap();
        let prod = m.mul(&adj);
        assert_eq!(prod, ExactMatrix::identity(f, 3).scale(&det));

        // Singular with rank 2: adjugate is nonzero and M * adj = 0.
        let s = ExactMatrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let adj = s.adjugate().unwrap();
        assert!(s.mul(&adj).is_zero());
        assert!(!adj.is_zero());
    }

    #[test]
    fn adjugate_size_one_is_identity() {
        let m = ExactMatrix::from_i64(q(), &[&[17]]);
        assert_eq!(m.adjugate().unwrap(), ExactMatrix::identity(q(), 1));
        let z = ExactMatrix::from_i64(q(), &[&[0]]);
        assert_eq!(z.adjugate().unwrap(), ExactMatrix::identity(q(), 1));
    }

    #[test]
    fn block_assembly_and_extraction() {
        let f = q();
        let a = ExactMatrix::identity(f, 2);
        let b = ExactMatrix::zeros(f, 2, 1);
        let c = ExactMatrix::zeros(f, 1, 2);
        let d = ExactMatrix::from_i64(f, &[&[7]]);
        let m = ExactMatrix::from_blocks(&[vec![a.clone(), b], vec![c, d.clone()]]);
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 3);
        assert_eq!(m.block(0, 0, 2, 2), a);
        assert_eq!(m.block(2, 2, 1, 1), d);
    }

    #[test]
    fn vecspace_insert_reduce_contains() {
        let f = Field::prime(3).unwrap();
        let mut s = VecSpace::new(f, 3);
        assert!(s.insert(vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)]));
        assert!(s.insert(vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)]));
        // dependent: first + second
        assert!(!s.insert(vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)]));
        assert_eq!(s.dim(), 2);
        // 2 * first + second
        assert!(s.contains(&[f.from_i64(2), f.from_i64(2), f.from_i64(1)]));
        assert!(!s.contains(&[f.from_i64(0), f.from_i64(0), f.from_i64(1)]));
    }

    #[test]
    fn vecspace_coordinates_recover_combination() {
        let f = Field::Rational;
        let mut s = VecSpace::new(f, 2);
        s.insert(vec![f.from_i64(1), f.from_i64(1)]);
        s.insert(vec![f.from_i64(0), f.from_i64(2)]);
        let v = vec![f.from_i64(3), f.from_i64(7)];
        let coords = s.coordinates(&v).unwrap();
        let mut rebuilt = vec![f.zero(), f.zero()];
        for (c, row) in coords.iter().zip(s.basis()) {
            for (x, r) in rebuilt.iter_mut().zip(row) {
                *x = x.add(&c.mul(r));
            }
        }
        assert_eq!(rebuilt, v);
    }
}
