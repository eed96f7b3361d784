//! Dense order-three tensors with exact entries.
//!
//! A tensor `p` lives in `A (x) B (x) C` with `dims = (a, b, c)`. Slices are
//! matrices obtained by contracting one factor with a functional; the span
//! of all slices of a factor is the tensor's *slice space* with respect to
//! that factor, the central object of the rank machinery: the rank of `p`
//! equals the least number of rank-one matrices whose span contains the
//! slice space.

mod io;
mod subspace;

pub use io::{read_tensor, read_tensor_str, write_tensor, write_tensor_string};
pub use subspace::{projective_coefficients, HookWitness, MatrixSubspace};

use crate::exactalg::{ExactMatrix, Field, FieldScalar};
use crate::{Error, Result};
use rand::Rng;

/// One of the three tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Factor {
    A,
    B,
    C,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::A, Factor::B, Factor::C];

    pub fn index(self) -> usize {
        match self {
            Factor::A => 0,
            Factor::B => 1,
            Factor::C => 2,
        }
    }
}

/// Permutation that moves `factor` into the leading slot while keeping the
/// other two factors in their original relative order.
pub fn permutation_with_first(factor: Factor) -> [Factor; 3] {
    match factor {
        Factor::A => [Factor::A, Factor::B, Factor::C],
        Factor::B => [Factor::B, Factor::A, Factor::C],
        Factor::C => [Factor::C, Factor::A, Factor::B],
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Factor::A => write!(f, "A"),
            Factor::B => write!(f, "B"),
            Factor::C => write!(f, "C"),
        }
    }
}

/// Direct-sum block structure: each factor splits into a leading part
/// (the first summand) and a trailing part (the second summand).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub c: (usize, usize),
}

impl Splitting {
    pub fn part(&self, f: Factor) -> (usize, usize) {
        match f {
            Factor::A => self.a,
            Factor::B => self.b,
            Factor::C => self.c,
        }
    }

    pub fn first_dims(&self) -> [usize; 3] {
        [self.a.0, self.b.0, self.c.0]
    }

    pub fn second_dims(&self) -> [usize; 3] {
        [self.a.1, self.b.1, self.c.1]
    }
}

/// A decomposable (rank at most one) tensor `u (x) v (x) w`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SimpleTensor {
    pub u: Vec<FieldScalar>,
    pub v: Vec<FieldScalar>,
    pub w: Vec<FieldScalar>,
}

impl SimpleTensor {
    pub fn new(u: Vec<FieldScalar>, v: Vec<FieldScalar>, w: Vec<FieldScalar>) -> SimpleTensor {
        SimpleTensor { u, v, w }
    }

    pub fn to_tensor(&self, field: Field) -> Tensor3 {
        let (a, b, c) = (self.u.len(), self.v.len(), self.w.len());
        let mut t = Tensor3::zeros(field, [a, b, c]);
        for (i, ui) in self.u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in self.v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui.mul(vj);
                for (k, wk) in self.w.iter().enumerate() {
                    if wk.is_zero() {
                        continue;
                    }
                    t.set(i, j, k, uv.mul(wk));
                }
            }
        }
        t
    }
}

/// Dense exact three-way tensor, optionally carrying a direct-sum splitting.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3 {
    dims: [usize; 3],
    field: Field,
    entries: Vec<FieldScalar>, // index i*b*c + j*c + k
    split: Option<Splitting>,
}

impl Tensor3 {
    pub fn zeros(field: Field, dims: [usize; 3]) -> Tensor3 {
        Tensor3 {
            dims,
            field,
            entries: vec![field.zero(); dims[0] * dims[1] * dims[2]],
            split: None,
        }
    }

    pub fn from_entries(
        field: Field,
        dims: [usize; 3],
        entries: Vec<FieldScalar>,
    ) -> Tensor3 {
        assert_eq!(entries.len(), dims[0] * dims[1] * dims[2], "entry count mismatch");
        assert!(entries.iter().all(|e| e.field() == field), "mixed-field entries");
        Tensor3 { dims, field, entries, split: None }
    }

    /// Sum of decomposable tensors; an explicit rank-at-most-`r` witness.
    pub fn from_simples(field: Field, dims: [usize; 3], terms: &[SimpleTensor]) -> Tensor3 {
        let mut t = Tensor3::zeros(field, dims);
        for s in terms {
            assert_eq!([s.u.len(), s.v.len(), s.w.len()], dims, "term shape mismatch");
            t = t.add(&s.to_tensor(field));
        }
        t
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim_of(&self, f: Factor) -> usize {
        match f {
            Factor::A => self.dims[0],
            Factor::B => self.dims[1],
            Factor::C => self.dims[2],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn split(&self) -> Option<&Splitting> {
        self.split.as_ref()
    }

    pub fn with_split(mut self, split: Splitting) -> Tensor3 {
        assert_eq!(split.a.0 + split.a.1, self.dims[0], "split does not match dims");
        assert_eq!(split.b.0 + split.b.1, self.dims[1], "split does not match dims");
        assert_eq!(split.c.0 + split.c.1, self.dims[2], "split does not match dims");
        self.split = Some(split);
        self
    }

    pub fn clear_split(mut self) -> Tensor3 {
        self.split = None;
        self
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &FieldScalar {
        &self.entries[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: FieldScalar) {
        assert_eq!(v.field(), self.field, "mixed-field entry");
        self.entries[(i * self.dims[1] + j) * self.dims[2] + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Structural equality of dims and entries, ignoring any splitting.
    pub fn same_entries(&self, other: &Tensor3) -> bool {
        self.dims == other.dims && self.field == other.field && self.entries == other.entries
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, other.dims, "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Tensor3 { dims: self.dims, field: self.field, entries, split: self.split }
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Tensor3 {
        let entries = self.entries.iter().map(|e| e.neg()).collect();
        Tensor3 { dims: self.dims, field: self.field, entries, split: self.split }
    }

    pub fn scale(&self, s: &FieldScalar) -> Tensor3 {
        let entries = self.entries.iter().map(|e| e.mul(s)).collect();
        Tensor3 { dims: self.dims, field: self.field, entries, split: self.split }
    }

    /// Contracts `factor` with a functional (coordinates in the dual basis).
    /// Row/column factors of the resulting matrix keep their natural order:
    /// contracting A gives a `b x c` matrix, B gives `a x c`, C gives `a x b`.
    pub fn contract(&self, factor: Factor, functional: &[FieldScalar]) -> ExactMatrix {
        let [a, b, c] = self.dims;
        assert_eq!(functional.len(), self.dim_of(factor), "functional length mismatch");
        let (rows, cols) = match factor {
            Factor::A => (b, c),
            Factor::B => (a, c),
            Factor::C => (a, b),
        };
        let mut m = ExactMatrix::zeros(self.field, rows, cols);
        for (t, ft) in functional.iter().enumerate() {
            if ft.is_zero() {
                continue;
            }
            for r in 0..rows {
                for s in 0..cols {
                    let (i, j, k) = match factor {
                        Factor::A => (t, r, s),
                        Factor::B => (r, t, s),
                        Factor::C => (r, s, t),
                    };
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        let acc = m.get(r, s).add(&ft.mul(v));
                        m.set(r, s, acc);
                    }
                }
            }
        }
        m
    }

    /// The images of the dual basis vectors under contraction: slice `t`
    /// is `contract(factor, e_t*)`.
    pub fn slices(&self, factor: Factor) -> Vec<ExactMatrix> {
        let n = self.dim_of(factor);
        (0..n)
            .map(|t| {
                let mut e = vec![self.field.zero(); n];
                e[t] = self.field.one();
                self.contract(factor, &e)
            })
            .collect()
    }

    /// The flattening matrix of a factor: rows indexed by that factor,
    /// columns by the remaining two factors flattened row-major.
    pub fn flattening(&self, factor: Factor) -> ExactMatrix {
        let slices = self.slices(factor);
        let n = self.dim_of(factor);
        let width = slices.first().map(|s| s.rows() * s.cols()).unwrap_or(0);
        let mut m = ExactMatrix::zeros(self.field, n, width);
        for (r, s) in slices.iter().enumerate() {
            for (c, v) in s.flatten().into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Rank of the factor's flattening; the dimension of the slice space.
    pub fn factor_rank(&self, factor: Factor) -> usize {
        self.flattening(factor).rank()
    }

    /// The slice space of a factor as a matrix subspace; the basis is the
    /// first maximal independent subset of the slices, so block structure
    /// of direct sums is preserved.
    pub fn slice_space(&self, factor: Factor) -> MatrixSubspace {
        let slices = self.slices(factor);
        let (rows, cols) = match factor {
            Factor::A => (self.dims[1], self.dims[2]),
            Factor::B => (self.dims[0], self.dims[2]),
            Factor::C => (self.dims[0], self.dims[1]),
        };
        MatrixSubspace::span(self.field, rows, cols, slices)
    }

    /// A tensor is concise when every flattening has full rank: no factor
    /// can be shrunk without losing the tensor.
    pub fn is_concise(&self) -> bool {
        Factor::ALL.iter().all(|&f| self.factor_rank(f) == self.dim_of(f))
    }

    /// Shrinks every factor to its minimal subspace. Returns the concise
    /// tensor `q` and the three embedding matrices `(ea, eb, ec)` (columns
    /// are the chosen bases of the minimal subspaces), so that applying the
    /// embeddings to `q` reproduces the original tensor.
    pub fn concise_reduce(&self) -> (Tensor3, [ExactMatrix; 3]) {
        let mut embeds = Vec::with_capacity(3);
        let mut inverses = Vec::with_capacity(3);
        for &factor in &Factor::ALL {
            let n = self.dim_of(factor);
            // minimal subspace of the factor = column space of its flattening
            let flat = self.flattening(factor);
            let mut chosen: Vec<usize> = Vec::new();
            let mut probe = ExactMatrix::zeros(self.field, n, 0);
            for c in 0..flat.cols() {
                let col = flat.col(c);
                let mut candidate_cols: Vec<Vec<FieldScalar>> =
                    chosen.iter().map(|&cc| flat.col(cc)).collect();
                candidate_cols.push(col);
                let cand = columns_matrix(self.field, n, &candidate_cols);
                if cand.rank() > chosen.len() {
                    chosen.push(c);
                }
                probe = cand;
            }
            let _ = probe;
            let r = chosen.len();
            // extend the chosen columns to a basis of the whole factor space
            let mut ext_cols: Vec<Vec<FieldScalar>> = chosen.iter().map(|&c| flat.col(c)).collect();
            for i in 0..n {
                let mut unit = vec![self.field.zero(); n];
                unit[i] = self.field.one();
                let mut with = ext_cols.clone();
                with.push(unit.clone());
                if columns_matrix(self.field, n, &with).rank() > ext_cols.len() {
                    ext_cols.push(unit);
                }
            }
            let full = columns_matrix(self.field, n, &ext_cols);
            let inv = full.inverse().expect("extended to a basis");
            embeds.push(full.block(0, 0, n, r));
            inverses.push((inv, r));
        }
        let (ia, ra) = &inverses[0];
        let (ib, rb) = &inverses[1];
        let (ic, rc) = &inverses[2];
        let moved = self.transform(ia, ib, ic);
        // in the new basis the tensor is supported on the leading block
        let mut q = Tensor3::zeros(self.field, [*ra, *rb, *rc]);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = moved.get(i, j, k);
                    if v.is_zero() {
                        continue;
                    }
                    assert!(
                        i < *ra && j < *rb && k < *rc,
                        "support escaped the concise block"
                    );
                    q.set(i, j, k, v.clone());
                }
            }
        }
        (q, [embeds[0].clone(), embeds[1].clone(), embeds[2].clone()])
    }

    /// Applies linear maps to the three factors: the result has dims
    /// `(ma.rows, mb.rows, mc.rows)` and entries
    /// `q[x,y,z] = sum ma[x,i] mb[y,j] mc[z,k] p[i,j,k]`.
    pub fn transform(&self, ma: &ExactMatrix, mb: &ExactMatrix, mc: &ExactMatrix) -> Tensor3 {
        let [a, b, c] = self.dims;
        assert_eq!(ma.cols(), a, "factor-A map mismatch");
        assert_eq!(mb.cols(), b, "factor-B map mismatch");
        assert_eq!(mc.cols(), c, "factor-C map mismatch");
        // contract one factor at a time
        let mut cur = Tensor3::zeros(self.field, [ma.rows(), b, c]);
        for x in 0..ma.rows() {
            for i in 0..a {
                let co = ma.get(x, i);
                if co.is_zero() {
                    continue;
                }
                for j in 0..b {
                    for k in 0..c {
                        let v = self.get(i, j, k);
                        if !v.is_zero() {
                            let acc = cur.get(x, j, k).add(&co.mul(v));
                            cur.set(x, j, k, acc);
                        }
                    }
                }
            }
        }
        let mut cur2 = Tensor3::zeros(self.field, [ma.rows(), mb.rows(), c]);
        for y in 0..mb.rows() {
            for j in 0..b {
                let co = mb.get(y, j);
                if co.is_zero() {
                    continue;
                }
                for x in 0..ma.rows() {
                    for k in 0..c {
                        let v = cur.get(x, j, k);
                        if !v.is_zero() {
                            let acc = cur2.get(x, y, k).add(&co.mul(v));
                            cur2.set(x, y, k, acc);
                        }
                    }
                }
            }
        }
        let mut out = Tensor3::zeros(self.field, [ma.rows(), mb.rows(), mc.rows()]);
        for z in 0..mc.rows() {
            for k in 0..c {
                let co = mc.get(z, k);
                if co.is_zero() {
                    continue;
                }
                for x in 0..ma.rows() {
                    for y in 0..mb.rows() {
                        let v = cur2.get(x, y, k);
                        if !v.is_zero() {
                            let acc = out.get(x, y, z).add(&co.mul(v));
                            out.set(x, y, z, acc);
                        }
                    }
                }
            }
        }
        out
    }

    /// Reorders the factors: `perm[t]` names the old factor that becomes
    /// position `t`. The splitting, if any, is carried along.
    pub fn permute(&self, perm: [Factor; 3]) -> Tensor3 {
        {
            let mut seen = [false; 3];
            for f in perm {
                seen[f.index()] = true;
            }
            assert!(seen.iter().all(|&s| s), "not a permutation of factors");
        }
        let old_dims = self.dims;
        let new_dims = [
            old_dims[perm[0].index()],
            old_dims[perm[1].index()],
            old_dims[perm[2].index()],
        ];
        let mut out = Tensor3::zeros(self.field, new_dims);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = self.get(i, j, k);
                    if v.is_zero() {
                        continue;
                    }
                    let old = [i, j, k];
                    out.set(
                        old[perm[0].index()],
                        old[perm[1].index()],
                        old[perm[2].index()],
                        v.clone(),
                    );
                }
            }
        }
        if let Some(s) = &self.split {
            let parts = [s.a, s.b, s.c];
            out.split = Some(Splitting {
                a: parts[perm[0].index()],
                b: parts[perm[1].index()],
                c: parts[perm[2].index()],
            });
        }
        out
    }

    /// Block direct sum; the splitting of the result records the summands.
    pub fn direct_sum(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.field, other.field, "mixed-field direct sum");
        let [a1, b1, c1] = self.dims;
        let [a2, b2, c2] = other.dims;
        let mut t = Tensor3::zeros(self.field, [a1 + a2, b1 + b2, c1 + c2]);
        for i in 0..a1 {
            for j in 0..b1 {
                for k in 0..c1 {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        t.set(i, j, k, v.clone());
                    }
                }
            }
        }
        for i in 0..a2 {
            for j in 0..b2 {
                for k in 0..c2 {
                    let v = other.get(i, j, k);
                    if !v.is_zero() {
                        t.set(a1 + i, b1 + j, c1 + k, v.clone());
                    }
                }
            }
        }
        t.split = Some(Splitting { a: (a1, a2), b: (b1, b2), c: (c1, c2) });
        t
    }

    /// True when the support respects the splitting's two diagonal blocks.
    pub fn is_block_diagonal(&self) -> bool {
        let Some(s) = &self.split else {
            return false;
        };
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    if self.get(i, j, k).is_zero() {
                        continue;
                    }
                    let in_first = i < s.a.0 && j < s.b.0 && k < s.c.0;
                    let in_second = i >= s.a.0 && j >= s.b.0 && k >= s.c.0;
                    if !in_first && !in_second {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The leading summand of a block-diagonal tensor.
    pub fn first_part(&self) -> Result<Tensor3> {
        let s = self.split.ok_or_else(|| Error::Precondition("tensor has no splitting".into()))?;
        if !self.is_block_diagonal() {
            return Err(Error::Precondition("tensor is not block-diagonal".into()));
        }
        let [a1, b1, c1] = s.first_dims();
        let mut t = Tensor3::zeros(self.field, [a1, b1, c1]);
        for i in 0..a1 {
            for j in 0..b1 {
                for k in 0..c1 {
                    t.set(i, j, k, self.get(i, j, k).clone());
                }
            }
        }
        Ok(t)
    }

    /// The trailing summand of a block-diagonal tensor.
    pub fn second_part(&self) -> Result<Tensor3> {
        let s = self.split.ok_or_else(|| Error::Precondition("tensor has no splitting".into()))?;
        if !self.is_block_diagonal() {
            return Err(Error::Precondition("tensor is not block-diagonal".into()));
        }
        let [a2, b2, c2] = s.second_dims();
        let mut t = Tensor3::zeros(self.field, [a2, b2, c2]);
        for i in 0..a2 {
            for j in 0..b2 {
                for k in 0..c2 {
                    t.set(i, j, k, self.get(s.a.0 + i, s.b.0 + j, s.c.0 + k).clone());
                }
            }
        }
        Ok(t)
    }

    /// The matrix multiplication tensor for `i x j` times `j x k` matrices,
    /// with dims `(i*j, j*k, i*k)`.
    pub fn mm_tensor(field: Field, i: usize, j: usize, k: usize) -> Tensor3 {
        let mut t = Tensor3::zeros(field, [i * j, j * k, i * k]);
        for s in 0..i {
            for u in 0..j {
                for v in 0..k {
                    t.set(s * j + u, u * k + v, s * k + v, field.one());
                }
            }
        }
        t
    }

    /// The diagonal tensor with `n` ones: rank exactly `n` over any field.
    pub fn diagonal(field: Field, n: usize) -> Tensor3 {
        let mut t = Tensor3::zeros(field, [n, n, n]);
        for i in 0..n {
            t.set(i, i, i, field.one());
        }
        t
    }

    /// The 2x2x2 tensor with ones at (0,0,1), (0,1,0), (1,0,0): border rank
    /// two but rank three; the smallest gap between the two notions.
    pub fn w_state(field: Field) -> Tensor3 {
        let mut t = Tensor3::zeros(field, [2, 2, 2]);
        t.set(0, 0, 1, field.one());
        t.set(0, 1, 0, field.one());
        t.set(1, 0, 0, field.one());
        t
    }

    /// Uniformly random entries: over GF(p) uniform residues, over Q small
    /// integers in `-3..=3`.
    pub fn random<R: Rng>(field: Field, dims: [usize; 3], rng: &mut R) -> Tensor3 {
        let n = dims[0] * dims[1] * dims[2];
        let entries: Vec<FieldScalar> = (0..n).map(|_| random_scalar(field, rng)).collect();
        Tensor3 { dims, field, entries, split: None }
    }

    /// A random sum of `r` random decomposable tensors: rank at most `r`
    /// by construction, with the witness returned alongside.
    pub fn random_sum_of_simples<R: Rng>(
        field: Field,
        dims: [usize; 3],
        r: usize,
        rng: &mut R,
    ) -> (Tensor3, Vec<SimpleTensor>) {
        let terms: Vec<SimpleTensor> = (0..r)
            .map(|_| {
                SimpleTensor::new(
                    random_vector(field, dims[0], rng),
                    random_vector(field, dims[1], rng),
                    random_vector(field, dims[2], rng),
                )
            })
            .collect();
        (Tensor3::from_simples(field, dims, &terms), terms)
    }
}

pub fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> FieldScalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

pub fn random_vector<R: Rng>(field: Field, len: usize, rng: &mut R) -> Vec<FieldScalar> {
    (0..len).map(|_| random_scalar(field, rng)).collect()
}

fn columns_matrix(field: Field, rows: usize, cols: &[Vec<FieldScalar>]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Tensor3 {}x{}x{} over {}",
            self.dims[0], self.dims[1], self.dims[2], self.field
        )?;
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        writeln!(f, "  [{}, {}, {}] = {}", i, j, k, v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn slices_of_matrix_multiplication() {
        // 1x2 times 2x1 contracts over C to the 2x2 identity
        let t = Tensor3::mm_tensor(q(), 1, 2, 1);
        assert_eq!(t.dims(), [2, 2, 1]);
        let slices = t.slices(Factor::C);
        assert_eq!(slices.len(), 1);
        assert_eq!(slices[0], ExactMatrix::identity(q(), 2));
    }

    #[test]
    fn slice_space_dimension_bounded_by_factor() {
        let t = Tensor3::diagonal(q(), 3);
        for f in Factor::ALL {
            let w = t.slice_space(f);
            assert_eq!(w.dim(), 3);
            assert!(w.dim() <= t.dim_of(f));
        }
        assert!(t.is_concise());
    }

    #[test]
    fn w_state_slice_space_matches_known_basis() {
        let t = Tensor3::w_state(q());
        let w = t.slice_space(Factor::A);
        assert_eq!(w.dim(), 2);
        // slice 0 = e1 (x) e2 + e2 (x) e1, slice 1 = e1 (x) e1
        let s0 = ExactMatrix::from_i64(q(), &[&[0, 1], &[1, 0]]);
        let s1 = ExactMatrix::from_i64(q(), &[&[1, 0], &[0, 0]]);
        assert!(w.contains(&s0));
        assert!(w.contains(&s1));
    }

    #[test]
    fn conciseness_detects_padded_tensor() {
        let mut t = Tensor3::zeros(q(), [3, 2, 2]);
        t.set(0, 0, 0, q().one());
        t.set(1, 1, 1, q().one());
        assert!(!t.is_concise()); // A-factor uses only two directions
        let (r, embeds) = t.concise_reduce();
        assert_eq!(r.dims(), [2, 2, 2]);
        assert!(r.is_concise());
        let back = r.transform(&embeds[0], &embeds[1], &embeds[2]);
        assert!(back.same_entries(&t));
    }

    #[test]
    fn concise_reduce_keeps_random_tensors_intact() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = Tensor3::random(f, [3, 2, 4], &mut rng);
            let (r, embeds) = t.concise_reduce();
            let back = r.transform(&embeds[0], &embeds[1], &embeds[2]);
            assert!(back.same_entries(&t));
            assert!(r.is_concise());
        }
    }

    #[test]
    fn direct_sum_blocks_and_parts() {
        let p = Tensor3::diagonal(q(), 2);
        let r = Tensor3::w_state(q());
        let s = p.direct_sum(&r);
        assert_eq!(s.dims(), [4, 4, 4]);
        assert!(s.is_block_diagonal());
        assert!(s.first_part().unwrap().same_entries(&p));
        assert!(s.second_part().unwrap().same_entries(&r));
    }

    #[test]
    fn direct_sum_with_zero_summand_is_identity() {
        let p = Tensor3::diagonal(q(), 2);
        let z = Tensor3::zeros(q(), [0, 0, 0]);
        let s = p.direct_sum(&z);
        assert!(s.same_entries(&p));
        let s2 = z.direct_sum(&p);
        assert!(s2.same_entries(&p));
    }

    #[test]
    fn permute_is_invertible_and_tracks_split() {
        let p = Tensor3::mm_tensor(q(), 1, 2, 3).direct_sum(&Tensor3::diagonal(q(), 1));
        let perm = [Factor::C, Factor::A, Factor::B];
        let t = p.permute(perm);
        assert_eq!(t.dims()[0], p.dims()[2]);
        let back = t.permute([Factor::B, Factor::C, Factor::A]);
        assert_eq!(back, p);
    }

    #[test]
    fn contract_matches_flattening_rank() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = Tensor3::random(f, [2, 3, 2], &mut rng);
        for factor in Factor::ALL {
            assert_eq!(t.factor_rank(factor), t.slice_space(factor).dim());
        }
    }

    #[test]
    fn mm_tensor_has_expected_support() {
        let t = Tensor3::mm_tensor(q(), 2, 2, 2);
        assert_eq!(t.dims(), [4, 4, 4]);
        let ones = (0..4)
            .flat_map(|i| (0..4).flat_map(move |j| (0..4).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| !t.get(i, j, k).is_zero())
            .count();
        assert_eq!(ones, 8); // i*j*k unit entries
    }

    #[test]
    fn simple_tensor_expands_to_outer_product() {
        let f = q();
        let s = SimpleTensor::new(
            vec![f.from_i64(1), f.from_i64(2)],
            vec![f.from_i64(1), f.from_i64(0)],
            vec![f.from_i64(3)],
        );
        let t = s.to_tensor(f);
        assert_eq!(t.get(1, 0, 0), &f.from_i64(6));
        assert_eq!(t.get(1, 1, 0), &f.zero());
    }
}
