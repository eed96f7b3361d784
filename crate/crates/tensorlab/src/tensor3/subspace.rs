//! Linear subspaces of a matrix space `B (x) C`, with the operations the
//! rank and additivity machinery needs: membership, sums, intersections,
//! exhaustive point enumeration over finite fields, and hook profiles.
//!
//! A space is *`(e, f)`-hook-shaped* if it fits inside
//! `E (x) C + B (x) F` for some subspaces `E` of dimension `e` and `F` of
//! dimension `f`; small hooks make the substitution method work.

use crate::exactalg::{ExactMatrix, Field, FieldScalar, VecSpace};
use crate::{Error, Result};

/// A subspace of `rows x cols` matrices, stored as an explicit basis plus a
/// reduced echelon form for fast membership tests. The basis vectors are the
/// caller's matrices (not echelon combinations), which keeps structure such
/// as block-diagonal slices visible.
#[derive(Clone, Debug)]
pub struct MatrixSubspace {
    rows: usize,
    cols: usize,
    field: Field,
    basis: Vec<ExactMatrix>,
    space: VecSpace,
}

impl MatrixSubspace {
    /// Wraps an explicit basis; rejects linearly dependent input.
    pub fn new(field: Field, rows: usize, cols: usize, basis: Vec<ExactMatrix>) -> Result<MatrixSubspace> {
        let mut space = VecSpace::new(field, rows * cols);
        for m in &basis {
            assert_eq!((m.rows(), m.cols()), (rows, cols), "ambient shape mismatch");
            assert_eq!(m.field(), field, "mixed-field basis");
            if !space.insert(m.flatten()) {
                return Err(Error::DependentBasis);
            }
        }
        Ok(MatrixSubspace { rows, cols, field, basis, space })
    }

    /// Spans a (possibly dependent) family, keeping the first maximal
    /// independent subfamily as the basis.
    pub fn span(
        field: Field,
        rows: usize,
        cols: usize,
        mats: impl IntoIterator<Item = impl std::borrow::Borrow<ExactMatrix>>,
    ) -> MatrixSubspace {
        let mut space = VecSpace::new(field, rows * cols);
        let mut basis = Vec::new();
        for m in mats {
            let m = m.borrow();
            assert_eq!((m.rows(), m.cols()), (rows, cols), "ambient shape mismatch");
            if space.insert(m.flatten()) {
                basis.push(m.clone());
            }
        }
        MatrixSubspace { rows, cols, field, basis, space }
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> MatrixSubspace {
        MatrixSubspace {
            rows,
            cols,
            field,
            basis: Vec::new(),
            space: VecSpace::new(field, rows * cols),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[ExactMatrix] {
        &self.basis
    }

    pub fn contains(&self, m: &ExactMatrix) -> bool {
        assert_eq!((m.rows(), m.cols()), (self.rows, self.cols), "ambient shape mismatch");
        self.space.contains(&m.flatten())
    }

    /// Coefficients of `m` in the stored basis, if it lies in the space.
    pub fn coordinates(&self, m: &ExactMatrix) -> Option<Vec<FieldScalar>> {
        // reduce against echelon form, then solve in terms of the basis
        if !self.contains(m) {
            return None;
        }
        let mut sys = ExactMatrix::zeros(self.field, self.rows * self.cols, self.basis.len());
        for (c, b) in self.basis.iter().enumerate() {
            for (r, v) in b.flatten().into_iter().enumerate() {
                sys.set(r, c, v);
            }
        }
        sys.solve(&m.flatten())
    }

    pub fn sum(&self, other: &MatrixSubspace) -> MatrixSubspace {
        assert_eq!(self.ambient(), other.ambient(), "ambient shape mismatch");
        MatrixSubspace::span(
            self.field,
            self.rows,
            self.cols,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection via the kernel of the stacked coefficient system.
    pub fn intersect(&self, other: &MatrixSubspace) -> MatrixSubspace {
        assert_eq!(self.ambient(), other.ambient(), "ambient shape mismatch");
        let m = self.basis.len();
        let n = other.basis.len();
        if m == 0 || n == 0 {
            return MatrixSubspace::zero(self.field, self.rows, self.cols);
        }
        // columns: our basis, then the negated other basis
        let len = self.rows * self.cols;
        let mut sys = ExactMatrix::zeros(self.field, len, m + n);
        for (c, b) in self.basis.iter().enumerate() {
            for (r, v) in b.flatten().into_iter().enumerate() {
                sys.set(r, c, v);
            }
        }
        for (c, b) in other.basis.iter().enumerate() {
            for (r, v) in b.flatten().into_iter().enumerate() {
                sys.set(r, m + c, v.neg());
            }
        }
        let mut mats = Vec::new();
        for k in sys.kernel_basis() {
            let mut acc = ExactMatrix::zeros(self.field, self.rows, self.cols);
            for (c, b) in self.basis.iter().enumerate() {
                if !k[c].is_zero() {
                    acc = acc.add(&b.scale(&k[c]));
                }
            }
            mats.push(acc);
        }
        MatrixSubspace::span(self.field, self.rows, self.cols, mats)
    }

    /// Dimension of the image of this space in the quotient by `other`.
    pub fn quotient_dim(&self, other: &MatrixSubspace) -> usize {
        self.dim() - self.intersect(other).dim()
    }

    /// All points of the projective space of this subspace: one nonzero
    /// representative per line, coefficients normalized so that the first
    /// nonzero coordinate (in basis order) is one. Finite fields only.
    pub fn projective_points(&self) -> Result<Vec<ExactMatrix>> {
        let coeffs = projective_coefficients(self.field, self.dim())?;
        Ok(coeffs
            .into_iter()
            .map(|lambda| {
                let mut acc = ExactMatrix::zeros(self.field, self.rows, self.cols);
                for (c, b) in lambda.iter().zip(&self.basis) {
                    if !c.is_zero() {
                        acc = acc.add(&b.scale(c));
                    }
                }
                acc
            })
            .collect())
    }

    /// The rank-one points of the projective space (finite fields only);
    /// this is an exhaustive, certified enumeration.
    pub fn rank_one_points(&self) -> Result<Vec<ExactMatrix>> {
        Ok(self
            .projective_points()?
            .into_iter()
            .filter(|m| m.rank() == 1)
            .collect())
    }

    /// Least `f` such that the space is `(e, f)`-hook-shaped, over all
    /// `e`-dimensional subspaces `E`. Over finite fields the search over
    /// `E` is exhaustive; over the rationals only coordinate subspaces are
    /// tried, so the result is an upper bound there.
    pub fn min_hook_f(&self, e: usize) -> Result<usize> {
        let mut best = None;
        for ebasis in candidate_subspaces(self.field, self.rows, e)? {
            let f = self.min_f_for_e(&ebasis);
            best = Some(best.map_or(f, |b: usize| b.min(f)));
        }
        best.ok_or_else(|| Error::Precondition(format!("no {e}-dimensional subspaces in dimension {}", self.rows)))
    }

    /// Decides `(e, f)`-hook-shapedness and returns witnesses `(E, F)`:
    /// `E` spanned by `e` row-side vectors, `F` by `f` column-side vectors.
    /// The minimal `F` for the found `E` is extended to dimension exactly
    /// `f` with unit vectors.
    pub fn find_hook(&self, e: usize, f: usize) -> Result<Option<HookWitness>> {
        for ebasis in candidate_subspaces(self.field, self.rows, e)? {
            let fmin = self.min_f_space_for_e(&ebasis);
            if fmin.dim() <= f {
                let mut fspace = fmin;
                for i in 0..self.cols {
                    if fspace.dim() == f {
                        break;
                    }
                    let mut unit = vec![self.field.zero(); self.cols];
                    unit[i] = self.field.one();
                    fspace.insert(unit);
                }
                if fspace.dim() < f {
                    // ambient too small to pad; only possible when f > cols
                    continue;
                }
                return Ok(Some(HookWitness {
                    e_basis: ebasis,
                    f_basis: fspace.basis().to_vec(),
                }));
            }
        }
        Ok(None)
    }

    pub fn is_hook_shaped(&self, e: usize, f: usize) -> Result<bool> {
        Ok(self.find_hook(e, f)?.is_some())
    }

    fn min_f_for_e(&self, ebasis: &[Vec<FieldScalar>]) -> usize {
        self.min_f_space_for_e(ebasis).dim()
    }

    /// Given `E` (rows spanning it), the minimal `F` with the space inside
    /// `E (x) C + B (x) F`: quotient the row side by `E` and collect what is
    /// left of the columns.
    fn min_f_space_for_e(&self, ebasis: &[Vec<FieldScalar>]) -> VecSpace {
        let quot = quotient_map(self.field, self.rows, ebasis);
        let mut fspace = VecSpace::new(self.field, self.cols);
        for m in &self.basis {
            let residue = quot.mul(m);
            for r in 0..residue.rows() {
                fspace.insert(residue.row(r));
            }
        }
        fspace
    }
}

/// Witness subspaces for a hook shape: the space fits inside
/// `span(e_basis) (x) C + B (x) span(f_basis)`.
#[derive(Clone, Debug)]
pub struct HookWitness {
    pub e_basis: Vec<Vec<FieldScalar>>,
    pub f_basis: Vec<Vec<FieldScalar>>,
}

/// A full-rank map `k^n -> k^(n-e)` whose kernel is exactly the span of
/// `ebasis`: rows are a basis of the annihilator.
pub fn quotient_map(field: Field, n: usize, ebasis: &[Vec<FieldScalar>]) -> ExactMatrix {
    let e = ebasis.len();
    let mut m = ExactMatrix::zeros(field, e, n);
    for (r, v) in ebasis.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            m.set(r, c, x.clone());
        }
    }
    let ker = m.kernel_basis();
    assert_eq!(ker.len(), n - e, "ebasis must be independent");
    let mut q = ExactMatrix::zeros(field, n - e, n);
    for (r, v) in ker.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            q.set(r, c, x.clone());
        }
    }
    q
}

/// All coefficient vectors of projective points of a `d`-dimensional space:
/// first nonzero coordinate normalized to one, lexicographic order.
pub fn projective_coefficients(field: Field, d: usize) -> Result<Vec<Vec<FieldScalar>>> {
    let elements = field.elements()?;
    let mut out = Vec::new();
    for lead in 0..d {
        // coefficients: zeros before `lead`, one at `lead`, arbitrary after
        let tail = d - lead - 1;
        let mut idx = vec![0usize; tail];
        loop {
            let mut v = vec![field.zero(); d];
            v[lead] = field.one();
            for (t, &i) in idx.iter().enumerate() {
                v[lead + 1 + t] = elements[i].clone();
            }
            out.push(v);
            // odometer
            let mut t = tail;
            loop {
                if t == 0 {
                    break;
                }
                t -= 1;
                idx[t] += 1;
                if idx[t] < elements.len() {
                    break;
                }
                idx[t] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// All `e`-dimensional subspaces of `k^n`, each as a basis in reduced row
/// echelon form. Exhaustive over finite fields; over the rationals falls
/// back to the coordinate subspaces only.
pub fn candidate_subspaces(field: Field, n: usize, e: usize) -> Result<Vec<Vec<Vec<FieldScalar>>>> {
    if e > n {
        return Ok(Vec::new());
    }
    if e == 0 {
        return Ok(vec![Vec::new()]);
    }
    match field {
        Field::Rational => {
            // coordinate subspaces: spans of e unit vectors
            let mut out = Vec::new();
            for combo in combinations(n, e) {
                let basis = combo
                    .iter()
                    .map(|&i| {
                        let mut v = vec![field.zero(); n];
                        v[i] = field.one();
                        v
                    })
                    .collect();
                out.push(basis);
            }
            Ok(out)
        }
        Field::Prime(_) => {
            let elements = field.elements()?;
            let mut out = Vec::new();
            for pivots in combinations(n, e) {
                // free positions: (row r, col c) with c > pivots[r], c not a pivot
                let mut free = Vec::new();
                for r in 0..e {
                    for c in pivots[r] + 1..n {
                        if !pivots.contains(&c) {
                            free.push((r, c));
                        }
                    }
                }
                let mut idx = vec![0usize; free.len()];
                loop {
                    let mut basis = vec![vec![field.zero(); n]; e];
                    for r in 0..e {
                        basis[r][pivots[r]] = field.one();
                    }
                    for (t, &(r, c)) in free.iter().enumerate() {
                        basis[r][c] = elements[idx[t]].clone();
                    }
                    out.push(basis);
                    let mut t = free.len();
                    loop {
                        if t == 0 {
                            break;
                        }
                        t -= 1;
                        idx[t] += 1;
                        if idx[t] < elements.len() {
                            break;
                        }
                        idx[t] = 0;
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
            Ok(out)
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
