//! Rank certification for three-way tensors.
//!
//! Over a finite field [`tensor_rank`] is an exact decision procedure: it
//! reduces the tensor to its concise core, contracts away the largest
//! factor, and runs the catalog search of [`search`] on the resulting
//! matrix subspace. A successful search is turned back into an explicit
//! decomposition of the input tensor, which is re-expanded and compared
//! entry by entry before the certificate is issued. Over the rationals the
//! engine reports a certified interval instead (see [`rank_interval`]).

pub mod additivity;
pub mod hookprove;
pub mod search;
pub mod substitution;

use serde::Serialize;

use crate::exactalg::{ExactMatrix, Field, FieldScalar};
use crate::tensor3::{permutation_with_first, Factor, MatrixSubspace, SimpleTensor, Tensor3};
use crate::{Error, Result};

use search::{min_spanning, RankOneCatalog, SearchResult};

/// What a certificate claims about the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    /// `value` is the rank, witnessed by a decomposition or an exhausted
    /// search one level below.
    Exact,
    /// the rank is at least `value`
    Lower,
    /// the rank is at most `value`, witnessed by a decomposition
    Upper,
}

/// A rank claim together with the evidence backing it.
#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub kind: CertKind,
    pub value: usize,
    /// how the claim was established, e.g. `"catalog-search"` or `"slice-dim"`
    pub method: String,
    /// an explicit decomposition when the claim includes an upper bound
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<SimpleTensor>>,
}

impl RankCertificate {
    pub fn exact(value: usize, method: &str, witness: Option<Vec<SimpleTensor>>) -> Self {
        RankCertificate { kind: CertKind::Exact, value, method: method.into(), witness }
    }

    pub fn lower(value: usize, method: &str) -> Self {
        RankCertificate { kind: CertKind::Lower, value, method: method.into(), witness: None }
    }

    pub fn upper(value: usize, method: &str, witness: Vec<SimpleTensor>) -> Self {
        RankCertificate {
            kind: CertKind::Upper,
            value,
            method: method.into(),
            witness: Some(witness),
        }
    }
}

/// Least number of rank-one matrices spanning a space that contains `w`,
/// searched up to `budget`. Returns an exact certificate with matrix
/// witnesses encoded as simple tensors `u (x) v (x) 1`, or a lower
/// certificate `budget + 1` when the search exhausts.
pub fn rank_exact_ff(w: &MatrixSubspace, budget: usize, threads: usize) -> Result<(RankCertificate, Vec<ExactMatrix>)> {
    let catalog = RankOneCatalog::get(w.field(), w.rows(), w.cols())?;
    match min_spanning(&catalog, w, budget, threads) {
        SearchResult::Found { r, witness } => {
            let mats: Vec<ExactMatrix> = witness.iter().map(|&i| catalog.matrix(i)).collect();
            for m in &mats {
                debug_assert_eq!(m.rank(), 1);
            }
            let cert = RankCertificate::exact(r, "catalog-search", None);
            Ok((cert, mats))
        }
        SearchResult::Exhausted { budget } => {
            Ok((RankCertificate::lower(budget + 1, "catalog-search-exhausted"), Vec::new()))
        }
    }
}

/// Default search budget for a matrix subspace: the ambient dimension
/// `rows * cols` always suffices, since the unit matrices span everything.
pub fn default_budget(rows: usize, cols: usize) -> usize {
    rows * cols
}

/// Exact tensor rank over a finite field, with a verified decomposition.
///
/// `budget` caps the search (defaults to a always-sufficient bound); if the
/// cap is hit the result is a lower certificate of `budget + 1` without a
/// witness. `threads > 1` parallelizes the top search level; certificates
/// do not depend on the worker count.
pub fn tensor_rank(p: &Tensor3, budget: Option<usize>, threads: usize) -> Result<RankCertificate> {
    if p.field() == Field::Rational {
        return Err(Error::NeedsFiniteField);
    }
    if p.is_zero() {
        return Ok(RankCertificate::exact(0, "zero-tensor", Some(Vec::new())));
    }
    let (core, embed) = p.concise_reduce();
    // contract away the largest factor so the catalog lives in the smallest
    // ambient space
    let dims = core.dims();
    let factor = Factor::ALL[(0..3).max_by_key(|&i| dims[i]).unwrap()];
    let perm = permutation_with_first(factor);
    let q = core.permute(perm);
    let [_, rows, cols] = q.dims();
    let w = q.slice_space(Factor::A);
    let budget = budget.unwrap_or_else(|| default_budget(rows, cols));
    let (cert, mats) = rank_exact_ff(&w, budget, threads)?;
    if cert.kind != CertKind::Exact {
        return Ok(cert);
    }
    let witness = lift_witness(&q, &mats)?;
    let witness = unpermute_witness(witness, perm);
    let witness: Vec<SimpleTensor> = witness
        .into_iter()
        .map(|s| SimpleTensor {
            u: embed[0].mul_vec(&s.u),
            v: embed[1].mul_vec(&s.v),
            w: embed[2].mul_vec(&s.w),
        })
        .collect();
    let check = Tensor3::from_simples(p.field(), p.dims(), &witness);
    if !check.same_entries(p) {
        return Err(Error::Precondition("lifted witness does not reproduce the tensor".into()));
    }
    Ok(RankCertificate::exact(cert.value, "catalog-search", Some(witness)))
}

/// `true` when the rank is provably at most `r` (finite field).
pub fn tensor_rank_at_most(p: &Tensor3, r: usize, threads: usize) -> Result<bool> {
    Ok(tensor_rank(p, Some(r), threads)?.kind == CertKind::Exact)
}

/// Expresses `q` as a sum of simple tensors whose B/C parts are the given
/// spanning rank-one matrices: each A-slice is solved for its coordinates
/// in the span, and the coordinates of slice `i` become entry `i` of the
/// A-vector of the corresponding simple tensor.
fn lift_witness(q: &Tensor3, mats: &[ExactMatrix]) -> Result<Vec<SimpleTensor>> {
    let field = q.field();
    let [a, rows, cols] = q.dims();
    let span = MatrixSubspace::new(field, rows, cols, mats.to_vec())?;
    let mut coords = Vec::with_capacity(a);
    for slice in q.slices(Factor::A) {
        let c = span
            .coordinates(&slice)
            .ok_or_else(|| Error::Precondition("witness span misses a slice".into()))?;
        coords.push(c);
    }
    let mut out = Vec::with_capacity(mats.len());
    for (t, m) in mats.iter().enumerate() {
        let u: Vec<FieldScalar> = (0..a).map(|i| coords[i][t].clone()).collect();
        let (mu, mv) = m
            .rank_one_factor()
            .ok_or_else(|| Error::Precondition("catalog matrix is not rank one".into()))?;
        out.push(SimpleTensor { u, v: mu, w: mv });
    }
    Ok(out)
}

/// Reorders each simple tensor's parts from permuted factor order back to
/// `(A, B, C)`: part `t` of the permuted tensor belongs to factor `perm[t]`.
fn unpermute_witness(witness: Vec<SimpleTensor>, perm: [Factor; 3]) -> Vec<SimpleTensor> {
    witness
        .into_iter()
        .map(|s| {
            let parts = [s.u, s.v, s.w];
            let mut slots: [Option<Vec<FieldScalar>>; 3] = [None, None, None];
            for (t, part) in parts.into_iter().enumerate() {
                slots[perm[t].index()] = Some(part);
            }
            let [u, v, w] = slots;
            SimpleTensor { u: u.unwrap(), v: v.unwrap(), w: w.unwrap() }
        })
        .collect()
}

/// Largest flattening rank: a lower bound for rank and border rank over any
/// field, since every flattening of a simple tensor has rank one.
pub fn rank_lower_bound(p: &Tensor3) -> RankCertificate {
    let value = Factor::ALL
        .iter()
        .map(|&f| p.factor_rank(f))
        .max()
        .unwrap_or(0);
    RankCertificate::lower(value, "slice-dim")
}

/// Decomposes a matrix into `rank` rank-one terms by pivoting its reduced
/// echelon form: `m = sum (pivot column of m) (x) (echelon row)`.
fn rank_one_terms(m: &ExactMatrix) -> Vec<(Vec<FieldScalar>, Vec<FieldScalar>)> {
    let (r, pivots) = m.rref();
    pivots
        .iter()
        .enumerate()
        .map(|(t, &pc)| (m.col(pc), r.row(t)))
        .collect()
}

/// Certified rank interval over any field: the lower end is the largest
/// flattening rank, the upper end the best sum of slice ranks over the
/// three factors of the concise core, witnessed by an explicit
/// decomposition.
pub fn rank_interval(p: &Tensor3) -> Result<(RankCertificate, RankCertificate)> {
    let lower = rank_lower_bound(p);
    if p.is_zero() {
        return Ok((lower, RankCertificate::upper(0, "slice-sum", Vec::new())));
    }
    let (core, embed) = p.concise_reduce();
    let mut best: Option<(usize, Factor)> = None;
    for &f in &Factor::ALL {
        let total: usize = core.slices(f).iter().map(|s| s.rank()).sum();
        if best.map_or(true, |(b, _)| total < b) {
            best = Some((total, f));
        }
    }
    let (value, factor) = best.unwrap();
    let perm = permutation_with_first(factor);
    let q = core.permute(perm);
    let a = q.dims()[0];
    let mut witness = Vec::new();
    for (i, slice) in q.slices(Factor::A).into_iter().enumerate() {
        for (u, v) in rank_one_terms(&slice) {
            let mut e = vec![q.field().zero(); a];
            e[i] = q.field().one();
            witness.push(SimpleTensor { u: e, v: u, w: v });
        }
    }
    let witness = unpermute_witness(witness, perm);
    let witness: Vec<SimpleTensor> = witness
        .into_iter()
        .map(|s| SimpleTensor {
            u: embed[0].mul_vec(&s.u),
            v: embed[1].mul_vec(&s.v),
            w: embed[2].mul_vec(&s.w),
        })
        .collect();
    let check = Tensor3::from_simples(p.field(), p.dims(), &witness);
    if !check.same_entries(p) {
        return Err(Error::Precondition("slice decomposition does not reproduce the tensor".into()));
    }
    debug_assert_eq!(witness.len(), value);
    Ok((lower, RankCertificate::upper(value, "slice-sum", witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn diagonal_rank_is_dimension() {
        for n in 1..=3 {
            let t = Tensor3::diagonal(gf2(), n);
            let cert = tensor_rank(&t, None, 1).unwrap();
            assert_eq!(cert.kind, CertKind::Exact);
            assert_eq!(cert.value, n);
            let w = cert.witness.unwrap();
            assert_eq!(w.len(), n);
        }
    }

    #[test]
    fn w_state_rank_three_over_gf2() {
        let t = Tensor3::w_state(gf2());
        let cert = tensor_rank(&t, None, 1).unwrap();
        assert_eq!(cert.kind, CertKind::Exact);
        assert_eq!(cert.value, 3);
        let w = cert.witness.unwrap();
        let back = Tensor3::from_simples(gf2(), t.dims(), &w);
        assert!(back.same_entries(&t));
    }

    #[test]
    fn mm_121_rank_two() {
        // the 1x2 * 2x1 product tensor is the diagonal of size 2 up to layout
        let t = Tensor3::mm_tensor(gf2(), 1, 2, 1);
        let cert = tensor_rank(&t, None, 1).unwrap();
        assert_eq!((cert.kind, cert.value), (CertKind::Exact, 2));
    }

    #[test]
    fn budget_exhaustion_gives_lower_certificate() {
        let t = Tensor3::diagonal(gf2(), 3);
        let cert = tensor_rank(&t, Some(2), 1).unwrap();
        assert_eq!(cert.kind, CertKind::Lower);
        assert_eq!(cert.value, 3);
        assert!(cert.witness.is_none());
    }

    #[test]
    fn lower_bound_is_flattening_rank() {
        let t = Tensor3::w_state(gf2());
        let cert = rank_lower_bound(&t);
        assert_eq!((cert.kind, cert.value), (CertKind::Lower, 2));
    }

    #[test]
    fn rational_interval_for_w_state() {
        let t = Tensor3::w_state(Field::Rational);
        let (lo, hi) = rank_interval(&t).unwrap();
        assert_eq!(lo.value, 2);
        assert_eq!(hi.value, 3);
        let w = hi.witness.unwrap();
        let back = Tensor3::from_simples(Field::Rational, t.dims(), &w);
        assert!(back.same_entries(&t));
    }

    #[test]
    fn rational_interval_closes_for_diagonal() {
        let t = Tensor3::diagonal(Field::Rational, 3);
        let (lo, hi) = rank_interval(&t).unwrap();
        assert_eq!(lo.value, 3);
        assert_eq!(hi.value, 3);
    }

    #[test]
    fn rank_rejects_rationals() {
        let t = Tensor3::diagonal(Field::Rational, 2);
        assert!(matches!(tensor_rank(&t, None, 1), Err(Error::NeedsFiniteField)));
    }

    #[test]
    fn padded_tensor_rank_matches_core() {
        // embed diag_2 into a 4x3x3 ambient space; conciseness reduction
        // must bring the search back to the 2x2x2 core
        let f = Field::prime(3).unwrap();
        let mut t = Tensor3::zeros(f, [4, 3, 3]);
        t.set(1, 2, 1, f.one());
        t.set(3, 0, 0, f.one());
        let cert = tensor_rank(&t, None, 1).unwrap();
        assert_eq!((cert.kind, cert.value), (CertKind::Exact, 2));
        let back = Tensor3::from_simples(f, t.dims(), &cert.witness.unwrap());
        assert!(back.same_entries(&t));
    }
}
