//! Exact rank of a matrix subspace over a finite field.
//!
//! The rank of a tensor equals the least number of rank-one matrices whose
//! span contains its slice space `W`. The search enumerates the projective
//! rank-one matrices of the ambient space once per `(rows, cols, q)` in a
//! fixed lexicographic order, then runs an iterative-deepening depth-first
//! search over ascending candidate sequences. A branch dies when the image
//! of `W` in the quotient by the current span needs more new directions
//! than there are picks left; when the two numbers are equal, only
//! candidates that actually lower that image's dimension are tried.
//!
//! Every candidate added must be independent of the current span (minimal
//! spanning sets are independent), so the state is a pair of echelon bases:
//! the span so far and the residues of `W` modulo it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::exactalg::{ExactMatrix, Field, FieldScalar};
use crate::tensor3::projective_coefficients;
use crate::tensor3::MatrixSubspace;
use crate::Result;

/// One projective rank-one matrix `u vᵀ`, stored flattened (row-major) with
/// its generators; residues are `u32`, the modulus fits in 31 bits.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub flat: Vec<u32>,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

/// The full list of projective rank-one `rows x cols` matrices over GF(p),
/// sorted lexicographically by flattened entries.
#[derive(Clone, Debug)]
pub struct RankOneCatalog {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub entries: Arc<Vec<CatalogEntry>>,
}

fn scalar_residue(s: &FieldScalar) -> u32 {
    match s {
        FieldScalar::Prime { value, .. } => *value as u32,
        FieldScalar::Rational(_) => panic!("finite-field residue expected"),
    }
}

static CATALOG_CACHE: OnceLock<Mutex<HashMap<(usize, usize, u64), Arc<Vec<CatalogEntry>>>>> =
    OnceLock::new();

impl RankOneCatalog {
    /// Builds (or fetches from the per-process cache) the catalog for the
    /// given ambient shape and field.
    pub fn get(field: Field, rows: usize, cols: usize) -> Result<RankOneCatalog> {
        let p = field.order().ok_or(crate::Error::NeedsFiniteField)?;
        let cache = CATALOG_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let guard = cache.lock().unwrap();
            if let Some(entries) = guard.get(&(rows, cols, p)) {
                return Ok(RankOneCatalog { field, rows, cols, entries: entries.clone() });
            }
        }
        let mut entries = Vec::new();
        let us = projective_coefficients(field, rows)?;
        let vs = projective_coefficients(field, cols)?;
        for u in &us {
            let ur: Vec<u32> = u.iter().map(scalar_residue).collect();
            for v in &vs {
                let vr: Vec<u32> = v.iter().map(scalar_residue).collect();
                let mut flat = Vec::with_capacity(rows * cols);
                for &a in &ur {
                    for &b in &vr {
                        flat.push(((a as u64 * b as u64) % p) as u32);
                    }
                }
                entries.push(CatalogEntry { flat, u: ur.clone(), v: vr });
            }
        }
        entries.sort_by(|a, b| a.flat.cmp(&b.flat));
        let entries = Arc::new(entries);
        cache
            .lock()
            .unwrap()
            .insert((rows, cols, p), entries.clone());
        Ok(RankOneCatalog { field, rows, cols, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn matrix(&self, idx: usize) -> ExactMatrix {
        let e = &self.entries[idx];
        let field = self.field;
        let flat = e.flat.iter().map(|&x| field.from_i64(x as i64)).collect();
        ExactMatrix::from_flat(field, self.rows, self.cols, flat)
    }
}

/// Echelon basis over GF(p) with back-substitution: rows are pivot-one and
/// mutually reduced, so a single reduction pass decides membership.
#[derive(Clone)]
struct FfBasis {
    p: u64,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl FfBasis {
    fn new(p: u64) -> FfBasis {
        FfBasis { p, rows: Vec::new(), pivots: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                sub_scaled(v, row, c, self.p);
            }
        }
    }

    /// Inserts after reduction; returns the normalized stored row, or
    /// `None` if the vector was dependent.
    fn insert(&mut self, mut v: Vec<u32>) -> Option<Vec<u32>> {
        self.reduce(&mut v);
        let piv = v.iter().position(|&x| x != 0)?;
        let inv = mod_inv(v[piv] as u64, self.p);
        for x in v.iter_mut() {
            *x = ((*x as u64 * inv) % self.p) as u32;
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                sub_scaled(row, &v, c, self.p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v.clone());
        Some(v)
    }
}

/// `v -= c * row (mod p)`
fn sub_scaled(v: &mut [u32], row: &[u32], c: u32, p: u64) {
    for (x, &r) in v.iter_mut().zip(row) {
        let sub = (c as u64 * r as u64) % p;
        let val = (*x as u64 + p - sub) % p;
        *x = val as u32;
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

struct Searcher<'a> {
    catalog: &'a RankOneCatalog,
    wbasis: Vec<Vec<u32>>,
    p: u64,
}

impl<'a> Searcher<'a> {
    fn new(catalog: &'a RankOneCatalog, w: &MatrixSubspace) -> Searcher<'a> {
        let p = catalog.field.order().expect("finite field");
        let wbasis = w
            .basis()
            .iter()
            .map(|m| m.flatten().iter().map(scalar_residue).collect())
            .collect();
        Searcher { catalog, wbasis, p }
    }

    fn initial_state(&self) -> (FfBasis, FfBasis) {
        let ubasis = FfBasis::new(self.p);
        let mut wres = FfBasis::new(self.p);
        for w in &self.wbasis {
            wres.insert(w.clone());
        }
        (ubasis, wres)
    }

    /// Depth-first search for `r - depth` more picks covering the residue
    /// space; candidates ascend from `start`.
    fn dfs(
        &self,
        r: usize,
        depth: usize,
        start: usize,
        ubasis: &FfBasis,
        wres: &FfBasis,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let wdim = wres.dim();
        if wdim == 0 {
            return true;
        }
        let remaining = r - depth;
        if wdim > remaining {
            return false;
        }
        let tight = wdim == remaining;
        for idx in start..self.catalog.len() {
            if self.catalog.len() - idx < remaining {
                break; // not enough candidates left for an ascending pick
            }
            let mut s = self.catalog.entries[idx].flat.clone();
            ubasis.reduce(&mut s);
            if s.iter().all(|&x| x == 0) {
                continue; // dependent on the current span
            }
            if tight {
                // must lower the residue dimension: the reduced candidate
                // has to lie in span(W) modulo the current span
                let mut t = s.clone();
                wres.reduce(&mut t);
                if t.iter().any(|&x| x != 0) {
                    continue;
                }
            }
            let mut u2 = ubasis.clone();
            let srow = u2.insert(s).expect("nonzero after reduction");
            let mut w2 = FfBasis::new(self.p);
            for row in &wres.rows {
                let mut rr = row.clone();
                // reduce by the newly inserted row only; the other span rows
                // were already cleared from the residues
                w2_reduce_by(&mut rr, &srow, self.p);
                w2.insert(rr);
            }
            chosen.push(idx);
            if self.dfs(r, depth + 1, idx + 1, &u2, &w2, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn search_exact(&self, r: usize) -> Option<Vec<usize>> {
        let (ubasis, wres) = self.initial_state();
        let mut chosen = Vec::new();
        if self.dfs(r, 0, 0, &ubasis, &wres, &mut chosen) {
            Some(chosen)
        } else {
            None
        }
    }

    /// Parallel feasibility probe: splits the top-level branch across the
    /// current rayon pool and reports whether any branch succeeds.
    fn feasible_parallel(&self, r: usize) -> bool {
        let (ubasis, wres) = self.initial_state();
        if wres.dim() == 0 {
            return true;
        }
        if wres.dim() > r {
            return false;
        }
        (0..self.catalog.len()).into_par_iter().any(|idx| {
            let mut s = self.catalog.entries[idx].flat.clone();
            ubasis.reduce(&mut s);
            if s.iter().all(|&x| x == 0) {
                return false;
            }
            if wres.dim() == r {
                let mut t = s.clone();
                wres.reduce(&mut t);
                if t.iter().any(|&x| x != 0) {
                    return false;
                }
            }
            let mut u2 = ubasis.clone();
            let srow = u2.insert(s).expect("nonzero after reduction");
            let mut w2 = FfBasis::new(self.p);
            for row in &wres.rows {
                let mut rr = row.clone();
                w2_reduce_by(&mut rr, &srow, self.p);
                w2.insert(rr);
            }
            let mut chosen = vec![idx];
            self.dfs(r, 1, idx + 1, &u2, &w2, &mut chosen)
        })
    }
}

fn w2_reduce_by(v: &mut [u32], row: &[u32], p: u64) {
    let piv = row.iter().position(|&x| x != 0).expect("normalized row");
    let c = v[piv];
    if c != 0 {
        sub_scaled(v, row, c, p);
    }
}

/// Outcome of the bounded search: the least spanning count with canonical
/// witness indices, or proof that nothing within the budget spans.
pub enum SearchResult {
    Found { r: usize, witness: Vec<usize> },
    Exhausted { budget: usize },
}

/// Finds the least `r <= budget` such that `r` catalog matrices span a space
/// containing `w`. With `threads > 1` the feasibility probe for each `r`
/// runs in parallel; the canonical witness (first in depth-first order) is
/// recomputed single-threaded, so results do not depend on the worker count.
pub fn min_spanning(
    catalog: &RankOneCatalog,
    w: &MatrixSubspace,
    budget: usize,
    threads: usize,
) -> SearchResult {
    let searcher = Searcher::new(catalog, w);
    let d = searcher
        .initial_state()
        .1
        .dim();
    if d == 0 {
        return SearchResult::Found { r: 0, witness: Vec::new() };
    }
    for r in d..=budget {
        if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            let feasible = pool.install(|| searcher.feasible_parallel(r));
            if feasible {
                let witness = searcher.search_exact(r).expect("parallel probe found a witness");
                return SearchResult::Found { r, witness };
            }
        } else if let Some(witness) = searcher.search_exact(r) {
            return SearchResult::Found { r, witness };
        }
    }
    SearchResult::Exhausted { budget }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn catalog_size_matches_projective_count() {
        // (2^b - 1)(2^c - 1) / (2-1)^2
        let c = RankOneCatalog::get(gf2(), 2, 2).unwrap();
        assert_eq!(c.len(), 9);
        let c = RankOneCatalog::get(gf2(), 4, 4).unwrap();
        assert_eq!(c.len(), 225);
        let c3 = RankOneCatalog::get(Field::prime(3).unwrap(), 2, 2).unwrap();
        assert_eq!(c3.len(), 16);
    }

    #[test]
    fn catalog_is_sorted_and_rank_one() {
        let c = RankOneCatalog::get(Field::prime(3).unwrap(), 2, 3).unwrap();
        for w in c.entries.windows(2) {
            assert!(w[0].flat < w[1].flat);
        }
        for i in 0..c.len() {
            assert_eq!(c.matrix(i).rank(), 1);
        }
    }

    #[test]
    fn identity_needs_full_diagonal_count() {
        let f = gf2();
        let catalog = RankOneCatalog::get(f, 3, 3).unwrap();
        let w = MatrixSubspace::new(f, 3, 3, vec![ExactMatrix::identity(f, 3)]).unwrap();
        // I_3 is not a sum of fewer than 3 rank-ones
        match min_spanning(&catalog, &w, 9, 1) {
            SearchResult::Found { r, witness } => {
                assert_eq!(r, 3);
                assert_eq!(witness.len(), 3);
            }
            _ => panic!("must find"),
        }
    }

    #[test]
    fn exhaustion_reports_budget() {
        let f = gf2();
        let catalog = RankOneCatalog::get(f, 3, 3).unwrap();
        let w = MatrixSubspace::new(f, 3, 3, vec![ExactMatrix::identity(f, 3)]).unwrap();
        match min_spanning(&catalog, &w, 2, 1) {
            SearchResult::Exhausted { budget } => assert_eq!(budget, 2),
            _ => panic!("3 cannot fit in budget 2"),
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = Field::prime(3).unwrap();
        let catalog = RankOneCatalog::get(f, 3, 3).unwrap();
        let m1 = ExactMatrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let m2 = ExactMatrix::from_i64(f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = MatrixSubspace::new(f, 3, 3, vec![m1, m2]).unwrap();
        let seq = match min_spanning(&catalog, &w, 9, 1) {
            SearchResult::Found { r, witness } => (r, witness),
            _ => panic!(),
        };
        let par = match min_spanning(&catalog, &w, 9, 4) {
            SearchResult::Found { r, witness } => (r, witness),
            _ => panic!(),
        };
        assert_eq!(seq, par);
    }
}
