//! Substitution steps: peeling one rank off a tensor.
//!
//! Given a functional `f` on one factor with nonzero contraction `p(f)`
//! and a point `x` with `f(x) = 1`, the substitution replaces `p` by
//! `p - x (x) p(f)` (the simple term placed in the chosen factor). The
//! contraction of the result by `f` vanishes, the rank never drops by more
//! than one, and for at least one choice of `x` on the affine hyperplane
//! `f = 1` it drops by exactly one. [`rank_drop_point`] exhausts that
//! hyperplane over a finite field.

use crate::exactalg::{ExactMatrix, Field, FieldScalar};
use crate::tensor3::projective_coefficients;
use crate::tensor3::{Factor, MatrixSubspace, Tensor3};
use crate::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// One substitution, with enough data to replay it.
#[derive(Clone, Debug)]
pub struct SubstitutionStep {
    pub factor: Factor,
    pub functional: Vec<FieldScalar>,
    pub point: Vec<FieldScalar>,
    pub result: Tensor3,
}

/// The simple tensor `x (x) s` with `x` placed in `factor` and the matrix
/// `s` spread over the remaining two factors in natural order.
fn rank_one_term(
    field: Field,
    dims: [usize; 3],
    factor: Factor,
    point: &[FieldScalar],
    slice: &ExactMatrix,
) -> Tensor3 {
    let mut t = Tensor3::zeros(field, dims);
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let val = match factor {
                    Factor::A => point[i].mul(&slice[(j, k)]),
                    Factor::B => point[j].mul(&slice[(i, k)]),
                    Factor::C => point[k].mul(&slice[(i, j)]),
                };
                if !val.is_zero() {
                    t.set(i, j, k, val);
                }
            }
        }
    }
    t
}

/// Applies one substitution. Fails when the contraction `p(functional)`
/// vanishes or when `functional(point) != 1`.
pub fn substitution_step(
    p: &Tensor3,
    factor: Factor,
    functional: &[FieldScalar],
    point: &[FieldScalar],
) -> Result<SubstitutionStep> {
    let slice = p.contract(factor, functional);
    if slice.is_zero() {
        return Err(Error::Precondition("functional annihilates the tensor".into()));
    }
    let mut pairing = p.field().zero();
    for (f, x) in functional.iter().zip(point) {
        pairing = pairing.add(&f.mul(x));
    }
    if !pairing.is_one() {
        return Err(Error::Precondition("substitution point must pair to one".into()));
    }
    let term = rank_one_term(p.field(), p.dims(), factor, point, &slice);
    let result = p.sub(&term);
    debug_assert!(result.contract(factor, functional).is_zero());
    Ok(SubstitutionStep {
        factor,
        functional: functional.to_vec(),
        point: point.to_vec(),
        result,
    })
}

/// All points of the affine hyperplane `functional = 1` over a finite
/// field, enumerated by assigning the free coordinates in odometer order.
pub fn hyperplane_points(field: Field, functional: &[FieldScalar]) -> Result<Vec<Vec<FieldScalar>>> {
    let q = field.order().ok_or(Error::NeedsFiniteField)?;
    let n = functional.len();
    let pivot = functional
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Precondition("zero functional has empty hyperplane".into()))?;
    let elements = field.elements()?;
    let mut points = Vec::with_capacity((q as usize).pow((n - 1) as u32));
    let mut counters = vec![0usize; n - 1];
    loop {
        let mut x = vec![field.zero(); n];
        let mut it = counters.iter();
        for (i, xi) in x.iter_mut().enumerate() {
            if i != pivot {
                *xi = elements[*it.next().unwrap()].clone();
            }
        }
        let mut partial = field.zero();
        for (i, xi) in x.iter().enumerate() {
            if i != pivot {
                partial = partial.add(&functional[i].mul(xi));
            }
        }
        x[pivot] = field.one().sub(&partial).div(&functional[pivot])?;
        points.push(x);
        // odometer increment
        let mut done = true;
        for c in counters.iter_mut() {
            *c += 1;
            if *c < q as usize {
                done = false;
                break;
            }
            *c = 0;
        }
        if counters.is_empty() || done {
            break;
        }
    }
    Ok(points)
}

/// Searches the hyperplane `functional = 1` for a point whose substitution
/// lowers the rank below `rank_before`. Returns the first such step in
/// enumeration order, or `None` when no point drops the rank (which cannot
/// happen when `rank_before` is the true rank, but is reported honestly).
pub fn rank_drop_point(
    p: &Tensor3,
    factor: Factor,
    functional: &[FieldScalar],
    rank_before: usize,
    threads: usize,
) -> Result<Option<SubstitutionStep>> {
    for point in hyperplane_points(p.field(), functional)? {
        let step = substitution_step(p, factor, functional, &point)?;
        if super::tensor_rank_at_most(&step.result, rank_before.saturating_sub(1), threads)? {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Outcome of a rank-one search inside a matrix subspace.
#[derive(Clone, Debug)]
pub enum RankOneOutcome {
    Found(ExactMatrix),
    /// no rank-one exists in the space — certified (finite fields, or the
    /// zero space)
    Absent,
    /// nothing found, absence not certified
    Unknown,
}

/// Looks for a rank-one element of `w`. Over a finite field the projective
/// points are exhausted, so the answer is always `Found` or `Absent`. Over
/// the rationals, spaces of dimension at most two are analyzed through the
/// quadratic 2x2 minors of the pencil; a miss is only `Unknown`, because a
/// rank-one point may exist over an extension field and higher-dimensional
/// rational spaces are not searched.
pub fn find_rank_one_in_space(w: &MatrixSubspace) -> Result<RankOneOutcome> {
    if w.dim() == 0 {
        return Ok(RankOneOutcome::Absent);
    }
    if w.field().is_finite() {
        let pts = w.rank_one_points()?;
        return Ok(match pts.into_iter().next() {
            Some(m) => RankOneOutcome::Found(m),
            None => RankOneOutcome::Absent,
        });
    }
    for m in w.basis() {
        if m.rank() == 1 {
            return Ok(RankOneOutcome::Found(m.clone()));
        }
    }
    if w.dim() > 2 {
        return Ok(RankOneOutcome::Unknown);
    }
    if w.dim() == 1 {
        // the only projective point is the basis matrix, already checked
        return Ok(RankOneOutcome::Unknown);
    }
    let m = &w.basis()[0];
    let n = &w.basis()[1];
    // rank-one members of the pencil are n + x m for a rational x killing
    // every 2x2 minor; the roots of any single nonzero minor are the only
    // candidates
    let mut candidate_roots: Option<Vec<BigRational>> = None;
    'outer: for r1 in 0..m.rows() {
        for r2 in r1 + 1..m.rows() {
            for c1 in 0..m.cols() {
                for c2 in c1 + 1..m.cols() {
                    let poly = minor_poly(m, n, r1, r2, c1, c2);
                    if poly.iter().any(|c| !c.is_zero()) {
                        candidate_roots = Some(rational_roots(&poly));
                        break 'outer;
                    }
                }
            }
        }
    }
    let roots = match candidate_roots {
        // every pencil member has rank <= 1, and n is nonzero
        None => return Ok(RankOneOutcome::Found(n.clone())),
        Some(r) => r,
    };
    for x in roots {
        let cand = m.scale(&FieldScalar::Rational(x)).add(n);
        if cand.rank() == 1 {
            return Ok(RankOneOutcome::Found(cand));
        }
    }
    Ok(RankOneOutcome::Unknown)
}

/// Coefficients `[c0, c1, c2]` of `det2(n + x m)` on rows `r1 < r2`,
/// columns `c1 < c2`.
fn minor_poly(
    m: &ExactMatrix,
    n: &ExactMatrix,
    r1: usize,
    r2: usize,
    c1: usize,
    c2: usize,
) -> [BigRational; 3] {
    let rat = |s: &FieldScalar| {
        let (n, d) = s.to_ratio();
        BigRational::new(n, d)
    };
    let (a1, b1) = (rat(&m[(r1, c1)]), rat(&n[(r1, c1)]));
    let (a2, b2) = (rat(&m[(r2, c2)]), rat(&n[(r2, c2)]));
    let (a3, b3) = (rat(&m[(r1, c2)]), rat(&n[(r1, c2)]));
    let (a4, b4) = (rat(&m[(r2, c1)]), rat(&n[(r2, c1)]));
    // (a1 x + b1)(a2 x + b2) - (a3 x + b3)(a4 x + b4)
    let c2_coef = &a1 * &a2 - &a3 * &a4;
    let c1_coef = &a1 * &b2 + &a2 * &b1 - &a3 * &b4 - &a4 * &b3;
    let c0_coef = &b1 * &b2 - &b3 * &b4;
    [c0_coef, c1_coef, c2_coef]
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer();
    let den = q.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Rational roots of `c0 + c1 x + c2 x^2`.
fn rational_roots(poly: &[BigRational; 3]) -> Vec<BigRational> {
    let [c0, c1, c2] = poly;
    if c2.is_zero() {
        if c1.is_zero() {
            return Vec::new(); // nonzero constant
        }
        return vec![-c0 / c1];
    }
    let disc = c1 * c1 - BigRational::from(BigInt::from(4)) * c2 * c0;
    let s = match rational_sqrt(&disc) {
        Some(s) => s,
        None => return Vec::new(),
    };
    let two_a = BigRational::from(BigInt::from(2)) * c2;
    let mut roots = vec![(-c1 + &s) / &two_a];
    if !s.is_zero() {
        roots.push((-c1 - &s) / &two_a);
    }
    roots
}

/// All projective functionals on a `dim`-dimensional factor.
pub fn projective_functionals(field: Field, dim: usize) -> Result<Vec<Vec<FieldScalar>>> {
    projective_coefficients(field, dim)
}
