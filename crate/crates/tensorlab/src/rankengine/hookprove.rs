//! Additivity certificates for direct sums whose second summand has a
//! hook-shaped slice space.
//!
//! A (1, f)-hook means the slice space of the second summand fits inside
//! `x (x) C'' + B'' (x) F` for one vector `x` and an f-dimensional `F`.
//! After a change of basis either side moves `x` to the first coordinate of
//! `B''` and `F` to the leading coordinates of `C''`, the prover builds a
//! chain of substitutions, one per unit of the second summand's rank. Each
//! step subtracts a simple tensor chosen so that the first summand's slices
//! never move and the total rank certifiably drops; chaining the drops
//! yields rank additivity. Every step is re-verified with the exact rank
//! oracle, and the functional search is reported honestly when it runs out
//! of options (which can happen over small fields).

use serde::Serialize;

use crate::exactalg::{ExactMatrix, Field, FieldScalar, VecSpace};
use crate::rankengine::substitution::{hyperplane_points, projective_functionals, substitution_step};
use crate::rankengine::{tensor_rank, tensor_rank_at_most};
use crate::tensor3::{Factor, Tensor3};
use crate::{Error, Result};

/// One link of the chain: the substitution data plus the oracle-verified
/// ranks after applying it.
#[derive(Clone, Debug, Serialize)]
pub struct HookChainStep {
    pub factor: Factor,
    pub functional: Vec<String>,
    pub point: Vec<String>,
    pub total_rank_after: usize,
    pub second_rank_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum HookChainOutcome {
    /// chain of length `R(second)` completed: ranks add
    Additive,
    /// the oracle shows the sum's rank is already below the sum of ranks
    NotAdditive { deficit: usize },
    /// no functional/point in the search classes advanced the chain; over
    /// small fields this can happen even for additive sums
    FailedToConstruct { at_step: usize, detail: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct HookChainReport {
    /// width of the hook's F space (1 or 2)
    pub hook_f: usize,
    pub rank_first: usize,
    pub rank_second: usize,
    pub rank_sum: usize,
    pub steps: Vec<HookChainStep>,
    pub outcome: HookChainOutcome,
}

/// Extends independent column vectors to a basis, preferring unit vectors,
/// and returns the square matrix with those columns.
fn extend_to_basis(field: Field, given: &[Vec<FieldScalar>]) -> Result<ExactMatrix> {
    let n = given
        .first()
        .map(|v| v.len())
        .ok_or_else(|| Error::Precondition("need at least one vector".into()))?;
    let mut space = VecSpace::new(field, n);
    let mut cols: Vec<Vec<FieldScalar>> = Vec::with_capacity(n);
    for v in given {
        if !space.insert(v.clone()) {
            return Err(Error::DependentBasis);
        }
        cols.push(v.clone());
    }
    for i in 0..n {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        if space.insert(e.clone()) {
            cols.push(e);
        }
    }
    debug_assert_eq!(cols.len(), n);
    let mut m = ExactMatrix::zeros(field, n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m)
}

/// The sub-tensor formed by the slices `a_lo..` of the first factor.
fn second_a_part(t: &Tensor3, a_lo: usize) -> Tensor3 {
    let [a, b, c] = t.dims();
    let mut out = Tensor3::zeros(t.field(), [a - a_lo, b, c]);
    for i in a_lo..a {
        for j in 0..b {
            for k in 0..c {
                let v = t.get(i, j, k);
                if !v.is_zero() {
                    out.set(i - a_lo, j, k, v.clone());
                }
            }
        }
    }
    out
}

/// The sub-tensor formed by the slices `0..a_lo` of the first factor.
fn first_a_part(t: &Tensor3, a_lo: usize) -> Tensor3 {
    let [_, b, c] = t.dims();
    let mut out = Tensor3::zeros(t.field(), [a_lo, b, c]);
    for i in 0..a_lo {
        for j in 0..b {
            for k in 0..c {
                let v = t.get(i, j, k);
                if !v.is_zero() {
                    out.set(i, j, k, v.clone());
                }
            }
        }
    }
    out
}

fn scalar_strings(v: &[FieldScalar]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Embeds local coefficients on a coordinate window into a full-length
/// functional (zero outside the window).
fn embed_window(field: Field, len: usize, offset: usize, local: &[FieldScalar]) -> Vec<FieldScalar> {
    let mut out = vec![field.zero(); len];
    for (i, c) in local.iter().enumerate() {
        out[offset + i] = c.clone();
    }
    out
}

struct StepCandidate {
    factor: Factor,
    functional: Vec<FieldScalar>,
    /// restrict substitution points to this coordinate window of the factor
    /// (needed on the first factor, where stray support would disturb the
    /// first summand's slices)
    point_window: Option<(usize, usize)>,
}

/// Proves rank additivity of a block-diagonal tensor whose second summand
/// is (1, f)-hooked, by explicit substitution chain. `hook_f` forces the
/// hook width; `None` tries 1 then 2.
pub fn hook_additivity_prover(
    p: &Tensor3,
    hook_f: Option<usize>,
    threads: usize,
) -> Result<HookChainReport> {
    let field = p.field();
    if !field.is_finite() {
        return Err(Error::NeedsFiniteField);
    }
    let split = p
        .split()
        .ok_or_else(|| Error::Precondition("tensor carries no direct-sum splitting".into()))?;
    let p1 = p.first_part()?;
    let p2 = p.second_part()?;
    let (a1, b1, c1) = (split.a.0, split.b.0, split.c.0);
    let (b2, c2) = (split.b.1, split.c.1);

    let w2 = p2.slice_space(Factor::A);
    let mut hook = None;
    for f in hook_f.map(|f| vec![f]).unwrap_or_else(|| vec![1, 2]) {
        if f >= c2 {
            continue; // hook as wide as C'' carries no information
        }
        if let Some(h) = w2.find_hook(1, f)? {
            hook = Some((f, h));
            break;
        }
    }
    let (f_width, hook) = hook.ok_or_else(|| {
        Error::Precondition("second summand's slice space has no usable (1,f) hook".into())
    })?;

    // move x to the first coordinate of B'' and F to the leading f
    // coordinates of C''
    let xb = extend_to_basis(field, &hook.e_basis)?;
    let fc = extend_to_basis(field, &hook.f_basis)?;
    let tb = xb.inverse().ok_or(Error::DependentBasis)?;
    let tc = fc.inverse().ok_or(Error::DependentBasis)?;
    let mb = ExactMatrix::from_blocks(&[
        vec![ExactMatrix::identity(field, b1), ExactMatrix::zeros(field, b1, b2)],
        vec![ExactMatrix::zeros(field, b2, b1), tb],
    ]);
    let mc = ExactMatrix::from_blocks(&[
        vec![ExactMatrix::identity(field, c1), ExactMatrix::zeros(field, c1, c2)],
        vec![ExactMatrix::zeros(field, c2, c1), tc],
    ]);
    let [a, b, c] = p.dims();
    let mut cur = p.transform(&ExactMatrix::identity(field, a), &mb, &mc);
    cur = cur.with_split(*split);
    debug_assert!(cur.is_block_diagonal());
    // hook shape in the new coordinates: within the second summand's
    // slices, rows of B'' other than the first live inside the F columns
    for i in a1..a {
        for j in b1 + 1..b {
            for k in c1 + f_width..c {
                debug_assert!(cur.get(i, j, k).is_zero(), "hook normalization failed");
            }
        }
    }

    let rank_first = tensor_rank(&p1, None, threads)?.value;
    let rank_second = tensor_rank(&p2, None, threads)?.value;
    let rank_sum = tensor_rank(&cur, None, threads)?.value;
    if rank_sum < rank_first + rank_second {
        return Ok(HookChainReport {
            hook_f: f_width,
            rank_first,
            rank_second,
            rank_sum,
            steps: Vec::new(),
            outcome: HookChainOutcome::NotAdditive {
                deficit: rank_first + rank_second - rank_sum,
            },
        });
    }

    let mut steps = Vec::new();
    let mut total = rank_sum;
    let mut second = rank_second;
    let original_first = first_a_part(&cur, a1);
    let mut work = cur;
    for step_no in 0..rank_second {
        let t2 = second_a_part(&work, a1);
        let mut advanced = false;
        let mut tried = 0usize;
        for cand in step_candidates(field, &work, a1, b1, c1, f_width, &t2)? {
            tried += 1;
            let dim = match cand.factor {
                Factor::A => a,
                Factor::B => b,
                Factor::C => c,
            };
            for point in hyperplane_points(field, &cand.functional)? {
                if let Some((lo, hi)) = cand.point_window {
                    let outside = point
                        .iter()
                        .enumerate()
                        .any(|(i, x)| (i < lo || i >= hi) && !x.is_zero());
                    if outside {
                        continue;
                    }
                }
                debug_assert_eq!(point.len(), dim);
                let step = substitution_step(&work, cand.factor, &cand.functional, &point)?;
                // first summand's slices must be untouched
                if !first_a_part(&step.result, a1).same_entries(&original_first) {
                    continue;
                }
                // the chain needs a certified drop of the total rank
                if !tensor_rank_at_most(&step.result, total - 1, threads)? {
                    continue;
                }
                let new_total = tensor_rank(&step.result, None, threads)?.value;
                let new_second =
                    tensor_rank(&second_a_part(&step.result, a1), None, threads)?.value;
                // one simple term cannot move any rank by more than one
                debug_assert!(new_second + 1 >= second && new_second <= second + 1);
                steps.push(HookChainStep {
                    factor: cand.factor,
                    functional: scalar_strings(&cand.functional),
                    point: scalar_strings(&point),
                    total_rank_after: new_total,
                    second_rank_after: new_second,
                });
                total = new_total;
                second = new_second;
                work = step.result;
                advanced = true;
                break;
            }
            if advanced {
                break;
            }
        }
        if !advanced {
            return Ok(HookChainReport {
                hook_f: f_width,
                rank_first,
                rank_second,
                rank_sum,
                steps,
                outcome: HookChainOutcome::FailedToConstruct {
                    at_step: step_no,
                    detail: format!(
                        "no substitution among {tried} functionals preserved the first summand while dropping the total rank"
                    ),
                },
            });
        }
    }
    // after R(second) certified unit drops the total is at most
    // rank_sum - rank_second = rank_first, and the untouched first summand
    // keeps it at least rank_first
    debug_assert!(total <= rank_sum - rank_second);
    debug_assert!(tensor_rank(&first_a_part(&work, a1), None, threads)?.value == rank_first);
    Ok(HookChainReport {
        hook_f: f_width,
        rank_first,
        rank_second,
        rank_sum,
        steps,
        outcome: HookChainOutcome::Additive,
    })
}

/// Functional candidates for one chain step, in deterministic order:
/// third-factor functionals supported outside `C' + F` (their contraction
/// lands in the single row `x`, hence has rank one), then second-factor
/// functionals vanishing on `B'` and on `x` (contraction lands in the `F`
/// columns), then first-factor functionals on the second block whose
/// contraction happens to have rank one.
fn step_candidates(
    field: Field,
    work: &Tensor3,
    a1: usize,
    b1: usize,
    c1: usize,
    f_width: usize,
    t2: &Tensor3,
) -> Result<Vec<StepCandidate>> {
    let [a, b, c] = work.dims();
    let mut out = Vec::new();
    if c > c1 + f_width {
        for local in projective_functionals(field, c - c1 - f_width)? {
            let functional = embed_window(field, c, c1 + f_width, &local);
            let slice = t2.contract(Factor::C, &functional);
            if slice.is_zero() {
                continue;
            }
            debug_assert_eq!(slice.rank(), 1);
            out.push(StepCandidate { factor: Factor::C, functional, point_window: None });
        }
    }
    if b > b1 + 1 {
        for local in projective_functionals(field, b - b1 - 1)? {
            let functional = embed_window(field, b, b1 + 1, &local);
            let slice = t2.contract(Factor::B, &functional);
            if slice.rank() != 1 {
                continue;
            }
            out.push(StepCandidate { factor: Factor::B, functional, point_window: None });
        }
    }
    for local in projective_functionals(field, a - a1)? {
        // t2 carries only the second block of the first factor, so `local`
        // contracts it directly
        let slice = t2.contract(Factor::A, &local);
        if slice.rank() != 1 {
            continue;
        }
        let functional = embed_window(field, a, a1, &local);
        // points with support in A' would disturb the first summand
        out.push(StepCandidate { factor: Factor::A, functional, point_window: Some((a1, a)) });
    }
    Ok(out)
}

/// Builds a random tensor of shape `dims` whose slice space is (1, f)-
/// hooked by construction: nonzero entries appear only in the first row of
/// the second factor or in the leading `f` columns of the third.
pub fn random_hooked_tensor(
    field: Field,
    dims: [usize; 3],
    f: usize,
    rng: &mut impl rand::Rng,
) -> Tensor3 {
    let mut t = Tensor3::zeros(field, dims);
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                if j != 0 && k >= f {
                    continue;
                }
                let v = crate::tensor3::random_scalar(field, rng);
                if !v.is_zero() {
                    t.set(i, j, k, v);
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn w_state_slice_space_is_hooked() {
        let t = Tensor3::w_state(gf2());
        let w = t.slice_space(Factor::A);
        assert!(w.find_hook(1, 1).unwrap().is_some());
    }

    #[test]
    fn chain_proves_additivity_for_diag_plus_w_state() {
        let f = gf2();
        let p1 = Tensor3::diagonal(f, 2);
        let p2 = Tensor3::w_state(f);
        let sum = p1.direct_sum(&p2);
        let report = hook_additivity_prover(&sum, None, 1).unwrap();
        assert_eq!(report.outcome, HookChainOutcome::Additive);
        assert_eq!(report.rank_first, 2);
        assert_eq!(report.rank_second, 3);
        assert_eq!(report.rank_sum, 5);
        assert_eq!(report.steps.len(), 3);
    }

    #[test]
    fn chain_handles_random_hooked_second_summand() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p1 = Tensor3::diagonal(f, 2);
        for _ in 0..3 {
            let p2 = random_hooked_tensor(f, [2, 2, 2], 1, &mut rng);
            if p2.is_zero() {
                continue;
            }
            let sum = p1.direct_sum(&p2);
            let report = hook_additivity_prover(&sum, None, 1).unwrap();
            // the chain either proves additivity or reports honestly; for
            // these tiny shapes the oracle cross-check must agree
            let direct = tensor_rank(&sum, None, 1).unwrap().value;
            match report.outcome {
                HookChainOutcome::Additive => {
                    assert_eq!(direct, report.rank_first + report.rank_second)
                }
                HookChainOutcome::NotAdditive { deficit } => {
                    assert_eq!(direct + deficit, report.rank_first + report.rank_second)
                }
                HookChainOutcome::FailedToConstruct { .. } => {
                    // construction may fail over tiny fields, but only when
                    // the ranks actually add (otherwise NotAdditive fires)
                    assert_eq!(direct, report.rank_first + report.rank_second);
                }
            }
        }
    }

    #[test]
    fn missing_split_is_rejected() {
        let t = Tensor3::w_state(gf2());
        assert!(hook_additivity_prover(&t, None, 1).is_err());
    }
}
