//! Curves of rank-one terms with Laurent-polynomial coordinates. A curve
//! certifies a border-rank upper bound when the lowest-order coefficient
//! of its expansion is a nonzero multiple of the target tensor: the number
//! of terms then bounds the border rank from above.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, FieldScalar, LaurentPoly, LaurentWindow};
use crate::rankengine::CertKind;
use crate::tensor3::Tensor3;
use crate::{Error, Result};

use super::BorderCertificate;

/// One rank-one term u ⊗ v ⊗ w, each coordinate a Laurent polynomial in
/// the curve parameter.
#[derive(Clone, Debug)]
pub struct CurveTerm {
    pub u: Vec<LaurentPoly>,
    pub v: Vec<LaurentPoly>,
    pub w: Vec<LaurentPoly>,
}

/// A family of rank-one terms meant to realize `target` in the limit.
/// Construction validates shapes only; [`verify_border_decomposition`]
/// checks the limit itself.
#[derive(Clone, Debug)]
pub struct LaurentTensorCurve {
    terms: Vec<CurveTerm>,
    target: Tensor3,
}

impl LaurentTensorCurve {
    /// Every term's coordinate vectors must match the target dimensions,
    /// live over the target's field, and none of a term's three vectors
    /// may be identically zero (a vanishing term is a shorter curve in
    /// disguise).
    pub fn new(target: Tensor3, terms: Vec<CurveTerm>) -> Result<LaurentTensorCurve> {
        if target.is_zero() {
            return Err(Error::Precondition(
                "curve target is the zero tensor; proportionality would be vacuous".to_string(),
            ));
        }
        if terms.is_empty() {
            return Err(Error::Precondition("curve has no terms".to_string()));
        }
        let [a, b, c] = target.dims();
        let field = target.field();
        for (t, term) in terms.iter().enumerate() {
            for (len, part, name) in
                [(a, &term.u, "u"), (b, &term.v, "v"), (c, &term.w, "w")]
            {
                if part.len() != len {
                    return Err(Error::ShapeMismatch(format!(
                        "term {t}: {name} has length {}, expected {len}",
                        part.len()
                    )));
                }
                if part.iter().any(|p| p.field() != field) {
                    return Err(Error::ShapeMismatch(format!(
                        "term {t}: {name} is not over the target's field"
                    )));
                }
                if part.iter().all(|p| p.is_zero()) {
                    return Err(Error::Precondition(format!(
                        "term {t}: {name} is identically zero"
                    )));
                }
            }
        }
        Ok(LaurentTensorCurve { terms, target })
    }

    pub fn terms(&self) -> &[CurveTerm] {
        &self.terms
    }

    pub fn target(&self) -> &Tensor3 {
        &self.target
    }
}

/// Expands the curve exactly, finds the lowest exponent carrying a nonzero
/// coefficient tensor, and checks that this coefficient is a nonzero
/// multiple of the target. On success the term count is a border-rank
/// upper bound; otherwise the error says how the limit fails.
pub fn verify_border_decomposition(curve: &LaurentTensorCurve) -> Result<BorderCertificate> {
    let target = curve.target();
    let field = target.field();
    let [a, b, c] = target.dims();
    let mut lo = 0i64;
    let mut hi = 0i64;
    for term in curve.terms() {
        for p in term.u.iter().chain(&term.v).chain(&term.w) {
            if let (Some(mn), Some(mx)) = (p.min_exp(), p.max_exp()) {
                lo = lo.min(mn);
                hi = hi.max(mx);
            }
        }
    }
    let window = LaurentWindow::new(3 * lo, 3 * hi);
    let mut cells = vec![LaurentPoly::zero(field); a * b * c];
    for term in curve.terms() {
        for (i, ui) in term.u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in term.v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui.mul_within(vj, &window)?;
                for (k, wk) in term.w.iter().enumerate() {
                    if wk.is_zero() {
                        continue;
                    }
                    let idx = (i * b + j) * c + k;
                    cells[idx] = cells[idx].add(&uv.mul_within(wk, &window)?);
                }
            }
        }
    }
    let low = cells.iter().filter_map(|p| p.min_exp()).min().ok_or_else(|| {
        Error::Precondition(
            "every coefficient of the expanded curve cancels; the curve is identically zero"
                .to_string(),
        )
    })?;
    let mut lambda: Option<FieldScalar> = None;
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                let cell = &cells[(i * b + j) * c + k];
                let coeff = cell.coeff(low);
                let t = target.get(i, j, k);
                if t.is_zero() {
                    if !coeff.is_zero() {
                        return Err(Error::Precondition(format!(
                            "lowest-order coefficient (exponent {low}) is not proportional to \
                             the target: nonzero at the target's zero entry ({i},{j},{k})"
                        )));
                    }
                    continue;
                }
                let ratio = coeff.div(t)?;
                match &lambda {
                    None => {
                        if ratio.is_zero() {
                            return Err(Error::Precondition(format!(
                                "lowest-order coefficient (exponent {low}) is not proportional \
                                 to the target: vanishes at target entry ({i},{j},{k})"
                            )));
                        }
                        lambda = Some(ratio);
                    }
                    Some(l) => {
                        if ratio != *l {
                            return Err(Error::Precondition(format!(
                                "lowest-order coefficient (exponent {low}) is not proportional \
                                 to the target: ratio changes at entry ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
    }
    let lambda = lambda.expect("target has a nonzero entry");
    Ok(BorderCertificate::new(
        CertKind::Upper,
        curve.terms().len(),
        "epsilon-curve",
        format!(
            "{} rank-one terms; the lowest-order coefficient (exponent {low}) is {lambda} \
             times the target",
            curve.terms().len()
        ),
    ))
}

/// Two-term curve for the 2×2×2 tensor with ones at (0,0,1), (0,1,0),
/// (1,0,0): expanding (x+εy)⊗(x+εy)⊗(x+εy) − x⊗x⊗x, everything at order
/// ε⁰ cancels and the ε¹ coefficient is the target. Its rank is 3, so the
/// curve separates rank from border rank.
pub fn w_state_curve(field: Field) -> Result<LaurentTensorCurve> {
    let target = Tensor3::w_state(field);
    let one = || LaurentPoly::constant(field.one());
    let eps = || LaurentPoly::monomial(1, field.one());
    let zero = || LaurentPoly::zero(field);
    let minus = || LaurentPoly::constant(field.from_i64(-1));
    let t1 = CurveTerm {
        u: vec![one(), eps()],
        v: vec![one(), eps()],
        w: vec![one(), eps()],
    };
    let t2 = CurveTerm {
        u: vec![minus(), zero()],
        v: vec![one(), zero()],
        w: vec![one(), zero()],
    };
    LaurentTensorCurve::new(target, vec![t1, t2])
}

/// Seven-term curve realizing the direct sum of the 2×1×3 and 1×2×1
/// matrix-multiplication tensors — one term fewer than the sum of the
/// parts' border ranks (6 and 2), so border rank does not add over this
/// sum. `small_first` picks the summand order of the target.
///
/// Writing x_s, y_r, z_{s,r} for the units of the 2×1×3 part and u_t, v_t,
/// w for those of the 1×2×1 part, the terms are, for s ∈ {1,2} and
/// r ∈ {1,2,3} with sign σ_s = ±1:
///
/// ```text
/// (x_s + σ_s ε u_r)⊗(y_r + [s=1] ε v_r)⊗(z_{s,r} + ε⁻² w)   (r ≤ 2)
/// (x_s)⊗(y_3 − [s=1] ε (v_1+v_2))⊗(z_{s,3} + ε⁻² w)
/// −(x_1+x_2)⊗(y_1+y_2+y_3)⊗(ε⁻² w)
/// ```
///
/// All ε⁻² and ε⁻¹ contributions cancel and the ε⁰ coefficient is exactly
/// the direct sum.
pub fn mm_pair_curve(field: Field, small_first: bool) -> Result<LaurentTensorCurve> {
    let big = Tensor3::mm_tensor(field, 2, 1, 3); // 2×3×6
    let small = Tensor3::mm_tensor(field, 1, 2, 1); // 2×2×1
    let (target, xa, ua, yb, vb, zc, wc) = if small_first {
        (small.direct_sum(&big), 2usize, 0usize, 2usize, 0usize, 1usize, 0usize)
    } else {
        (big.direct_sum(&small), 0, 2, 0, 3, 0, 6)
    };
    let [a_len, b_len, c_len] = target.dims();
    let vec_of = |len: usize, parts: &[(usize, LaurentPoly)]| -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(field); len];
        for (idx, p) in parts {
            v[*idx] = v[*idx].add(p);
        }
        v
    };
    let c1 = |c: i64| LaurentPoly::constant(field.from_i64(c));
    let eps = |c: i64| LaurentPoly::monomial(1, field.from_i64(c));
    let inv2 = || LaurentPoly::monomial(-2, field.one());

    let mut terms = Vec::new();
    for s in 0..2usize {
        let sign = if s == 0 { 1 } else { -1 };
        for r in 0..3usize {
            let u = if r < 2 {
                vec_of(a_len, &[(xa + s, c1(1)), (ua + r, eps(sign))])
            } else {
                vec_of(a_len, &[(xa + s, c1(1))])
            };
            let v = if s == 0 {
                match r {
                    0 => vec_of(b_len, &[(yb, c1(1)), (vb, eps(1))]),
                    1 => vec_of(b_len, &[(yb + 1, c1(1)), (vb + 1, eps(1))]),
                    _ => vec_of(b_len, &[(yb + 2, c1(1)), (vb, eps(-1)), (vb + 1, eps(-1))]),
                }
            } else {
                vec_of(b_len, &[(yb + r, c1(1))])
            };
            let w = vec_of(c_len, &[(zc + 3 * s + r, c1(1)), (wc, inv2())]);
            terms.push(CurveTerm { u, v, w });
        }
    }
    terms.push(CurveTerm {
        u: vec_of(a_len, &[(xa, c1(-1)), (xa + 1, c1(-1))]),
        v: vec_of(b_len, &[(yb, c1(1)), (yb + 1, c1(1)), (yb + 2, c1(1))]),
        w: vec_of(c_len, &[(wc, inv2())]),
    });
    LaurentTensorCurve::new(target, terms)
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    field: String,
    dims: [usize; 3],
    /// nonzero target entries as (i, j, k, coefficient)
    target: Vec<(usize, usize, usize, String)>,
    terms: Vec<TermFile>,
}

/// Laurent entries serialize as maps from exponent to coefficient, both as
/// strings.
#[derive(Serialize, Deserialize)]
struct TermFile {
    u: Vec<BTreeMap<String, String>>,
    v: Vec<BTreeMap<String, String>>,
    w: Vec<BTreeMap<String, String>>,
}

fn poly_to_map(p: &LaurentPoly) -> BTreeMap<String, String> {
    p.support().map(|(e, c)| (e.to_string(), c.to_string())).collect()
}

fn poly_from_map(field: Field, map: &BTreeMap<String, String>) -> Result<LaurentPoly> {
    let mut terms = Vec::new();
    for (e, c) in map {
        let exp: i64 = e.parse().map_err(|_| {
            Error::BadTensorFile(format!("bad exponent {e:?} in a curve entry"))
        })?;
        terms.push((exp, field.parse(c)?));
    }
    Ok(LaurentPoly::from_terms(field, terms))
}

pub fn write_curve_string(curve: &LaurentTensorCurve) -> String {
    let target = curve.target();
    let [a, b, c] = target.dims();
    let mut entries = Vec::new();
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                let val = target.get(i, j, k);
                if !val.is_zero() {
                    entries.push((i, j, k, val.to_string()));
                }
            }
        }
    }
    let file = CurveFile {
        field: target.field().to_string(),
        dims: target.dims(),
        target: entries,
        terms: curve
            .terms()
            .iter()
            .map(|t| TermFile {
                u: t.u.iter().map(poly_to_map).collect(),
                v: t.v.iter().map(poly_to_map).collect(),
                w: t.w.iter().map(poly_to_map).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("curve serialization cannot fail")
}

pub fn write_curve(curve: &LaurentTensorCurve, path: &Path) -> Result<()> {
    fs::write(path, write_curve_string(curve) + "\n")?;
    Ok(())
}

pub fn read_curve_str(text: &str) -> Result<LaurentTensorCurve> {
    let file: CurveFile = serde_json::from_str(text)?;
    let field: Field = file.field.parse()?;
    let [a, b, c] = file.dims;
    let mut target = Tensor3::zeros(field, file.dims);
    for (i, j, k, val) in &file.target {
        if *i >= a || *j >= b || *k >= c {
            return Err(Error::EntryOutOfRange { i: *i, j: *j, k: *k, a, b, c });
        }
        if !target.get(*i, *j, *k).is_zero() {
            return Err(Error::DuplicateEntry(*i, *j, *k));
        }
        target.set(*i, *j, *k, field.parse(val)?);
    }
    let terms = file
        .terms
        .iter()
        .map(|t| {
            Ok(CurveTerm {
                u: t.u.iter().map(|m| poly_from_map(field, m)).collect::<Result<_>>()?,
                v: t.v.iter().map(|m| poly_from_map(field, m)).collect::<Result<_>>()?,
                w: t.w.iter().map(|m| poly_from_map(field, m)).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentTensorCurve::new(target, terms)
}

pub fn read_curve(path: &Path) -> Result<LaurentTensorCurve> {
    read_curve_str(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn constant_vec(field: Field, coords: &[i64]) -> Vec<LaurentPoly> {
        coords.iter().map(|&c| LaurentPoly::constant(field.from_i64(c))).collect()
    }

    #[test]
    fn w_state_curve_certifies_two_terms() {
        let curve = w_state_curve(q()).unwrap();
        let cert = verify_border_decomposition(&curve).unwrap();
        assert_eq!(cert.kind, CertKind::Upper);
        assert_eq!(cert.value, 2);
        assert!(cert.evidence.contains("exponent 1"));
    }

    #[test]
    fn w_state_curve_over_a_finite_field() {
        let curve = w_state_curve(Field::Prime(7)).unwrap();
        assert_eq!(verify_border_decomposition(&curve).unwrap().value, 2);
    }

    #[test]
    fn exact_decomposition_is_a_constant_curve() {
        let target = Tensor3::diagonal(q(), 2);
        let t1 = CurveTerm {
            u: constant_vec(q(), &[1, 0]),
            v: constant_vec(q(), &[1, 0]),
            w: constant_vec(q(), &[1, 0]),
        };
        let t2 = CurveTerm {
            u: constant_vec(q(), &[0, 1]),
            v: constant_vec(q(), &[0, 1]),
            w: constant_vec(q(), &[0, 1]),
        };
        let curve = LaurentTensorCurve::new(target, vec![t1, t2]).unwrap();
        let cert = verify_border_decomposition(&curve).unwrap();
        assert_eq!(cert.value, 2);
        assert!(cert.evidence.contains("exponent 0"));
    }

    #[test]
    fn non_proportional_limit_is_rejected() {
        let target = Tensor3::diagonal(q(), 2);
        let t = CurveTerm {
            u: constant_vec(q(), &[1, 1]),
            v: constant_vec(q(), &[1, 1]),
            w: constant_vec(q(), &[1, 1]),
        };
        let curve = LaurentTensorCurve::new(target, vec![t]).unwrap();
        let err = verify_border_decomposition(&curve).unwrap_err();
        assert!(err.to_string().contains("not proportional"), "{err}");
    }

    #[test]
    fn fully_cancelling_curve_is_rejected() {
        let target = Tensor3::diagonal(q(), 2);
        let t1 = CurveTerm {
            u: constant_vec(q(), &[1, 0]),
            v: constant_vec(q(), &[1, 0]),
            w: constant_vec(q(), &[1, 0]),
        };
        let t2 = CurveTerm {
            u: constant_vec(q(), &[-1, 0]),
            v: constant_vec(q(), &[1, 0]),
            w: constant_vec(q(), &[1, 0]),
        };
        let curve = LaurentTensorCurve::new(target, vec![t1, t2]).unwrap();
        let err = verify_border_decomposition(&curve).unwrap_err();
        assert!(err.to_string().contains("identically zero"), "{err}");
    }

    #[test]
    fn shape_validation() {
        let target = Tensor3::diagonal(q(), 2);
        let short = CurveTerm {
            u: constant_vec(q(), &[1]),
            v: constant_vec(q(), &[1, 0]),
            w: constant_vec(q(), &[1, 0]),
        };
        assert!(LaurentTensorCurve::new(target.clone(), vec![short]).is_err());
        let zero_vec = CurveTerm {
            u: constant_vec(q(), &[0, 0]),
            v: constant_vec(q(), &[1, 0]),
            w: constant_vec(q(), &[1, 0]),
        };
        assert!(LaurentTensorCurve::new(target.clone(), vec![zero_vec]).is_err());
        assert!(LaurentTensorCurve::new(target, vec![]).is_err());
        assert!(LaurentTensorCurve::new(Tensor3::zeros(q(), [2, 2, 2]), vec![]).is_err());
    }

    #[test]
    fn seven_term_curve_realizes_the_mm_pair() {
        for small_first in [false, true] {
            let curve = mm_pair_curve(q(), small_first).unwrap();
            assert_eq!(curve.terms().len(), 7);
            let cert = verify_border_decomposition(&curve).unwrap();
            assert_eq!(cert.kind, CertKind::Upper);
            assert_eq!(cert.value, 7);
            let big = Tensor3::mm_tensor(q(), 2, 1, 3);
            let small = Tensor3::mm_tensor(q(), 1, 2, 1);
            let sum = if small_first { small.direct_sum(&big) } else { big.direct_sum(&small) };
            assert!(curve.target().same_entries(&sum));
        }
    }

    #[test]
    fn seven_term_curve_over_gf5() {
        let curve = mm_pair_curve(Field::Prime(5), false).unwrap();
        assert_eq!(verify_border_decomposition(&curve).unwrap().value, 7);
    }

    #[test]
    fn curve_roundtrips_through_json() {
        let curve = mm_pair_curve(q(), false).unwrap();
        let text = write_curve_string(&curve);
        let back = read_curve_str(&text).unwrap();
        assert!(back.target().same_entries(curve.target()));
        assert_eq!(back.terms().len(), 7);
        assert_eq!(verify_border_decomposition(&back).unwrap().value, 7);
    }

    #[test]
    fn curve_file_errors() {
        assert!(read_curve_str("{").is_err());
        let bad_exp = r#"{
            "field": "Q",
            "dims": [1, 1, 1],
            "target": [[0, 0, 0, "1"]],
            "terms": [{"u": [{"x": "1"}], "v": [{"0": "1"}], "w": [{"0": "1"}]}]
        }"#;
        assert!(read_curve_str(bad_exp).is_err());
        let out_of_range = r#"{
            "field": "Q",
            "dims": [1, 1, 1],
            "target": [[0, 0, 1, "1"]],
            "terms": []
        }"#;
        assert!(read_curve_str(out_of_range).is_err());
    }
}
