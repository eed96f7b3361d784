//! Direct-sum additivity checks: compare `R(p (+) q)` with `R(p) + R(q)`.

use serde::Serialize;

use crate::tensor3::Tensor3;
use crate::{Error, Result};

use super::{rank_interval, tensor_rank, RankCertificate};

/// Rank evidence for both summands and their direct sum. Over finite
/// fields all three certificates are exact and `additive` is decided;
/// over the rationals interval certificates may leave it undetermined.
#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    pub rank_first: RankCertificate,
    pub rank_second: RankCertificate,
    pub rank_sum: RankCertificate,
    /// `Some(true)` / `Some(false)` when decided, `None` when the
    /// certificates cannot separate the two sides
    pub additive: Option<bool>,
    /// `R(p) + R(q) - R(p (+) q)` when all three ranks are exact
    pub deficit: Option<i64>,
}

/// Decides (or brackets) additivity for `p (+) q`.
pub fn additivity_check(p: &Tensor3, q: &Tensor3, budget: Option<usize>, threads: usize) -> Result<AdditivityReport> {
    if p.field() != q.field() {
        return Err(Error::Precondition("summands live over different fields".into()));
    }
    let sum = p.direct_sum(q);
    if p.field().is_finite() {
        let rank_first = tensor_rank(p, budget, threads)?;
        let rank_second = tensor_rank(q, budget, threads)?;
        let rank_sum = tensor_rank(&sum, budget, threads)?;
        let all_exact = [&rank_first, &rank_second, &rank_sum]
            .iter()
            .all(|c| c.kind == super::CertKind::Exact);
        let (additive, deficit) = if all_exact {
            let d = rank_first.value as i64 + rank_second.value as i64 - rank_sum.value as i64;
            (Some(d == 0), Some(d))
        } else {
            (None, None)
        };
        Ok(AdditivityReport { rank_first, rank_second, rank_sum, additive, deficit })
    } else {
        let (lo1, up1) = rank_interval(p)?;
        let (lo2, up2) = rank_interval(q)?;
        let (lo_sum, up_sum) = rank_interval(&sum)?;
        // R(sum) >= lo_sum and R(p) + R(q) <= up1 + up2: equality pins both
        let additive = if lo_sum.value == up1.value + up2.value {
            Some(true)
        } else if up_sum.value < lo1.value + lo2.value {
            Some(false)
        } else {
            None
        };
        let deficit = if lo1.value == up1.value && lo2.value == up2.value && lo_sum.value == up_sum.value
        {
            Some(lo1.value as i64 + lo2.value as i64 - lo_sum.value as i64)
        } else {
            None
        };
        Ok(AdditivityReport {
            rank_first: up1,
            rank_second: up2,
            rank_sum: up_sum,
            additive,
            deficit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    #[test]
    fn diagonal_sums_are_additive_over_gf2() {
        let f = Field::prime(2).unwrap();
        let p = Tensor3::diagonal(f, 2);
        let q = Tensor3::w_state(f);
        let report = additivity_check(&p, &q, None, 1).unwrap();
        assert_eq!(report.additive, Some(true));
        assert_eq!(report.deficit, Some(0));
        assert_eq!(report.rank_sum.value, 5);
    }

    #[test]
    fn rational_diagonals_decided_by_intervals() {
        let p = Tensor3::diagonal(Field::Rational, 2);
        let q = Tensor3::diagonal(Field::Rational, 3);
        let report = additivity_check(&p, &q, None, 1).unwrap();
        assert_eq!(report.additive, Some(true));
        assert_eq!(report.deficit, Some(0));
    }

    #[test]
    fn mismatched_fields_rejected() {
        let p = Tensor3::diagonal(Field::Rational, 2);
        let q = Tensor3::diagonal(Field::prime(2).unwrap(), 2);
        assert!(additivity_check(&p, &q, None, 1).is_err());
    }
}
