//! Enumeration of the direct sums that the closed additivity arguments do
//! not decide: pairs of concise-admissible formats, up to simultaneous
//! factor permutation and summand swap, surviving every filter, together
//! with the possible border-rank values of each part.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::{Error, Result};

/// One undecided pair of part formats and the possible border-rank values
/// of each part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseRow {
    pub index: usize,
    pub first: [usize; 3],
    pub second: [usize; 3],
    pub first_values: Vec<usize>,
    pub second_values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseTable {
    pub max_dim: usize,
    pub rows: Vec<CaseRow>,
}

impl CaseTable {
    /// Fixed-width text rendering, stable byte for byte.
    pub fn render(&self) -> String {
        let mut out =
            format!("undecided direct sums with joint dimensions at most {}\n", self.max_dim);
        if self.rows.is_empty() {
            out.push_str("(none)\n");
            return out;
        }
        out.push_str(" #  first    second   first values  second values\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:>2}  {:<9}{:<9}{:<14}{}\n",
                row.index,
                triple(row.first),
                triple(row.second),
                value_set(&row.first_values),
                value_set(&row.second_values),
            ));
        }
        out
    }
}

fn triple([a, b, c]: [usize; 3]) -> String {
    format!("({a},{b},{c})")
}

fn value_set(values: &[usize]) -> String {
    let inner = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    format!("{{{inner}}}")
}

const PERM3: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn apply(t: [usize; 3], perm: [usize; 3]) -> [usize; 3] {
    [t[perm[0]], t[perm[1]], t[perm[2]]]
}

/// A format can host a concise tensor iff each dimension is at most the
/// product of the other two (and none is zero).
fn concise_admissible(t: [usize; 3]) -> bool {
    let mut s = t;
    s.sort_unstable();
    let [x, y, z] = s;
    x >= 1 && z <= x * y
}

/// Lexicographically maximal concatenated 6-tuple over the 12 transforms:
/// six simultaneous factor permutations, each with and without swapping
/// the summands.
fn canonical_pair(t1: [usize; 3], t2: [usize; 3]) -> ([usize; 3], [usize; 3]) {
    let mut best: Option<[usize; 6]> = None;
    for (a, b) in [(t1, t2), (t2, t1)] {
        for perm in PERM3 {
            let pa = apply(a, perm);
            let pb = apply(b, perm);
            let key = [pa[0], pa[1], pa[2], pb[0], pb[1], pb[2]];
            if best.is_none_or(|bk| key > bk) {
                best = Some(key);
            }
        }
    }
    let k = best.expect("twelve candidates");
    ([k[0], k[1], k[2]], [k[3], k[4], k[5]])
}

/// Shape families with border rank forced to the leading dimension, in
/// slot order (see the minimal-case classification).
fn minimal_pattern([a, b, c]: [usize; 3]) -> bool {
    c == 1 || b == 1 || (c == 2 && a >= b && b >= 2) || (b == 2 && a >= c && c >= 2) || a >= b * c
}

/// Both parts in a minimal family under one simultaneous permutation: the
/// sum's slice span along the shared leading factor decides additivity.
fn covered_by_pair_pattern(t1: [usize; 3], t2: [usize; 3]) -> bool {
    PERM3
        .iter()
        .any(|&perm| minimal_pattern(apply(t1, perm)) && minimal_pattern(apply(t2, perm)))
}

/// One part of shape `lead` and the other flat (leading dimension 1) under
/// one simultaneous permutation; the closed flat-augmentation results
/// decide these sums.
fn covered_by_flat_augmentation(t1: [usize; 3], t2: [usize; 3], lead: [usize; 3]) -> bool {
    for (a, b) in [(t1, t2), (t2, t1)] {
        for perm in PERM3 {
            if apply(a, perm) == lead && apply(b, perm)[0] == 1 {
                return true;
            }
        }
    }
    false
}

/// Every combination of part values is decided by a common factor whose
/// dimensions bound both values at once.
fn covered_by_common_slot(t1: [usize; 3], t2: [usize; 3]) -> bool {
    let (Some(v1), Some(v2)) = (format_values(t1), format_values(t2)) else {
        return false;
    };
    v1.iter().all(|&x| v2.iter().all(|&y| (0..3).any(|i| x <= t1[i] && y <= t2[i])))
}

/// Possible border-rank values of a concise tensor of the given format
/// once the decided combinations are removed, as displayed in the case
/// table. Data for formats with dimensions up to 4.
fn format_values(t: [usize; 3]) -> Option<&'static [usize]> {
    let mut s = t;
    s.sort_unstable();
    Some(match s {
        [1, 1, 1] => &[1],
        [1, 2, 2] => &[2],
        [1, 3, 3] => &[3],
        [1, 4, 4] => &[4],
        [2, 2, 2] => &[2],
        [2, 2, 3] => &[3],
        [2, 3, 3] => &[3],
        [2, 2, 4] => &[4],
        [2, 3, 4] => &[4],
        [2, 4, 4] => &[4],
        [3, 3, 3] => &[4, 5],
        [3, 3, 4] => &[5],
        [3, 4, 4] => &[5, 6],
        [4, 4, 4] => &[5, 6, 7],
        _ => return None,
    })
}

/// Enumerates, up to equivalence, the pairs of concise-admissible part
/// formats whose slotwise dimension sums stay within `max_dim` and which
/// none of the closed arguments decides. The value data covers part
/// dimensions up to 4, so `max_dim` may be at most 5.
pub fn open_case_table(max_dim: usize) -> Result<CaseTable> {
    if max_dim == 0 || max_dim > 5 {
        return Err(Error::Unsupported(format!(
            "the case table covers joint dimensions 1 through 5, got {max_dim}"
        )));
    }
    let mut seen: BTreeSet<([usize; 3], [usize; 3])> = BTreeSet::new();
    let mut survivors = Vec::new();
    for a1 in 1..max_dim {
        for b1 in 1..max_dim {
            for c1 in 1..max_dim {
                let t1 = [a1, b1, c1];
                if !concise_admissible(t1) {
                    continue;
                }
                for a2 in 1..=max_dim - a1 {
                    for b2 in 1..=max_dim - b1 {
                        for c2 in 1..=max_dim - c1 {
                            let t2 = [a2, b2, c2];
                            if !concise_admissible(t2) {
                                continue;
                            }
                            let pair = canonical_pair(t1, t2);
                            if !seen.insert(pair) {
                                continue;
                            }
                            let (f, s) = pair;
                            if covered_by_pair_pattern(f, s)
                                || covered_by_flat_augmentation(f, s, [3, 2, 2])
                                || covered_by_flat_augmentation(f, s, [3, 3, 3])
                                || covered_by_common_slot(f, s)
                            {
                                continue;
                            }
                            survivors.push(pair);
                        }
                    }
                }
            }
        }
    }
    survivors.sort_unstable();
    let mut rows = Vec::with_capacity(survivors.len());
    for (index, (f, s)) in survivors.into_iter().enumerate() {
        let fv = format_values(f).ok_or_else(|| {
            Error::Unsupported(format!("no value data for format {f:?}"))
        })?;
        let sv = format_values(s).ok_or_else(|| {
            Error::Unsupported(format!("no value data for format {s:?}"))
        })?;
        rows.push(CaseRow {
            index: index + 1,
            first: f,
            second: s,
            first_values: fv.to_vec(),
            second_values: sv.to_vec(),
        });
    }
    Ok(CaseTable { max_dim, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_rows_at_dimension_five() {
        let table = open_case_table(5).unwrap();
        let got: Vec<([usize; 3], [usize; 3])> =
            table.rows.iter().map(|r| (r.first, r.second)).collect();
        let expected = vec![
            ([3, 2, 2], [2, 3, 2]),
            ([3, 3, 2], [2, 2, 3]),
            ([3, 3, 3], [2, 2, 2]),
            ([4, 2, 2], [1, 2, 2]),
            ([4, 2, 2], [1, 3, 3]),
            ([4, 3, 2], [1, 2, 2]),
            ([4, 3, 3], [1, 1, 1]),
            ([4, 3, 3], [1, 2, 2]),
            ([4, 4, 3], [1, 1, 1]),
            ([4, 4, 4], [1, 1, 1]),
        ];
        assert_eq!(got, expected);
        assert_eq!(table.rows[2].first_values, vec![4, 5]);
        assert_eq!(table.rows[2].second_values, vec![2]);
        assert_eq!(table.rows[9].first_values, vec![5, 6, 7]);
        assert_eq!(table.rows[9].second_values, vec![1]);
        for row in &table.rows {
            assert_eq!(row.index, table.rows.iter().position(|r| r == row).unwrap() + 1);
        }
    }

    #[test]
    fn empty_below_dimension_five() {
        for d in 1..=4 {
            let table = open_case_table(d).unwrap();
            assert!(table.rows.is_empty(), "dimension {d} should have no open cases");
        }
    }

    #[test]
    fn unsupported_dimensions_rejected() {
        assert!(open_case_table(0).is_err());
        assert!(open_case_table(6).is_err());
    }

    #[test]
    fn equivalent_pairs_merge() {
        // summand swap plus a simultaneous permutation
        assert_eq!(canonical_pair([3, 2, 2], [2, 3, 3]), ([3, 3, 2], [2, 2, 3]));
        assert_eq!(canonical_pair([2, 2, 4], [3, 3, 1]), ([4, 2, 2], [1, 3, 3]));
        assert_eq!(canonical_pair([3, 1, 3], [2, 4, 2]), ([4, 2, 2], [1, 3, 3]));
        assert_eq!(canonical_pair([3, 3, 4], [2, 2, 1]), ([4, 3, 3], [1, 2, 2]));
        assert_eq!(canonical_pair([3, 2, 4], [2, 2, 1]), ([4, 3, 2], [1, 2, 2]));
        assert_eq!(canonical_pair([2, 2, 4], [2, 2, 1]), ([4, 2, 2], [1, 2, 2]));
        assert_eq!(canonical_pair([2, 2, 3], [2, 3, 2]), ([3, 2, 2], [2, 3, 2]));
        // canonicalization is idempotent
        let (f, s) = canonical_pair([3, 2, 2], [2, 3, 2]);
        assert_eq!(canonical_pair(f, s), (f, s));
    }

    #[test]
    fn render_is_byte_stable() {
        let table = open_case_table(5).unwrap();
        let expected = "\
undecided direct sums with joint dimensions at most 5
 #  first    second   first values  second values
 1  (3,2,2)  (2,3,2)  {3}           {3}
 2  (3,3,2)  (2,2,3)  {3}           {3}
 3  (3,3,3)  (2,2,2)  {4,5}         {2}
 4  (4,2,2)  (1,2,2)  {4}           {2}
 5  (4,2,2)  (1,3,3)  {4}           {3}
 6  (4,3,2)  (1,2,2)  {4}           {2}
 7  (4,3,3)  (1,1,1)  {5}           {1}
 8  (4,3,3)  (1,2,2)  {5}           {2}
 9  (4,4,3)  (1,1,1)  {5,6}         {1}
10  (4,4,4)  (1,1,1)  {5,6,7}       {1}
";
        assert_eq!(table.render(), expected);
        let empty = open_case_table(4).unwrap();
        assert_eq!(
            empty.render(),
            "undecided direct sums with joint dimensions at most 4\n(none)\n"
        );
    }
}
