//! Tensor file format: JSON with the field declared once, sparse entries,
//! and an optional direct-sum splitting.
//!
//! ```json
//! {
//!   "field": "GF(2)",
//!   "dims": [2, 2, 2],
//!   "split": [[1, 1], [1, 1], [1, 1]],
//!   "entries": [[0, 0, 1, "1"], [0, 1, 0, "1"], [1, 0, 0, "1"]]
//! }
//! ```
//!
//! Zero entries are omitted on write; duplicate coordinates are an error on
//! read. Scalars are strings: `"n"` or `"n/d"` over the rationals, decimal
//! residues over a prime field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Splitting, Tensor3};
use crate::exactalg::Field;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TensorFile {
    field: String,
    dims: [usize; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<[[usize; 2]; 3]>,
    entries: Vec<(usize, usize, usize, String)>,
}

pub fn write_tensor_string(t: &Tensor3) -> String {
    let [a, b, c] = t.dims();
    let mut entries = Vec::new();
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                let v = t.get(i, j, k);
                if !v.is_zero() {
                    entries.push((i, j, k, v.to_string()));
                }
            }
        }
    }
    let file = TensorFile {
        field: t.field().to_string(),
        dims: [a, b, c],
        split: t.split().map(|s| [[s.a.0, s.a.1], [s.b.0, s.b.1], [s.c.0, s.c.1]]),
        entries,
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn write_tensor(t: &Tensor3, path: &Path) -> Result<()> {
    std::fs::write(path, write_tensor_string(t) + "\n")?;
    Ok(())
}

pub fn read_tensor_str(text: &str) -> Result<Tensor3> {
    let file: TensorFile =
        serde_json::from_str(text).map_err(|e| Error::BadTensorFile(e.to_string()))?;
    let field: Field = file.field.parse()?;
    let [a, b, c] = file.dims;
    let mut t = Tensor3::zeros(field, [a, b, c]);
    let mut seen = std::collections::HashSet::new();
    for (i, j, k, val) in &file.entries {
        if *i >= a || *j >= b || *k >= c {
            return Err(Error::EntryOutOfRange { i: *i, j: *j, k: *k, a, b, c });
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(Error::DuplicateEntry(*i, *j, *k));
        }
        t.set(*i, *j, *k, field.parse(val)?);
    }
    if let Some([[a1, a2], [b1, b2], [c1, c2]]) = file.split {
        if a1 + a2 != a || b1 + b2 != b || c1 + c2 != c {
            return Err(Error::BadTensorFile(format!(
                "split [[{a1},{a2}],[{b1},{b2}],[{c1},{c2}]] does not sum to dims [{a},{b},{c}]"
            )));
        }
        t = t.with_split(Splitting { a: (a1, a2), b: (b1, b2), c: (c1, c2) });
    }
    Ok(t)
}

pub fn read_tensor(path: &Path) -> Result<Tensor3> {
    let text = std::fs::read_to_string(path)?;
    read_tensor_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    #[test]
    fn round_trip_preserves_tensor_and_split() {
        let p = Tensor3::diagonal(Field::Rational, 2);
        let q = Tensor3::w_state(Field::Rational);
        let s = p.direct_sum(&q);
        let text = write_tensor_string(&s);
        let back = read_tensor_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(back.split().is_some());
    }

    #[test]
    fn rational_entries_round_trip() {
        let f = Field::Rational;
        let mut t = Tensor3::zeros(f, [1, 2, 2]);
        t.set(0, 0, 0, f.parse("-7/3").unwrap());
        t.set(0, 1, 1, f.parse("5").unwrap());
        let back = read_tensor_str(&write_tensor_string(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn duplicate_entry_is_rejected() {
        let text = r#"{"field":"GF(2)","dims":[1,1,2],
            "entries":[[0,0,0,"1"],[0,0,0,"1"]]}"#;
        match read_tensor_str(text) {
            Err(Error::DuplicateEntry(0, 0, 0)) => {}
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let text = r#"{"field":"Q","dims":[1,1,1],"entries":[[0,0,1,"1"]]}"#;
        assert!(matches!(read_tensor_str(text), Err(Error::EntryOutOfRange { .. })));
    }

    #[test]
    fn bad_split_is_rejected() {
        let text = r#"{"field":"Q","dims":[2,2,2],"split":[[1,0],[1,1],[1,1]],
            "entries":[]}"#;
        assert!(matches!(read_tensor_str(text), Err(Error::BadTensorFile(_))));
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = r#"{"field":"GF(9)","dims":[1,1,1],"entries":[]}"#;
        assert!(read_tensor_str(text).is_err());
    }

    #[test]
    fn gf_entries_reduce_mod_p() {
        let text = r#"{"field":"GF(3)","dims":[1,1,1],"entries":[[0,0,0,"-1"]]}"#;
        let t = read_tensor_str(text).unwrap();
        assert_eq!(t.get(0, 0, 0), &Field::prime(3).unwrap().from_i64(2));
    }
}
