//! JSON encodings of matrices and tuples. Entries are always strings.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::NilTuple;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        msg: msg.into(),
    }
}

fn join(prefix: &str, rest: &str) -> String {
    if prefix.is_empty() {
        rest.to_string()
    } else {
        format!("{prefix}.{rest}")
    }
}

pub fn field_from_json(v: &Value, path: &str) -> Result<FieldSpec> {
    serde_json::from_value(v.clone()).map_err(|e| schema(path, e.to_string()))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let rows: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    json!({ "field": m.field(), "rows": rows })
}

fn rows_from_json(field: FieldSpec, v: &Value, path: &str) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| schema(&rpath, "expected an array of entries"))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            let s = e
                .as_str()
                .ok_or_else(|| schema(&epath, "entries must be strings"))?;
            let x = field.parse_scalar(s).map_err(|err| match err {
                Error::Schema { msg, .. } => schema(&epath, msg),
                other => schema(&epath, other.to_string()),
            })?;
            parsed.push(x);
        }
        out.push(parsed);
    }
    if out.iter().any(|r| r.len() != out.first().map_or(0, Vec::len)) {
        return Err(schema(path, "rows have different lengths"));
    }
    Matrix::from_rows(field, out).map_err(|e| schema(path, e.to_string()))
}

/// Parses a matrix object; `field` overrides a missing `"field"` key.
pub fn matrix_from_json_at(v: &Value, path: &str, field: Option<FieldSpec>) -> Result<Matrix> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected a matrix object"))?;
    let f = match (obj.get("field"), field) {
        (Some(fv), outer) => {
            let f = field_from_json(fv, &join(path, "field"))?;
            if outer.is_some_and(|o| o != f) {
                return Err(schema(join(path, "field"), "field differs from the enclosing object"));
            }
            f
        }
        (None, Some(f)) => f,
        (None, None) => return Err(schema(join(path, "field"), "missing")),
    };
    let rows = obj
        .get("rows")
        .ok_or_else(|| schema(join(path, "rows"), "missing"))?;
    rows_from_json(f, rows, &join(path, "rows"))
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    matrix_from_json_at(v, "", None)
}

/// Tuple object without validation of commutation or nilpotency.
pub fn matrices_from_json(v: &Value) -> Result<(FieldSpec, usize, Vec<Matrix>)> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("", "expected a tuple object"))?;
    let f = field_from_json(obj.get("field").ok_or_else(|| schema("field", "missing"))?, "field")?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("n", "expected a nonnegative integer"))? as usize;
    let mats = obj
        .get("mats")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("mats", "expected an array"))?;
    let mut out = Vec::with_capacity(mats.len());
    for (i, m) in mats.iter().enumerate() {
        let path = format!("mats[{i}]");
        let m = matrix_from_json_at(m, &path, Some(f))?;
        if m.rows() != n || m.cols() != n {
            return Err(schema(path, format!("expected {n}x{n}")));
        }
        out.push(m);
    }
    Ok((f, n, out))
}

pub fn tuple_to_json(t: &NilTuple) -> Value {
    mats_to_json(t.field(), t.n(), t.mats())
}

pub fn mats_to_json(field: FieldSpec, n: usize, mats: &[Matrix]) -> Value {
    let mats: Vec<Value> = mats.iter().map(matrix_to_json).collect();
    json!({ "field": field, "n": n, "mats": mats })
}

/// Parses and validates a tuple of commuting nilpotent matrices.
pub fn tuple_from_json(v: &Value) -> Result<NilTuple> {
    let (f, n, mats) = matrices_from_json(v)?;
    NilTuple::new(f, n, mats)
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Value::deserialize(d)?;
        matrix_from_json(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::jordan_block;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_j2() {
        let v: Value =
            serde_json::from_str(r#"{"field":{"kind":"q"},"rows":[["0","1"],["0","0"]]}"#).unwrap();
        assert_eq!(matrix_from_json(&v).unwrap(), jordan_block(FieldSpec::Rationals, 2));
    }

    #[test]
    fn round_trips() {
        let f = FieldSpec::Prime(101);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = Matrix::random(f, 4, 3, &mut rng);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Matrix>(&text).unwrap(), m);
        let q = FieldSpec::Rationals;
        let m = Matrix::from_rows(
            q,
            vec![vec![q.ratio(-7, 3).unwrap(), q.parse_scalar("123456789012345678901234567").unwrap()]],
        )
        .unwrap();
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let v: Value =
            serde_json::from_str(r#"{"field":{"kind":"q"},"rows":[["0","1"],["1/0","0"]]}"#).unwrap();
        match matrix_from_json(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "rows[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let v: Value = serde_json::from_str(r#"{"field":{"kind":"q"},"rows":[[0]]}"#).unwrap();
        assert!(matches!(matrix_from_json(&v), Err(Error::Schema { .. })));
        let v: Value = serde_json::from_str(r#"{"field":{"kind":"fp","p":4},"rows":[]}"#).unwrap();
        match matrix_from_json(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "field"),
            other => panic!("unexpected {other:?}"),
        }
        let v: Value = serde_json::from_str(
            r#"{"field":{"kind":"q"},"n":2,"mats":[{"rows":[["0","1"],["0","0"]]},{"rows":[["0","0"],["x","0"]]}]}"#,
        )
        .unwrap();
        match tuple_from_json(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "mats[1].rows[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tuple_validation_on_load() {
        let f = FieldSpec::Rationals;
        let j = jordan_block(f, 3);
        let bad = mats_to_json(f, 3, &[j.clone(), j.transpose()]);
        assert!(matches!(tuple_from_json(&bad), Err(Error::NotCommuting(_))));
        let good = mats_to_json(f, 3, &[j.clone(), j.pow(2).unwrap()]);
        let t = tuple_from_json(&good).unwrap();
        assert_eq!(tuple_to_json(&t), good);
    }
}
