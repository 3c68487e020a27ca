use std::sync::Arc;

use serde_json::{json, Value};

use super::{Algebra, BimodError, Bimodule};
use crate::linalg::{fmt_q, parse_q, Mat, Q};

fn err(m: impl Into<String>) -> BimodError {
    BimodError::Json(m.into())
}

fn rational(v: &Value) -> Result<Q, BimodError> {
    match v {
        Value::String(s) => parse_q(s).ok_or_else(|| err(format!("not a rational: {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::linalg::q)
            .ok_or_else(|| err(format!("not an integer: {n}"))),
        _ => Err(err(format!("expected a rational, found {v}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, BimodError> {
    v.as_array().ok_or_else(|| err(format!("`{what}` must be an array")))
}

fn vector(v: &Value, what: &str) -> Result<Vec<Q>, BimodError> {
    array(v, what)?.iter().map(rational).collect()
}

fn matrix(v: &Value, what: &str) -> Result<Mat, BimodError> {
    let rows = array(v, what)?.iter().map(|r| vector(r, what)).collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(rows).ok_or_else(|| err(format!("`{what}` is not rectangular")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, BimodError> {
    v.get(key).ok_or_else(|| err(format!("missing field `{key}`")))
}

pub fn rationals_to_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

pub fn matrix_to_json(m: &Mat) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rationals_to_json(r)).collect())
}

/// `{"dim": n, "basis": [...], "structure": [[[q, ...], ...], ...], "unit": [...]}`.
pub fn algebra_from_json(v: &Value) -> Result<Algebra, BimodError> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| err("`dim` must be a natural number"))? as usize;
    let basis = match v.get("basis") {
        Some(b) => array(b, "basis")?
            .iter()
            .map(|s| s.as_str().map(String::from).ok_or_else(|| err("basis labels must be strings")))
            .collect::<Result<Vec<_>, _>>()?,
        None => (0..dim).map(|i| format!("e{i}")).collect(),
    };
    if basis.len() != dim {
        return Err(err(format!("{} basis labels for dimension {dim}", basis.len())));
    }
    let structure = array(field(v, "structure")?, "structure")?
        .iter()
        .map(|row| array(row, "structure")?.iter().map(|c| vector(c, "structure")).collect())
        .collect::<Result<Vec<Vec<Vec<Q>>>, _>>()?;
    let unit = vector(field(v, "unit")?, "unit")?;
    Algebra::new(basis, structure, unit)
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    json!({
        "dim": a.dim(),
        "basis": a.basis,
        "structure": a.structure().iter()
            .map(|row| row.iter().map(|c| rationals_to_json(c)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "unit": rationals_to_json(&a.unit),
    })
}

/// `{"dim": m, "left": [matrix, ...], "right": [matrix, ...], "witness": [[q, ...], ...]}`
/// with the witness optional (a missing one is searched for); the result
/// is validated.
pub fn bimodule_from_json(v: &Value, a: Arc<Algebra>, r: Arc<Algebra>) -> Result<Bimodule, BimodError> {
    let dim = field(v, "dim")?.as_u64().ok_or_else(|| err("`dim` must be a natural number"))? as usize;
    let mats = |key: &str| -> Result<Vec<Mat>, BimodError> {
        let ms = array(field(v, key)?, key)?.iter().map(|m| matrix(m, key)).collect::<Result<Vec<_>, _>>()?;
        // a 0×0 matrix reads back as an empty array
        Ok(ms.into_iter().map(|m| if dim == 0 { Mat::zero(0, 0) } else { m }).collect())
    };
    let left = mats("left")?;
    let right = mats("right")?;
    let witness = match v.get("witness") {
        None | Some(Value::Null) => None,
        Some(w) => Some(array(w, "witness")?.iter().map(|g| vector(g, "witness")).collect::<Result<Vec<_>, _>>()?),
    };
    let mut m = Bimodule { a, r, left, right, witness };
    if m.left.iter().chain(&m.right).any(|x| x.rows != dim) {
        return Err(BimodError::InvalidBimodule(format!("action matrices must be {dim}×{dim}")));
    }
    m.validate()?;
    if m.witness.is_none() {
        m.witness = m.find_witness();
    }
    Ok(m)
}

pub fn bimodule_to_json(m: &Bimodule) -> Value {
    let mut v = json!({
        "dim": m.dim(),
        "left": m.left.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "right": m.right.iter().map(matrix_to_json).collect::<Vec<_>>(),
    });
    if let Some(w) = &m.witness {
        v["witness"] = Value::Array(w.iter().map(|g| rationals_to_json(g)).collect());
    }
    v
}
