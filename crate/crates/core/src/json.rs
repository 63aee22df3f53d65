//! JSON encoding of matrices and channels.
//!
//! Complex matrices are row-major nested arrays of `[re, im]` pairs;
//! real matrices are row-major nested arrays of numbers. Channels are
//! objects `{"repr": <kind>, "dim": N, "data": ...}`.

use crate::linalg::{CMat, RMat, RVec, C64};
use crate::repr::{
    AffineForm, ChannelRepr, ChoiMatrix, FrameForm, KrausSet, Liouvillian, PauliTransferMatrix,
    ReprKind, StiefelForm,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("{context}: expected {expected}")]
    Schema { context: String, expected: &'static str },
    #[error("unknown representation {0:?}")]
    UnknownRepr(String),
    #[error(transparent)]
    Repr(#[from] crate::repr::ReprError),
}

fn schema(context: impl Into<String>, expected: &'static str) -> JsonError {
    JsonError::Schema { context: context.into(), expected }
}

pub fn complex_matrix_to_json(m: &CMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> = (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn complex_matrix_from_json(v: &Value, context: &str) -> Result<CMat, JsonError> {
    let rows = v.as_array().ok_or_else(|| schema(context, "array of rows"))?;
    let nrows = rows.len();
    if nrows == 0 {
        return Err(schema(context, "non-empty matrix"));
    }
    let ncols = rows[0].as_array().ok_or_else(|| schema(context, "array row"))?.len();
    let mut m = CMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema(format!("{context} row {i}"), "array"))?;
        if row.len() != ncols {
            return Err(schema(format!("{context} row {i}"), "consistent row length"));
        }
        for (j, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| schema(format!("{context} entry ({i},{j})"), "[re, im] pair"))?;
            let re = pair[0].as_f64().ok_or_else(|| schema(format!("{context} entry ({i},{j})"), "number"))?;
            let im = pair[1].as_f64().ok_or_else(|| schema(format!("{context} entry ({i},{j})"), "number"))?;
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

pub fn real_matrix_to_json(m: &RMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

pub fn real_matrix_from_json(v: &Value, context: &str) -> Result<RMat, JsonError> {
    let rows = v.as_array().ok_or_else(|| schema(context, "array of rows"))?;
    let nrows = rows.len();
    if nrows == 0 {
        return Err(schema(context, "non-empty matrix"));
    }
    let ncols = rows[0].as_array().ok_or_else(|| schema(context, "array row"))?.len();
    let mut m = RMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema(format!("{context} row {i}"), "array"))?;
        if row.len() != ncols {
            return Err(schema(format!("{context} row {i}"), "consistent row length"));
        }
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] = entry
                .as_f64()
                .ok_or_else(|| schema(format!("{context} entry ({i},{j})"), "number"))?;
        }
    }
    Ok(m)
}

pub fn real_vector_to_json(v: &RVec) -> Value {
    Value::Array(v.iter().map(|x| json!(x)).collect())
}

pub fn real_vector_from_json(v: &Value, context: &str) -> Result<RVec, JsonError> {
    let arr = v.as_array().ok_or_else(|| schema(context, "array"))?;
    let mut out = RVec::zeros(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        out[i] = entry.as_f64().ok_or_else(|| schema(format!("{context}[{i}]"), "number"))?;
    }
    Ok(out)
}

pub fn channel_to_json(chan: &ChannelRepr) -> Value {
    let data = match chan {
        ChannelRepr::Kraus(k) => {
            Value::Array(k.ops().iter().map(complex_matrix_to_json).collect())
        }
        ChannelRepr::Choi(c) => complex_matrix_to_json(c.mat()),
        ChannelRepr::Liouville(l) => complex_matrix_to_json(l.mat()),
        ChannelRepr::Ptm(r) => real_matrix_to_json(r.mat()),
        ChannelRepr::Affine(f) => json!({
            "A": real_matrix_to_json(&f.a),
            "tau": real_vector_to_json(&f.tau),
        }),
        ChannelRepr::Stiefel(s) => json!({
            "kraus_rank": s.kraus_rank(),
            "S": complex_matrix_to_json(s.s()),
        }),
        ChannelRepr::Frame(f) => json!({
            "xi": complex_matrix_to_json(f.xi()),
        }),
    };
    let mut obj = Map::new();
    obj.insert("repr".into(), json!(chan.kind().name()));
    obj.insert("dim".into(), json!(chan.dim()));
    obj.insert("data".into(), data);
    Value::Object(obj)
}

pub fn channel_from_json(v: &Value) -> Result<ChannelRepr, JsonError> {
    let obj = v.as_object().ok_or_else(|| schema("channel", "object"))?;
    let repr = obj
        .get("repr")
        .and_then(|r| r.as_str())
        .ok_or_else(|| schema("channel.repr", "string"))?;
    let kind = ReprKind::from_name(repr).ok_or_else(|| JsonError::UnknownRepr(repr.to_string()))?;
    let dim = obj
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| schema("channel.dim", "positive integer"))? as usize;
    let data = obj.get("data").ok_or_else(|| schema("channel.data", "field"))?;
    Ok(match kind {
        ReprKind::Kraus => {
            let arr = data.as_array().ok_or_else(|| schema("channel.data", "array of matrices"))?;
            let ops = arr
                .iter()
                .enumerate()
                .map(|(i, m)| complex_matrix_from_json(m, &format!("kraus[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ChannelRepr::Kraus(KrausSet::new(ops)?)
        }
        ReprKind::Choi => ChannelRepr::Choi(ChoiMatrix::new(complex_matrix_from_json(data, "choi")?)?),
        ReprKind::Liouville => {
            ChannelRepr::Liouville(Liouvillian::new(complex_matrix_from_json(data, "liouville")?)?)
        }
        ReprKind::Ptm => ChannelRepr::Ptm(PauliTransferMatrix::new(real_matrix_from_json(data, "ptm")?)?),
        ReprKind::Affine => {
            let obj = data.as_object().ok_or_else(|| schema("affine", "object with A, tau"))?;
            let a = real_matrix_from_json(obj.get("A").ok_or_else(|| schema("affine.A", "field"))?, "affine.A")?;
            let tau = real_vector_from_json(
                obj.get("tau").ok_or_else(|| schema("affine.tau", "field"))?,
                "affine.tau",
            )?;
            ChannelRepr::Affine(AffineForm { a, tau })
        }
        ReprKind::Stiefel => {
            let obj = data.as_object().ok_or_else(|| schema("stiefel", "object with S"))?;
            let s = complex_matrix_from_json(
                obj.get("S").ok_or_else(|| schema("stiefel.S", "field"))?,
                "stiefel.S",
            )?;
            ChannelRepr::Stiefel(StiefelForm::new(dim, s)?)
        }
        ReprKind::Frame => {
            let obj = data.as_object().ok_or_else(|| schema("frame", "object with xi"))?;
            let xi = complex_matrix_from_json(
                obj.get("xi").ok_or_else(|| schema("frame.xi", "field"))?,
                "frame.xi",
            )?;
            ChannelRepr::Frame(FrameForm::new(dim, xi)?)
        }
    })
}
