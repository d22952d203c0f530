//! JSON rendering for reports. Scalars are `p/q` strings so nothing is lost.

use serde_json::{json, Value};

use crate::field::Field;
use crate::label::IndexSet;
use crate::poly::Poly;
use crate::space::Space;

pub const SCHEMA: &str = "ila-report/1";

pub fn labels_json(idx: &IndexSet) -> Value {
    Value::Array(idx.iter().map(|l| Value::String(l.to_string())).collect())
}

pub fn row_json<F: Field>(r: &[F]) -> Value {
    Value::Array(r.iter().map(|x| Value::String(x.to_ratio_string())).collect())
}

pub fn matrix_json<F: Field>(m: &[Vec<F>]) -> Value {
    Value::Array(m.iter().map(|r| row_json(r)).collect())
}

/// `{labels, rank, rows}` with rows in canonical echelon form.
pub fn space_json<F: Field>(v: &Space<F>) -> Value {
    json!({
        "labels": labels_json(v.index()),
        "rank": v.rank(),
        "rows": matrix_json(v.basis()),
    })
}

/// `{coeffs (lowest degree first), text}`.
pub fn poly_json<F: Field>(p: &Poly<F>) -> Value {
    json!({ "coeffs": p.to_strings(), "text": p.to_string() })
}

/// Text rendering of a space: label header then one row per line.
pub fn space_text<F: Field>(v: &Space<F>) -> String {
    let mut out = v.to_fixture();
    if v.rank() == 0 {
        out.push_str("(zero space)\n");
    }
    out
}

pub fn matrix_text<F: Field>(rows: &IndexSet, cols: &IndexSet, m: &[Vec<F>]) -> String {
    let header: Vec<String> = cols.iter().map(|l| l.to_string()).collect();
    let mut out = format!("  {}\n", header.join(" "));
    for (l, r) in rows.iter().zip(m) {
        let cells: Vec<String> = r.iter().map(|x| x.to_ratio_string()).collect();
        out.push_str(&format!("  {l}: {}\n", cells.join(" ")));
    }
    out
}
