//! Normative JSON representation of a method: 1-based sparse tensor entries
//! and weights, coefficient values as decimal strings with 17 significant
//! digits so a round trip through text is bit-exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tableau::types::{NprkMethod, SparsityClass, TensorEntry};

#[derive(Serialize, Deserialize)]
struct MethodJson {
    name: String,
    s: usize,
    a: Vec<(usize, usize, usize, String)>,
    b: Vec<(usize, usize, String)>,
    class: SparsityClass,
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json(m: &NprkMethod) -> String {
    let doc = MethodJson {
        name: m.name().to_owned(),
        s: m.stages(),
        a: m
            .a_entries()
            .iter()
            .map(|e| (e.i, e.j, e.k, fmt_value(e.value)))
            .collect(),
        b: m
            .b_entries()
            .iter()
            .map(|&(i, j, v)| (i, j, fmt_value(v)))
            .collect(),
        class: m.class(),
    };
    serde_json::to_string_pretty(&doc).expect("method serialization")
}

pub fn from_json(text: &str) -> Result<NprkMethod> {
    let doc: MethodJson = serde_json::from_str(text)?;
    let parse = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::InvalidMethod(format!("bad coefficient '{s}': {e}")))
    };
    let mut a = Vec::with_capacity(doc.a.len());
    for (i, j, k, v) in &doc.a {
        a.push(TensorEntry { i: *i, j: *j, k: *k, value: parse(v)? });
    }
    let mut b = Vec::with_capacity(doc.b.len());
    for (i, j, v) in &doc.b {
        b.push((*i, *j, parse(v)?));
    }
    let m = NprkMethod::new(doc.name, doc.s, a, b)?;
    if m.class() != doc.class {
        return Err(Error::InvalidMethod(format!(
            "declared class {} does not match coefficients ({})",
            doc.class,
            m.class()
        )));
    }
    Ok(m)
}
