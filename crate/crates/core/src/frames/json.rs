//! Frame and model JSON:
//! `{"worlds": n, "leq": [[i, j], ..], "N": {"<upset>": <upset>, ..}, "valuation": {"p": <upset>}}`
//! with sets as bitmasks (bit `i` is world `i`).
//!
//! Output is canonical: `leq` lists strict pairs in lexicographic order and
//! `N` keys appear in increasing numeric order. Reflexive pairs are accepted
//! on input.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::bits::Bits;

use super::{FrameError, NFrame, NModel, Poset};

fn bad(msg: impl Into<String>) -> FrameError {
    FrameError::Json(msg.into())
}

pub fn poset_to_json(p: &Poset) -> Value {
    let leq: Vec<Value> = p.leq_pairs().into_iter().map(|(a, b)| json!([a, b])).collect();
    json!({ "worlds": p.size(), "leq": leq })
}

pub fn frame_to_json(fr: &NFrame) -> Value {
    let mut v = poset_to_json(fr.poset());
    let mut n = Map::new();
    for (x, y) in fr.upsets().iter().zip(fr.table_values()) {
        n.insert(x.0.to_string(), json!(y.0));
    }
    v["N"] = Value::Object(n);
    v
}

pub fn model_to_json(m: &NModel) -> Value {
    let mut v = frame_to_json(&m.frame);
    let val: Map<String, Value> = m.valuation.iter().map(|(k, b)| (k.clone(), json!(b.0))).collect();
    v["valuation"] = Value::Object(val);
    v
}

pub(crate) fn as_usize(v: &Value, what: &str) -> Result<usize, FrameError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

pub(crate) fn pairs(v: &Value, what: &str) -> Result<Vec<(usize, usize)>, FrameError> {
    let arr = v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))?;
    arr.iter()
        .map(|pair| match pair.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((as_usize(a, what)?, as_usize(b, what)?)),
            _ => Err(bad(format!("{what} entries must be [i, j] pairs"))),
        })
        .collect()
}

pub(crate) fn mask_map(v: &Value, what: &str) -> Result<BTreeMap<Bits, Bits>, FrameError> {
    let obj = v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))?;
    obj.iter()
        .map(|(k, val)| {
            let key = k
                .trim()
                .parse::<u64>()
                .map_err(|_| bad(format!("{what} key '{k}' is not a bitmask")))?;
            let value = val
                .as_u64()
                .ok_or_else(|| bad(format!("{what} value for '{k}' is not a bitmask")))?;
            Ok((Bits(key), Bits(value)))
        })
        .collect()
}

pub fn poset_from_json(v: &Value) -> Result<Poset, FrameError> {
    let n = as_usize(v.get("worlds").ok_or_else(|| bad("missing \"worlds\""))?, "worlds")?;
    let leq = match v.get("leq") {
        Some(l) => pairs(l, "leq")?,
        None => Vec::new(),
    };
    let strict: Vec<(usize, usize)> = leq.into_iter().filter(|(a, b)| a != b).collect();
    Poset::new(n, &strict)
}

pub fn frame_from_json(v: &Value) -> Result<NFrame, FrameError> {
    let p = poset_from_json(v)?;
    let table = mask_map(v.get("N").ok_or_else(|| bad("missing \"N\""))?, "N")?;
    for (&x, &y) in &table {
        if !x.is_subset(p.worlds()) || !y.is_subset(p.worlds()) {
            return Err(bad(format!("N entry {} -> {} mentions a world out of range", x.0, y.0)));
        }
    }
    NFrame::new(p, &table)
}

pub fn model_from_json(v: &Value) -> Result<NModel, FrameError> {
    let fr = frame_from_json(v)?;
    let mut valuation = BTreeMap::new();
    if let Some(val) = v.get("valuation") {
        let obj = val.as_object().ok_or_else(|| bad("valuation must be an object"))?;
        for (k, x) in obj {
            let mask = x
                .as_u64()
                .ok_or_else(|| bad(format!("valuation of '{k}' is not a bitmask")))?;
            valuation.insert(k.clone(), Bits(mask));
        }
    }
    NModel::new(fr, valuation)
}
