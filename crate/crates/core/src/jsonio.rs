//! JSON encodings of labels.
//!
//! Torsion points serialize as `"num/den"` strings (`"0/1"` for zero),
//! orbits as arrays of point strings in canonical order, partitions as
//! decreasing integer arrays.  Character labels are objects keyed `s`,
//! `lambda`, `xi`; the `s` entry is a list of `[orbit, multiplicity]`
//! pairs and `lambda` a parallel list of `[orbit, partition]` pairs.

use serde_json::{json, Value};

use crate::cyclic::CyclicElt;
use crate::error::{CoreError, CoreResult};
use crate::gl::{GlCharLabel, OrbitTable, SemisimpleClassLabel};
use crate::partition::Partition;
use crate::sl::{OuterAut, SlCharLabel};
use crate::torsion::TorsionPoint;

pub fn orbit_to_json(table: &OrbitTable, id: u32) -> Value {
    Value::Array(
        table
            .orbit(id)
            .points()
            .iter()
            .map(|p| Value::String(p.to_string()))
            .collect(),
    )
}

pub fn partition_to_json(p: &Partition) -> Value {
    Value::Array(p.parts().iter().map(|&x| json!(x)).collect())
}

pub fn semisimple_to_json(table: &OrbitTable, s: &SemisimpleClassLabel) -> Value {
    Value::Array(
        s.pairs
            .iter()
            .map(|&(o, m)| Value::Array(vec![orbit_to_json(table, o), json!(m)]))
            .collect(),
    )
}

pub fn gl_label_to_json(table: &OrbitTable, l: &GlCharLabel) -> Value {
    json!({
        "s": semisimple_to_json(table, &l.s),
        "lambda": Value::Array(
            l.s.pairs
                .iter()
                .zip(l.lambda.iter())
                .map(|(&(o, _), lam)| {
                    Value::Array(vec![orbit_to_json(table, o), partition_to_json(lam)])
                })
                .collect(),
        ),
    })
}

pub fn sl_label_to_json(table: &OrbitTable, l: &SlCharLabel) -> Value {
    let gl = GlCharLabel {
        s: l.s.clone(),
        lambda: l.lambda.clone(),
    };
    let mut v = gl_label_to_json(table, &gl);
    v["xi"] = json!({ "value": l.xi.value, "mod": l.xi.modulus });
    v
}

pub fn outer_aut_to_json(s: &OuterAut) -> Value {
    json!({ "field": s.field_exp, "graph": s.graph_bit })
}

fn parse_point(v: &Value) -> CoreResult<TorsionPoint> {
    let s = v
        .as_str()
        .ok_or_else(|| CoreError::MalformedLabel("torsion point must be a string".into()))?;
    s.parse()
}

fn parse_orbit_id(table: &OrbitTable, v: &Value) -> CoreResult<u32> {
    let arr = v
        .as_array()
        .ok_or_else(|| CoreError::MalformedLabel("orbit must be an array".into()))?;
    let first = arr
        .first()
        .ok_or_else(|| CoreError::MalformedLabel("empty orbit".into()))?;
    let p = parse_point(first)?;
    table
        .lookup(&p)
        .ok_or_else(|| CoreError::MalformedLabel(format!("unknown orbit containing {p}")))
}

pub fn partition_from_json(v: &Value) -> CoreResult<Partition> {
    let arr = v
        .as_array()
        .ok_or_else(|| CoreError::MalformedLabel("partition must be an array".into()))?;
    let mut parts = Vec::with_capacity(arr.len());
    for x in arr {
        let n = x
            .as_u64()
            .ok_or_else(|| CoreError::MalformedLabel("partition part must be a positive integer".into()))?;
        parts.push(u32::try_from(n).map_err(|_| {
            CoreError::MalformedLabel("partition part out of range".into())
        })?);
    }
    Partition::new(parts)
}

/// Parse an `(s, lambda)` pair against the orbit table, re-sorting into
/// canonical key order.
pub fn gl_label_from_json(table: &OrbitTable, v: &Value) -> CoreResult<GlCharLabel> {
    let s_arr = v
        .get("s")
        .and_then(|x| x.as_array())
        .ok_or_else(|| CoreError::MalformedLabel("missing `s`".into()))?;
    let lam_arr = v
        .get("lambda")
        .and_then(|x| x.as_array())
        .ok_or_else(|| CoreError::MalformedLabel("missing `lambda`".into()))?;
    if s_arr.len() != lam_arr.len() {
        return Err(CoreError::MalformedLabel(
            "`s` and `lambda` must have the same length".into(),
        ));
    }
    let mut entries: Vec<((u32, u32), Partition)> = Vec::with_capacity(s_arr.len());
    for (se, le) in s_arr.iter().zip(lam_arr.iter()) {
        let spair = se
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| CoreError::MalformedLabel("`s` entry must be [orbit, mult]".into()))?;
        let orbit = parse_orbit_id(table, &spair[0])?;
        let mult = spair[1]
            .as_u64()
            .filter(|&m| m >= 1)
            .ok_or_else(|| CoreError::MalformedLabel("multiplicity must be >= 1".into()))?
            as u32;
        let lpair = le
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| CoreError::MalformedLabel("`lambda` entry must be [orbit, partition]".into()))?;
        let lorbit = parse_orbit_id(table, &lpair[0])?;
        if lorbit != orbit {
            return Err(CoreError::MalformedLabel(
                "`lambda` keys must match `s` keys in order".into(),
            ));
        }
        let lam = partition_from_json(&lpair[1])?;
        if lam.weight() != mult {
            return Err(CoreError::MalformedLabel(format!(
                "partition {lam} does not have weight {mult}"
            )));
        }
        entries.push(((orbit, mult), lam));
    }
    entries.sort_by_key(|a| a.0);
    let label = GlCharLabel {
        s: SemisimpleClassLabel {
            pairs: entries.iter().map(|e| e.0).collect(),
        },
        lambda: entries.into_iter().map(|e| e.1).collect(),
    };
    let n: u32 = label.s.weighted_degree(table);
    if n != table.params.n {
        return Err(CoreError::MalformedLabel(format!(
            "label has weighted degree {n}, expected {}",
            table.params.n
        )));
    }
    Ok(label)
}

pub fn sl_label_from_json(table: &OrbitTable, v: &Value) -> CoreResult<SlCharLabel> {
    let gl = gl_label_from_json(table, v)?;
    let xi_v = v
        .get("xi")
        .ok_or_else(|| CoreError::MalformedLabel("missing `xi`".into()))?;
    let value = xi_v
        .get("value")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CoreError::MalformedLabel("missing `xi.value`".into()))?;
    let modulus = xi_v
        .get("mod")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CoreError::MalformedLabel("missing `xi.mod`".into()))?;
    let (fam, _) = crate::sl::family_of(&gl, table);
    if modulus != fam.a_lambda {
        return Err(CoreError::MalformedLabel(format!(
            "xi modulus {modulus} does not match a_lambda = {}",
            fam.a_lambda
        )));
    }
    Ok(SlCharLabel {
        s: fam.s,
        lambda: fam.lambda,
        xi: CyclicElt::new(value, modulus)?,
    })
}

pub fn outer_aut_from_json(params: &crate::params::GroupParams, v: &Value) -> CoreResult<OuterAut> {
    let k = v
        .get("field")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CoreError::MalformedLabel("missing `field`".into()))?;
    let b = v
        .get("graph")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| CoreError::MalformedLabel("missing `graph`".into()))?;
    Ok(OuterAut::new(k as u32, (b % 2) as u8, params))
}
