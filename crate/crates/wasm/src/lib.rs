//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes spec-file JSON and returns JSON or a rational string. The `*_json`
//! functions hold the logic and are what the native tests exercise.

use kqm_core::classifier::{classify_composition, classify_weighted, verify_with_oracle, DefectQuery};
use kqm_core::derivatives::{f_factor, h, wgram};
use kqm_core::{corpus, parse_spec, SpecFile, VertexId, WeightSpec};
use wasm_bindgen::prelude::*;

fn err(e: kqm_core::Error) -> String {
    e.to_string()
}

/// Spec-file JSON of a built-in example.
pub fn example_spec_json(id: &str) -> Result<String, String> {
    let ex = corpus::by_id(id).ok_or_else(|| format!("unknown example {id:?}"))?;
    Ok(SpecFile::from_spec(&ex.measure, ex.weight.as_ref(), Some(ex.k), Some(ex.m)).to_json())
}

/// Classification report as JSON, cross-checked by the matrix oracle.
pub fn classify_json(spec: &str, k: usize, m: usize, weighted: bool) -> Result<String, String> {
    let loaded = parse_spec(spec).map_err(err)?;
    let q = DefectQuery::new(k, m).map_err(err)?;
    let w = match (weighted, &loaded.weight) {
        (false, _) => None,
        (true, Some(w)) => Some(w),
        (true, None) => return Err("the spec has no weight section".into()),
    };
    let mut report = match w {
        Some(w) => classify_weighted(&loaded.measure, w, q),
        None => classify_composition(&loaded.measure, q),
    }
    .map_err(err)?;
    verify_with_oracle(&mut report, &loaded.measure, w).map_err(err)?;
    Ok(report.to_structured())
}

/// `h`, `F` or `wgram` at one vertex. Specs without weights use `π ≡ 1`.
pub fn compute_value(spec: &str, vertex: &str, p: usize, quantity: &str) -> Result<String, String> {
    let loaded = parse_spec(spec).map_err(err)?;
    let measure = &loaded.measure;
    measure.validate().map_err(err)?;
    let v: VertexId = vertex.parse().map_err(err)?;
    let w = loaded.weight.clone().unwrap_or_else(|| WeightSpec::ones(measure.graph()));
    let value = match quantity {
        "h" => h(measure, v, p),
        "F" => f_factor(measure, &w, v, p),
        "wgram" => wgram(measure, &w, v, p),
        other => return Err(format!("unknown quantity {other:?}; expected h, F or wgram")),
    }
    .map_err(err)?;
    Ok(value.to_string())
}

#[wasm_bindgen(js_name = exampleSpec)]
pub fn example_spec(id: &str) -> Result<String, JsValue> {
    example_spec_json(id).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(spec: &str, k: usize, m: usize, weighted: bool) -> Result<String, JsValue> {
    classify_json(spec, k, m, weighted).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compute(spec: &str, vertex: &str, p: usize, quantity: &str) -> Result<String, JsValue> {
    compute_value(spec, vertex, p, quantity).map_err(|e| JsValue::from_str(&e))
}
