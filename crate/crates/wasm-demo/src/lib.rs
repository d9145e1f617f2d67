//! Browser bindings for the Morse engine: a stratum explorer, a flow
//! stepper and a homology scan. Each export returns a JSON string; the pure
//! versions in [`api`] are what the native tests exercise.

use wasm_bindgen::prelude::*;

pub mod api;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Two adjacent strata `(dim, length)` and `(dim + 1, length)` with their
/// face edges, matched pairs and critical cells.
#[wasm_bindgen]
pub fn hasse(dim: usize, length: usize) -> Result<String, JsValue> {
    js(api::hasse(dim, length).and_then(|v| api::to_json(&v)))
}

/// Every iterate of the flow on a chain expression, up to its fixed point.
#[wasm_bindgen]
pub fn flow_trace(expr: &str) -> Result<String, JsValue> {
    js(api::flow_trace(expr).and_then(|v| api::to_json(&v)))
}

/// `H_degree` at each length bound in `from..=to`.
#[wasm_bindgen]
pub fn homology_scan(degree: usize, from: usize, to: usize) -> Result<String, JsValue> {
    js(api::homology_scan(degree, from, to).and_then(|v| api::to_json(&v)))
}
