//! Browser bindings. Each export returns a JSON string so the page needs no
//! generated type glue.

use curvlab_core::catalog::{build_manifold, ManifoldSpec};
use curvlab_core::charclass::{self, CharacteristicData};
use curvlab_core::geometry::DerivativeEngine;
use curvlab_core::yamabe::{self, YamabeProblem};
use curvlab_core::{tensor, CurvError};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn wrap(r: Result<Value, CurvError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn curvature_profile_value(manifold: &str, seed: u64, count: usize) -> Result<Value, CurvError> {
    let m = build_manifold(&ManifoldSpec::parse(manifold)?)?;
    let e = DerivativeEngine::analytic();
    let mut rows = Vec::new();
    for p in m.sample_points(seed, count.min(500)) {
        let r = tensor::scalar_identity_residual(&e, m.metric.as_ref(), &p)?;
        rows.push(json!({
            "s": r.s,
            "s_c": r.s_c,
            "torsion": r.torsion_norm_sq,
            "adjoint": r.adjoint_term,
            "residual": r.relative_residual(),
        }));
    }
    Ok(json!({ "manifold": manifold, "points": rows }))
}

/// `s`, `s_C`, `|T|²`, the adjoint term and the identity residual at seeded points.
#[wasm_bindgen]
pub fn curvature_profile(manifold: &str, seed: u64, count: usize) -> String {
    wrap(curvature_profile_value(manifold, seed, count))
}

pub fn ahat_value(numbers: &str, dim: u32, spin: bool) -> Result<Value, CurvError> {
    let data = CharacteristicData::parse(numbers, dim, spin)?;
    let a = charclass::ahat_genus(&data)?;
    let polys: Vec<String> = charclass::ahat_polynomials(4).iter().map(|p| p.display('p')).collect();
    Ok(json!({
        "value": a.value.to_string(),
        "non_integer_spin": a.non_integer_spin,
        "notes": a.notes,
        "polynomials": polys,
    }))
}

/// Exact Â-genus of characteristic numbers such as `"c1^2=0,c2=24"`.
#[wasm_bindgen]
pub fn ahat(numbers: &str, dim: u32, spin: bool) -> String {
    wrap(ahat_value(numbers, dim, spin))
}

pub fn yamabe_trace_value(manifold: &str, seed: u64, iterations: usize) -> Result<Value, CurvError> {
    let m = build_manifold(&ManifoldSpec::parse(manifold)?)?;
    let (grid, basis) = m.yamabe.as_ref().ok_or_else(|| CurvError::QuadratureUnsupported(manifold.into()))?;
    let problem = YamabeProblem::new(m.metric.as_ref(), grid, basis.clone())?;
    let start = yamabe::random_start(problem.dim(), seed, 0.3);
    let r = yamabe::minimize_quotient(&problem, start, iterations.min(500), 1e-10);
    let q: Vec<f64> = r.trace.iter().map(|t| t.quotient).collect();
    Ok(json!({ "manifold": manifold, "quotients": q, "estimate": r.estimate, "monotone": yamabe::trace_is_monotone(&r.trace) }))
}

/// Quotient after each accepted descent step from a seeded start.
#[wasm_bindgen]
pub fn yamabe_trace(manifold: &str, seed: u64, iterations: usize) -> String {
    wrap(yamabe_trace_value(manifold, seed, iterations))
}
