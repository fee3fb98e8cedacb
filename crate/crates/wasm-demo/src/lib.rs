//! Browser bindings for three interactive views: the Banach iteration of the
//! contraction map, chart collapse along an n schedule, and current scaling
//! near the vacuum. Every export returns a JSON string.

use serde::Serialize;
use serde_json::json;
use su2_reduce::ansatz::{vacuum_report, LambdaRecipe};
use su2_reduce::bundle::{collapse_chart, collapse_threshold};
use su2_reduce::contraction::{banach_iterate, contraction_validity, ContractionMap, Vec4};
use su2_reduce::lattice::Grid4;
use su2_reduce::su2::Coupling;
use su2_reduce::Error;
use wasm_bindgen::prelude::*;

const BANACH_TOL: f64 = 1e-12;
const BANACH_MAX_ITER: usize = 200;
const COLLAPSE_SAMPLES: usize = 128;
const MAX_VACUUM_GRID: usize = 12;

fn vec4(v: &[f64]) -> Result<Vec4, Error> {
    <[f64; 4]>::try_from(v).map_err(|_| Error::InvalidArgument("expected four coordinates".into()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

/// Iterates λ_n from x* + offset·e₁ and returns iterates, step distances and ratios.
/// A run that hits the iteration cap is still returned, with `converged: false`.
pub fn banach_trace_json(center: &[f64], n: u64, offset: f64) -> Result<String, Error> {
    let c = vec4(center)?;
    let map = ContractionMap::new(c, n)?;
    let cert = contraction_validity(&map);
    let x0 = [c[0] + offset, c[1], c[2], c[3]];
    let trace = match banach_iterate(&map, x0, BANACH_TOL, BANACH_MAX_ITER) {
        Ok(t) => t,
        Err(Error::NonConvergence { trace }) => *trace,
        Err(e) => return Err(e),
    };
    Ok(to_json(&json!({
        "valid": cert.valid,
        "bound": cert.bound,
        "converged": trace.converged,
        "steps": trace.steps(),
        "iterates": trace.iterates,
        "distances": trace.distances,
        "ratios": trace.ratios(),
        "measured_ratio": trace.measured_ratio(),
    })))
}

/// Image diameter against the certified bound for n = n0·2^k, k < count.
pub fn collapse_curve_json(center: &[f64], n0: u64, count: u32, tol: f64, seed: u64) -> Result<String, Error> {
    let c = vec4(center)?;
    if n0 == 0 || count == 0 || count > 16 {
        return Err(Error::InvalidArgument("need n0 ≥ 1 and 1 ≤ count ≤ 16".into()));
    }
    let schedule: Vec<u64> = (0..count).map(|k| n0 << k).collect();
    let report = collapse_chart(c, &schedule, tol, COLLAPSE_SAMPLES, seed)?;
    let threshold = collapse_threshold(&c, tol)?;
    Ok(to_json(&json!({ "report": report, "threshold": threshold })))
}

/// ‖j‖ and ‖□f‖ for λ = ε·(curl-free base) on an n⁴ grid, with log-log slopes.
pub fn vacuum_scaling_json(grid: usize, amplitudes: &[f64], g: f64) -> Result<String, Error> {
    if grid > MAX_VACUUM_GRID {
        return Err(Error::InvalidArgument(format!("grid above {MAX_VACUUM_GRID} is too slow for the page")));
    }
    let grid = Grid4::cubic(grid)?;
    let base = LambdaRecipe::gradient_base().lambda_field(grid)?;
    let report = vacuum_report(&base, amplitudes, Coupling::new(g)?)?;
    Ok(to_json(&report))
}

fn js(r: Result<String, Error>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn banach_trace(center: &[f64], n: u32, offset: f64) -> Result<String, JsError> {
    js(banach_trace_json(center, n.into(), offset))
}

#[wasm_bindgen]
pub fn collapse_curve(center: &[f64], n0: u32, count: u32, tol: f64) -> Result<String, JsError> {
    js(collapse_curve_json(center, n0.into(), count, tol, 42))
}

#[wasm_bindgen]
pub fn vacuum_scaling(grid: u32, amplitudes: &[f64], g: f64) -> Result<String, JsError> {
    js(vacuum_scaling_json(grid as usize, amplitudes, g))
}
