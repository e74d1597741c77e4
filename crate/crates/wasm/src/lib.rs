//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON text in the same formats as the
//! command-line tool. The `*_impl` functions hold the logic and run natively;
//! the exported wrappers only convert errors for JavaScript.

use serde_json::json;
use stp_core::algebra::v_product;
use stp_core::dynamics::{continuous_solution, dimension_profile, simulate_discrete, Schedule};
use stp_core::io::{parse_matrix, parse_vector, vector_to_json};
use stp_core::{Matrix, Vect};
use wasm_bindgen::prelude::*;

/// Largest state dimension the page will simulate.
pub const DEMO_MAX_DIM: usize = 4096;

/// Largest number of samples the page will request.
pub const DEMO_MAX_SAMPLES: usize = 2000;

fn inputs(matrix: &str, vector: &str) -> Result<(Matrix, Vect), String> {
    let a = parse_matrix(matrix).map_err(|e| format!("matrix: {e}"))?;
    let x = parse_vector(vector).map_err(|e| format!("vector: {e}"))?;
    Ok((a, x))
}

pub fn v_product_impl(matrix: &str, vector: &str) -> Result<String, String> {
    let (a, x) = inputs(matrix, vector)?;
    v_product(&a, &x).map(|y| vector_to_json(&y)).map_err(|e| e.to_string())
}

pub fn profile_impl(matrix: &str, r0: usize) -> Result<String, String> {
    let a = parse_matrix(matrix).map_err(|e| format!("matrix: {e}"))?;
    let p = dimension_profile(&a, r0).map_err(|e| e.to_string())?;
    serde_json::to_string(&p).map_err(|e| e.to_string())
}

/// Trajectory as `{"t": [...], "states": [[...], ...]}`. Discrete runs take
/// `samples` steps; continuous runs sample `[0, t_end]` at `samples + 1`
/// evenly spaced times.
pub fn trajectory_impl(matrix: &str, vector: &str, continuous: bool, samples: usize, t_end: f64) -> Result<String, String> {
    if samples > DEMO_MAX_SAMPLES {
        return Err(format!("at most {DEMO_MAX_SAMPLES} samples"));
    }
    let (a, x0) = inputs(matrix, vector)?;
    let traj = if continuous {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err("end time must be positive".into());
        }
        let ts: Vec<f64> = (0..=samples).map(|i| t_end * i as f64 / samples.max(1) as f64).collect();
        continuous_solution(&a, &x0, &ts)
    } else {
        simulate_discrete(&Schedule::Constant(a), &x0, samples, DEMO_MAX_DIM)
    }
    .map_err(|e| e.to_string())?;
    let t: Vec<f64> = traj.iter().map(|s| s.t).collect();
    let states: Vec<&[f64]> = traj.iter().map(|s| s.state.data()).collect();
    Ok(json!({ "t": t, "states": states }).to_string())
}

#[wasm_bindgen]
pub fn v_product_json(matrix: &str, vector: &str) -> Result<String, JsValue> {
    v_product_impl(matrix, vector).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn profile_json(matrix: &str, r0: usize) -> Result<String, JsValue> {
    profile_impl(matrix, r0).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn trajectory_json(matrix: &str, vector: &str, continuous: bool, samples: usize, t_end: f64) -> Result<String, JsValue> {
    trajectory_impl(matrix, vector, continuous, samples, t_end).map_err(|e| JsValue::from_str(&e))
}
