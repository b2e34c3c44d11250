//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export takes plain numbers or strings and returns a JSON string; on
//! failure the JS side receives an `Error` with the library's message. The
//! `*_json` functions carry the logic and are what native tests call.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wf_maxwell::eigensolve::convergence_rates as rates;
use wf_maxwell::experiments::config::parse_list;
use wf_maxwell::experiments::{run_scenario, RefineMode, Scenario};
use wf_maxwell::mesh::{mesh_quality, Tetra};
use wf_maxwell::wf_refine::{validate_wf, worsey_farin_refine};
use wf_maxwell::{Aabb, Mesh, Point3};

/// Largest reduced dimension the page may request; the dense solve is
/// cubic in it.
pub const DEMO_DENSE_CAP: usize = 3000;

#[derive(Serialize)]
struct RefinedTet {
    vertices: Vec<[f64; 3]>,
    tets: Vec<[usize; 4]>,
    incenter: [f64; 3],
    face_points: Vec<[f64; 3]>,
    max_shape_ratio: f64,
    volume_residual: f64,
}

/// Worsey-Farin split of one tetrahedron given as 12 coordinates.
pub fn refine_tet_json(coords: &[f64]) -> Result<String, String> {
    let p: [f64; 12] = coords
        .try_into()
        .map_err(|_| format!("expected 12 coordinates, got {}", coords.len()))?;
    let vertices: Vec<Point3> = p.chunks(3).map(|c| Point3::new(c[0], c[1], c[2])).collect();
    let domain = Aabb::enclosing(&vertices).map_err(|e| e.to_string())?;
    let mesh = Mesh::new(vertices, vec![Tetra::new([0, 1, 2, 3])], domain).map_err(|e| e.to_string())?;
    let wf = worsey_farin_refine(&mesh).map_err(|e| e.to_string())?;
    let report = validate_wf(&wf);
    let fine = &wf.fine;
    let out = RefinedTet {
        vertices: fine.vertices().iter().map(|v| v.to_array()).collect(),
        tets: fine.tets().iter().map(|t| t.v).collect(),
        incenter: fine.vertices()[wf.incenter_vertex(0)].to_array(),
        face_points: (0..mesh.num_faces())
            .map(|f| fine.vertices()[wf.face_point_vertex(f)].to_array())
            .collect(),
        max_shape_ratio: mesh_quality(fine).map_err(|e| e.to_string())?.max_ratio,
        volume_residual: report.max_volume_residual,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SpectrumOut {
    reduced_dim: usize,
    zero_count: Option<usize>,
    lambda_h: Vec<f64>,
    lambda_exact: Vec<f64>,
    window: (f64, f64),
    window_count: usize,
    expected_window_count: usize,
    spurious: bool,
}

/// Maxwell spectrum on (0,π)³ with `n³` subcubes, degree `degree` and
/// refinement `"wf"` or `"none"`; first `num_eigs` nonzero eigenvalues.
pub fn maxwell_spectrum_json(n: usize, degree: usize, refine: &str, num_eigs: usize) -> Result<String, String> {
    let refine: RefineMode = refine.parse().map_err(|e: wf_maxwell::Error| e.to_string())?;
    let sc = Scenario {
        n_list: vec![n],
        degree,
        refine,
        num_eigs,
        dense_cap: DEMO_DENSE_CAP,
        ..Scenario::default()
    };
    let report = run_scenario(&sc).map_err(|e| e.to_string())?;
    let row = &report.rows[0];
    let c = &row.comparison;
    let out = SpectrumOut {
        reduced_dim: row.reduced_dim,
        zero_count: row.zero_count,
        lambda_h: c.rows.iter().map(|r| r.lambda_h).collect(),
        lambda_exact: c.rows.iter().map(|r| r.lambda_exact).collect(),
        window: c.window,
        window_count: c.window_count,
        expected_window_count: c.expected_window_count,
        spurious: c.spurious,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Observed rates from comma-separated mesh sizes and errors.
pub fn convergence_rates_json(h: &str, err: &str) -> Result<String, String> {
    let h: Vec<f64> = parse_list(h)?;
    let e: Vec<f64> = parse_list(err)?;
    let r = rates(&h, &e).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn refine_tet(coords: Vec<f64>) -> Result<String, JsError> {
    refine_tet_json(&coords).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn maxwell_spectrum(n: usize, degree: usize, refine: &str, num_eigs: usize) -> Result<String, JsError> {
    maxwell_spectrum_json(n, degree, refine, num_eigs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn convergence_rates(h: &str, err: &str) -> Result<String, JsError> {
    convergence_rates_json(h, err).map_err(|e| JsError::new(&e))
}
