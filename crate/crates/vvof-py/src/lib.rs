//! Python bindings for the main solver types and operations.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use vvof::cases::{builtin_case, run_case, CASE_IDS};
use vvof::config::parse_config_str;
use vvof::error::VofError;
use vvof::grid::Axis;

fn to_py_err(e: VofError) -> PyErr {
    match e {
        VofError::Config(_) | VofError::GridMismatch(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Scalar time series and final state of one case run.
#[pyclass]
struct RunResult {
    #[pyo3(get)]
    t: Vec<f64>,
    #[pyo3(get)]
    volume: Vec<f64>,
    #[pyo3(get)]
    volume_norm: Vec<f64>,
    #[pyo3(get)]
    energy: Vec<f64>,
    #[pyo3(get)]
    kappa_bar: Vec<f64>,
    #[pyo3(get)]
    clipped_mass: Vec<f64>,
    #[pyo3(get)]
    wisps: Vec<u64>,
    #[pyo3(get)]
    cfl: Vec<f64>,
    #[pyo3(get)]
    end_reason: String,
    #[pyo3(get)]
    grid: (usize, usize, usize),
    #[pyo3(get)]
    final_field: Vec<f64>,
}

/// Built-in benchmark identifiers.
#[pyfunction]
fn list_cases() -> Vec<String> {
    CASE_IDS.iter().map(|s| s.to_string()).collect()
}

/// Runs a case described by a JSON string (same schema as the CLI config
/// files); `out_dir` enables snapshot/CSV output.
#[pyfunction]
#[pyo3(signature = (config_json, out_dir=None))]
fn run_case_json(config_json: &str, out_dir: Option<String>) -> PyResult<RunResult> {
    let mut cfg = parse_config_str(config_json).map_err(to_py_err)?;
    if let Some(dir) = out_dir {
        cfg.outputs.dir = Some(dir.into());
    }
    let run = run_case(&cfg).map_err(to_py_err)?;
    let d = run.diagnostics;
    Ok(RunResult {
        t: d.t,
        volume: d.volume,
        volume_norm: d.volume_norm,
        energy: d.energy,
        kappa_bar: d.kappa_bar,
        clipped_mass: d.clipped_mass,
        wisps: d.wisps,
        cfl: d.cfl,
        end_reason: d
            .end_reason
            .map(|r| r.to_string())
            .unwrap_or_else(|| "none".into()),
        grid: (run.grid.nx, run.grid.ny, run.grid.nz),
        final_field: run.field.values,
    })
}

/// Default configuration of a built-in case as a JSON-ish summary string.
#[pyfunction]
fn case_summary(name: &str) -> PyResult<String> {
    let cfg = builtin_case(name).map_err(to_py_err)?;
    Ok(format!(
        "{{\"name\":\"{}\",\"grid\":[{},{},{}],\"dt\":{},\"t_final\":{}}}",
        cfg.name, cfg.grid[0], cfg.grid[1], cfg.grid[2], cfg.dt, cfg.t_final
    ))
}

/// Plane constant whose cut volume in the unit cell equals `c`.
#[pyfunction]
fn alpha_from_volume(m: (f64, f64, f64), c: f64) -> PyResult<f64> {
    vvof::plic::alpha_from_volume([m.0, m.1, m.2], c).map_err(to_py_err)
}

/// Cut volume of the plane `alpha` (normalized frame) in the unit cell.
#[pyfunction]
fn volume_from_alpha(m: (f64, f64, f64), alpha: f64) -> PyResult<f64> {
    vvof::plic::volume_from_alpha([m.0, m.1, m.2], alpha).map_err(to_py_err)
}

/// Cut volume restricted to the slab `x0..x1` along `axis` (0, 1 or 2).
#[pyfunction]
fn cut_volume(m: (f64, f64, f64), alpha: f64, x0: f64, x1: f64, axis: usize) -> PyResult<f64> {
    if axis > 2 {
        return Err(PyValueError::new_err("axis must be 0, 1 or 2"));
    }
    vvof::plic::cut_volume([m.0, m.1, m.2], alpha, x0, x1, Axis::from_index(axis))
        .map_err(to_py_err)
}

#[pymodule]
fn vvof_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RunResult>()?;
    m.add_function(wrap_pyfunction!(list_cases, m)?)?;
    m.add_function(wrap_pyfunction!(run_case_json, m)?)?;
    m.add_function(wrap_pyfunction!(case_summary, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_from_volume, m)?)?;
    m.add_function(wrap_pyfunction!(volume_from_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(cut_volume, m)?)?;
    Ok(())
}
