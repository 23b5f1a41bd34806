//! JSON case configuration: either a built-in case id with overrides or a
//! fully custom description.

use crate::cases::{builtin_case, CaseConfig, OutputConfig};
use crate::curvature::DeltaKind;
use crate::error::{Result, VofError};
use crate::geometry::ImplicitShape;
use crate::grid::BoundaryKind;
use crate::motion::MotionSpec;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    case: Option<String>,
    name: Option<String>,
    /// Per-axis extents `[[x0,x1],[y0,y1],[z0,z1]]`; the z entry is ignored
    /// in 2D.
    domain: Option<Vec<[f64; 2]>>,
    /// `[n]` (square 2D), `[nx,ny]` or `[nx,ny,nz]`.
    grid: Option<Vec<usize>>,
    bc: Option<Vec<BoundaryKind>>,
    dt: Option<f64>,
    t_final: Option<f64>,
    shapes: Option<Vec<ImplicitShape>>,
    motion: Option<MotionSpec>,
    clip_eps: Option<f64>,
    delta: Option<DeltaKind>,
    snapshots: Option<Vec<f64>>,
    cfl_limit: Option<f64>,
    rp_radius: Option<f64>,
    stop_radius_cells: Option<f64>,
    unsquared_z_slope: Option<bool>,
    outputs: Option<OutputsFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputsFile {
    dir: Option<String>,
    diag_stride: Option<usize>,
    component_stride: Option<usize>,
    vtk: Option<bool>,
}

fn normalize_grid(grid: &[usize]) -> Result<[usize; 3]> {
    match grid {
        [n] => Ok([*n, *n, 1]),
        [nx, ny] => Ok([*nx, *ny, 1]),
        [nx, ny, nz] => Ok([*nx, *ny, *nz]),
        other => Err(VofError::Config(format!(
            "grid must have 1..3 entries, got {}",
            other.len()
        ))),
    }
}

/// Parses and validates a JSON case description.
pub fn parse_config(path: &Path) -> Result<CaseConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| VofError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

/// Same as [`parse_config`] for an in-memory JSON string.
pub fn parse_config_str(text: &str) -> Result<CaseConfig> {
    let file: ConfigFile = serde_json::from_str(text)
        .map_err(|e| VofError::Config(format!("config: {e}")))?;
    build_config(file)
}

fn build_config(file: ConfigFile) -> Result<CaseConfig> {
    let mut cfg = match &file.case {
        Some(id) => builtin_case(id)?,
        None => {
            // fully custom: the structural fields become required
            let grid = file
                .grid
                .as_deref()
                .ok_or_else(|| VofError::Config("custom config requires 'grid'".into()))?;
            let grid = normalize_grid(grid)?;
            let shapes = file
                .shapes
                .clone()
                .ok_or_else(|| VofError::Config("custom config requires 'shapes'".into()))?;
            let motion = file
                .motion
                .clone()
                .ok_or_else(|| VofError::Config("custom config requires 'motion'".into()))?;
            let dt = file
                .dt
                .ok_or_else(|| VofError::Config("custom config requires 'dt'".into()))?;
            let t_final = file
                .t_final
                .ok_or_else(|| VofError::Config("custom config requires 't_final'".into()))?;
            let mut base = builtin_case("zalesak")?;
            base.name = "custom".into();
            base.grid = grid;
            base.shapes = shapes;
            base.motion = motion;
            base.dt = dt;
            base.t_final = t_final;
            base.snapshots = Vec::new();
            base.domain = [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]];
            base
        }
    };

    if let Some(name) = file.name {
        cfg.name = name;
    }
    if let Some(domain) = file.domain {
        if domain.len() < 2 || domain.len() > 3 {
            return Err(VofError::Config(format!(
                "domain must list 2 or 3 extents, got {}",
                domain.len()
            )));
        }
        for (d, ext) in domain.iter().enumerate() {
            cfg.domain[d] = *ext;
        }
    }
    if let Some(grid) = file.grid.as_deref() {
        let grid = normalize_grid(grid)?;
        if file.case.is_some() {
            // keep the paper's time-step ladder: dt scales with refinement
            // unless the config pins it explicitly
            let old = cfg.grid;
            cfg.grid = grid;
            if file.dt.is_none() {
                cfg.dt *= old[0] as f64 / grid[0] as f64;
            }
        } else {
            cfg.grid = grid;
        }
    }
    if let Some(bc) = file.bc {
        if bc.len() != 3 && bc.len() != 2 {
            return Err(VofError::Config("bc must list 2 or 3 axis kinds".into()));
        }
        for (d, kind) in bc.iter().enumerate() {
            cfg.bc[d] = *kind;
        }
    }
    if let Some(dt) = file.dt {
        cfg.dt = dt;
    }
    if let Some(tf) = file.t_final {
        cfg.t_final = tf;
        cfg.snapshots.retain(|&s| s <= tf + 1e-12);
    }
    if let Some(shapes) = file.shapes {
        if file.case.is_some() {
            cfg.shapes = shapes;
        }
    }
    if let Some(motion) = file.motion {
        if file.case.is_some() {
            cfg.motion = motion;
        }
    }
    if let Some(eps) = file.clip_eps {
        cfg.clip_eps = eps;
    }
    if let Some(delta) = file.delta {
        cfg.delta = delta;
    }
    if let Some(snaps) = file.snapshots {
        cfg.snapshots = snaps;
    }
    if let Some(limit) = file.cfl_limit {
        cfg.cfl_limit = limit;
    }
    if let Some(r) = file.rp_radius {
        cfg.rp_radius = Some(r);
    }
    if let Some(c) = file.stop_radius_cells {
        cfg.stop_radius_cells = Some(c);
    }
    if let Some(u) = file.unsquared_z_slope {
        cfg.unsquared_z_slope = u;
    }
    if let Some(out) = file.outputs {
        let mut o = OutputConfig::default();
        o.dir = out.dir.map(PathBuf::from);
        if let Some(s) = out.diag_stride {
            o.diag_stride = s.max(1);
        }
        if let Some(s) = out.component_stride {
            o.component_stride = s;
        }
        if let Some(v) = out.vtk {
            o.write_vtk = v;
        }
        cfg.outputs = o;
    }

    cfg.validate()?;
    Ok(cfg)
}
