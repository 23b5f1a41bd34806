//! Snapshot and diagnostics serialization: legacy-VTK structured points for
//! fields, CSV for scalar time series and contour polylines.

use crate::error::{Result, VofError};
use crate::field::ColorField;
use crate::grid::{BoundaryKind, Grid};
use crate::metrics::{Diagnostics, Polyline};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> VofError + '_ {
    move |source| VofError::Io { path: path.display().to_string(), source }
}

/// Writes a field (plus optional named cell scalars) as an ASCII legacy-VTK
/// STRUCTURED_POINTS file. Values carry 17 significant digits so a read
/// round-trips exactly.
pub fn write_vtk(path: &Path, title: &str, field: &ColorField, aux: &[(&str, &[f64])]) -> Result<()> {
    let g = &field.grid;
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "{title}");
    s.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(s, "DIMENSIONS {} {} {}", g.nx + 1, g.ny + 1, g.nz + 1);
    let _ = writeln!(s, "ORIGIN {:.16e} {:.16e} {:.16e}", g.origin[0], g.origin[1], g.origin[2]);
    let _ = writeln!(s, "SPACING {:.16e} {:.16e} {:.16e}", g.dx, g.dy, g.dz);
    let _ = writeln!(s, "CELL_DATA {}", g.ncells());
    let scalar = |s: &mut String, name: &str, values: &[f64]| {
        let _ = writeln!(s, "SCALARS {name} double 1");
        s.push_str("LOOKUP_TABLE default\n");
        for v in values {
            let _ = writeln!(s, "{v:.16e}");
        }
    };
    scalar(&mut s, "C", &field.values);
    for (name, values) in aux {
        assert_eq!(values.len(), g.ncells(), "aux field length mismatch");
        scalar(&mut s, name, values);
    }
    fs::write(path, s).map_err(io_err(path))
}

/// Reads back a STRUCTURED_POINTS file written by [`write_vtk`]. Boundary
/// kinds are not stored in the format; the caller's default applies.
pub fn read_vtk(path: &Path, bc: [BoundaryKind; 3]) -> Result<ColorField> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut dims = None;
    let mut origin = [0.0; 3];
    let mut spacing = [1.0; 3];
    let mut values = Vec::new();
    let mut in_scalars = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("DIMENSIONS") {
            let v: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| VofError::Config(format!("bad dimensions: {rest}"))))
                .collect::<Result<_>>()?;
            dims = Some([v[0] - 1, v[1] - 1, (v[2] - 1).max(1)]);
        } else if let Some(rest) = line.strip_prefix("ORIGIN") {
            for (i, t) in rest.split_whitespace().enumerate() {
                origin[i] = t.parse().unwrap_or(0.0);
            }
        } else if let Some(rest) = line.strip_prefix("SPACING") {
            for (i, t) in rest.split_whitespace().enumerate() {
                spacing[i] = t.parse().unwrap_or(1.0);
            }
        } else if line.starts_with("SCALARS C ") {
            in_scalars = true;
        } else if line.starts_with("SCALARS") {
            in_scalars = false;
        } else if line.starts_with("LOOKUP_TABLE") {
            continue;
        } else if in_scalars && !line.is_empty() {
            values.push(
                line.parse::<f64>()
                    .map_err(|_| VofError::Config(format!("bad scalar line: {line}")))?,
            );
        }
    }
    let dims = dims.ok_or_else(|| VofError::Config("missing DIMENSIONS".into()))?;
    let [nx, ny, nz] = dims;
    if values.len() != nx * ny * nz {
        return Err(VofError::Config(format!(
            "expected {} scalars, found {}",
            nx * ny * nz,
            values.len()
        )));
    }
    let grid = Grid {
        nx,
        ny,
        nz,
        dx: spacing[0],
        dy: spacing[1],
        dz: spacing[2],
        origin,
        bc,
    };
    Ok(ColorField { grid, values })
}

/// Fixed-header diagnostics CSV:
/// `t,volume,volume_norm,energy,kappa_bar,clipped_mass,wisps,cfl`.
pub fn write_diagnostics_csv(path: &Path, diag: &Diagnostics, stride: usize) -> Result<()> {
    let stride = stride.max(1);
    let mut s = String::from("t,volume,volume_norm,energy,kappa_bar,clipped_mass,wisps,cfl\n");
    let n = diag.len();
    for row in 0..n {
        if row % stride != 0 && row != n - 1 {
            continue;
        }
        let _ = writeln!(
            s,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
            diag.t[row],
            diag.volume[row],
            diag.volume_norm[row],
            diag.energy[row],
            diag.kappa_bar[row],
            diag.clipped_mass[row],
            diag.wisps[row],
            diag.cfl[row],
        );
    }
    fs::write(path, s).map_err(io_err(path))
}

/// Contour polylines as CSV rows `polyline,vertex,x,y`.
pub fn write_contours_csv(path: &Path, contours: &[Polyline]) -> Result<()> {
    let mut s = String::from("polyline,vertex,x,y\n");
    for (pi, poly) in contours.iter().enumerate() {
        for (vi, p) in poly.points.iter().enumerate() {
            let _ = writeln!(s, "{pi},{vi},{:.16e},{:.16e}", p[0], p[1]);
        }
    }
    fs::write(path, s).map_err(io_err(path))
}

/// Per-case output directory handling.
pub struct CaseWriter {
    dir: PathBuf,
    name: String,
    diag_stride: usize,
}

impl CaseWriter {
    pub fn new(base: PathBuf, name: &str, diag_stride: usize) -> Result<CaseWriter> {
        let dir = base.join(name);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(CaseWriter { dir, name: name.to_string(), diag_stride })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_snapshot(&mut self, field: &ColorField, index: usize, t: f64) -> Result<()> {
        let path = self.dir.join(format!("snap_{index:03}.vtk"));
        let title = format!("{} t={t:.6}", self.name);
        write_vtk(&path, &title, field, &[])
    }

    pub fn write_diagnostics(&mut self, diag: &Diagnostics) -> Result<()> {
        let path = self.dir.join("diagnostics.csv");
        write_diagnostics_csv(&path, diag, self.diag_stride)?;
        if !diag.components.is_empty() {
            let mut s = String::from("t,components\n");
            for (t, n) in &diag.components {
                let _ = writeln!(s, "{t:.16e},{n}");
            }
            let p = self.dir.join("components.csv");
            fs::write(&p, s).map_err(io_err(&p))?;
        }
        if let Some(reason) = &diag.end_reason {
            let p = self.dir.join("end_reason.txt");
            let mut f = fs::File::create(&p).map_err(io_err(&p))?;
            writeln!(f, "{reason}").map_err(io_err(&p))?;
        }
        Ok(())
    }

    pub fn write_contours(&mut self, contours: &[Polyline]) -> Result<()> {
        let path = self.dir.join("contour_final.csv");
        write_contours_csv(&path, contours)
    }
}
