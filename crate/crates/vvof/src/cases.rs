//! Declarative benchmark definitions and the case run loop.

use crate::advect::advect_step;
use crate::curvature::{compute_curvature, mean_curvature, CurvatureOptions, DeltaKind};
use crate::error::{Result, VofError};
use crate::field::{ColorField, VelocityField};
use crate::geometry::{shape_union, voxelize, ImplicitShape};
use crate::grid::{BoundaryKind, Grid};
use crate::metrics::{connected_components, Diagnostics, EndReason};
use crate::motion::{
    apply_radial_source, curvature_velocity, prescribed_velocity, rp_integrate, rp_velocity,
    MotionSpec, RpState,
};
use std::path::PathBuf;

pub const CASE_IDS: [&str; 12] = [
    "zalesak",
    "vortex-star",
    "deformation-sphere",
    "rp-collapse",
    "pointed-star",
    "spiral",
    "dumbbell",
    "irregular",
    "ellipsoid",
    "squircle",
    "octahedron",
    "helical-sphere",
];

/// File outputs of a run; all writing is skipped when `dir` is `None`.
#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    /// Write every n-th diagnostics row (the final row is always written).
    pub diag_stride: usize,
    /// Sample connected components every n steps; 0 disables.
    pub component_stride: usize,
    pub write_vtk: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, diag_stride: 1, component_stride: 0, write_vtk: true }
    }
}

/// Fully resolved description of one benchmark run.
#[derive(Debug, Clone)]
pub struct CaseConfig {
    pub name: String,
    pub domain: [[f64; 2]; 3],
    pub grid: [usize; 3],
    pub bc: [BoundaryKind; 3],
    pub shapes: Vec<ImplicitShape>,
    pub motion: MotionSpec,
    pub dt: f64,
    pub t_final: f64,
    pub snapshots: Vec<f64>,
    pub clip_eps: f64,
    pub delta: DeltaKind,
    pub cfl_limit: f64,
    /// Comparison switch for the 3D curvature denominator.
    pub unsquared_z_slope: bool,
    /// Initial bubble radius of the wall ODE, for radial cases.
    pub rp_radius: Option<f64>,
    /// End the run once the ODE radius falls below this many cells.
    pub stop_radius_cells: Option<f64>,
    pub outputs: OutputConfig,
}

impl CaseConfig {
    pub fn build_grid(&self) -> Grid {
        Grid::new(
            self.grid,
            [self.domain[0][0], self.domain[1][0], self.domain[2][0]],
            [self.domain[0][1], self.domain[1][1], self.domain[2][1]],
            self.bc,
        )
    }

    /// Changes the grid and rescales `dt` inversely with the finest axis
    /// refinement, preserving the CFL number of the base configuration.
    pub fn with_grid(mut self, grid: [usize; 3]) -> CaseConfig {
        let ratio = grid[0] as f64 / self.grid[0] as f64;
        self.dt /= ratio;
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 || self.t_final <= 0.0 {
            return Err(VofError::Config("dt and t_final must be positive".into()));
        }
        if !(1e-14..=1e-2).contains(&self.clip_eps) {
            return Err(VofError::Config(format!(
                "clip_eps out of range [1e-14, 1e-2]: {}",
                self.clip_eps
            )));
        }
        for s in &self.snapshots {
            if *s < 0.0 || *s > self.t_final + 1e-12 {
                return Err(VofError::Config(format!(
                    "snapshot time {s} outside [0, {}]",
                    self.t_final
                )));
            }
        }
        if self.shapes.is_empty() {
            return Err(VofError::Config("case needs at least one shape".into()));
        }
        for (d, [lo, hi]) in self.domain.iter().enumerate() {
            if hi <= lo && !(d == 2 && self.grid[2] == 1) {
                return Err(VofError::Config(format!("empty domain extent on axis {d}")));
            }
        }
        for s in &self.shapes {
            s.validate()?;
        }
        Ok(())
    }
}

/// Completed run: initial and final fields plus the scalar time series.
#[derive(Debug, Clone)]
pub struct CaseRun {
    pub grid: Grid,
    pub initial: ColorField,
    pub field: ColorField,
    pub diagnostics: Diagnostics,
    /// Wall-ODE reference trajectory for radial cases, one entry per row.
    pub rp_reference: Vec<RpState>,
}

fn unit_square() -> [[f64; 2]; 3] {
    [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]
}

fn box_100() -> [[f64; 2]; 3] {
    [[0.0, 100.0], [0.0, 100.0], [0.0, 100.0]]
}

fn base(name: &str) -> CaseConfig {
    CaseConfig {
        name: name.to_string(),
        domain: unit_square(),
        grid: [64, 64, 1],
        bc: [BoundaryKind::ZeroNeumann; 3],
        shapes: Vec::new(),
        motion: MotionSpec::Curvature { constrained: false },
        dt: 1e-3,
        t_final: 1.0,
        snapshots: Vec::new(),
        clip_eps: 1e-10,
        delta: DeltaKind::Polynomial,
        cfl_limit: 0.5,
        unsquared_z_slope: false,
        rp_radius: None,
        stop_radius_cells: None,
        outputs: OutputConfig::default(),
    }
}

/// Fully populated configuration of one of the named benchmarks.
pub fn builtin_case(name: &str) -> Result<CaseConfig> {
    let cfg = match name {
        "zalesak" => CaseConfig {
            grid: [256, 256, 1],
            shapes: vec![ImplicitShape::SlottedDisc {
                center: [0.5, 0.75],
                radius: 0.15,
                slot_width: 0.06,
                slot_length: 0.2,
            }],
            motion: MotionSpec::RigidRotation { center: [0.5, 0.5] },
            dt: 1.25e-4,
            t_final: 1.0,
            snapshots: vec![0.0, 0.5, 1.0],
            ..base(name)
        },
        "vortex-star" => CaseConfig {
            grid: [256, 256, 1],
            shapes: vec![ImplicitShape::Star {
                center: [0.5, 0.5],
                shift: 0.25,
                scale: 0.10,
                petals: 8,
            }],
            motion: MotionSpec::Vortex2d { period: 2.0 },
            dt: 1.25e-4,
            t_final: 2.0,
            snapshots: vec![0.0, 1.0, 1.2, 2.0],
            ..base(name)
        },
        "deformation-sphere" => CaseConfig {
            grid: [128, 128, 128],
            shapes: vec![ImplicitShape::Sphere { center: [0.35, 0.35, 0.35], radius: 0.15 }],
            motion: MotionSpec::Deformation3d { period: 3.0 },
            dt: 1e-3,
            t_final: 3.0,
            snapshots: vec![0.0, 1.5, 3.0],
            ..base(name)
        },
        "rp-collapse" => CaseConfig {
            domain: [[0.0, 4.0], [0.0, 4.0], [0.0, 4.0]],
            grid: [100, 100, 100],
            shapes: vec![ImplicitShape::Complement {
                shape: Box::new(ImplicitShape::Sphere { center: [2.0, 2.0, 2.0], radius: 1.0 }),
            }],
            motion: MotionSpec::RadialRp { dp: -1.0, rho: 1.0, non_split: false },
            dt: 2e-4,
            t_final: 0.92,
            snapshots: vec![0.0, 0.45, 0.9],
            rp_radius: Some(1.0),
            stop_radius_cells: Some(3.5),
            ..base(name)
        },
        "pointed-star" => CaseConfig {
            domain: box_100(),
            grid: [200, 200, 1],
            shapes: vec![ImplicitShape::Star {
                center: [50.0, 50.0],
                shift: 25.0,
                scale: 10.0,
                petals: 8,
            }],
            motion: MotionSpec::Curvature { constrained: false },
            dt: 0.05,
            t_final: 60.0,
            snapshots: vec![0.0, 7.5, 15.0, 22.5, 30.0, 37.5, 45.0, 52.5, 60.0],
            ..base(name)
        },
        "spiral" => CaseConfig {
            domain: box_100(),
            grid: [100, 100, 1],
            shapes: vec![ImplicitShape::Spiral {
                center: [50.0, 50.0],
                turns: 2.5,
                head: 3.0,
                scale: 50.0,
                points: 400,
                width: 3.0,
                point_cache: Vec::new(),
            }],
            motion: MotionSpec::Curvature { constrained: false },
            dt: 0.05,
            t_final: 300.0,
            snapshots: vec![0.0, 37.5, 75.0, 112.5, 150.0, 187.5, 225.0, 262.5, 300.0],
            ..base(name)
        },
        "dumbbell" => CaseConfig {
            domain: box_100(),
            grid: [100, 100, 100],
            shapes: vec![ImplicitShape::Dumbbell {
                center: [50.0, 50.0, 50.0],
                offset: 20.0,
                radius: 10.0,
                neck_radius: 5.0,
            }],
            motion: MotionSpec::Curvature { constrained: false },
            dt: 0.01,
            t_final: 16.0,
            snapshots: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0],
            outputs: OutputConfig { component_stride: 10, ..OutputConfig::default() },
            ..base(name)
        },
        "irregular" => CaseConfig {
            domain: box_100(),
            grid: [100, 100, 100],
            shapes: vec![
                ImplicitShape::Ellipsoid {
                    center: [50.0, 50.0, 50.0],
                    semi_axes: [25.0, 7.5, 7.5],
                },
                ImplicitShape::Ellipsoid {
                    center: [50.0, 50.0, 50.0],
                    semi_axes: [7.5, 25.0, 7.5],
                },
                ImplicitShape::Ellipsoid {
                    center: [50.0, 50.0, 50.0],
                    semi_axes: [10.0, 10.0, 35.0],
                },
            ],
            motion: MotionSpec::Curvature { constrained: false },
            dt: 0.05,
            t_final: 60.0,
            snapshots: vec![0.0, 6.25, 12.5, 18.75, 25.0, 31.25, 37.5, 43.75, 50.0],
            ..base(name)
        },
        "ellipsoid" => CaseConfig {
            grid: [50, 50, 50],
            shapes: vec![ImplicitShape::Ellipsoid {
                center: [0.5, 0.5, 0.5],
                semi_axes: [0.35, 0.15625, 0.15625],
            }],
            motion: MotionSpec::Curvature { constrained: true },
            dt: 1e-5,
            t_final: 0.1,
            snapshots: vec![0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1],
            ..base(name)
        },
        "squircle" => CaseConfig {
            grid: [50, 50, 50],
            shapes: vec![ImplicitShape::Superellipsoid {
                center: [0.5, 0.5, 0.5],
                radius: 0.25,
                exponent: 12,
            }],
            motion: MotionSpec::Curvature { constrained: true },
            dt: 1e-5,
            t_final: 0.1,
            snapshots: vec![0.0, 0.002, 0.004, 0.006, 0.012, 0.014, 0.1],
            ..base(name)
        },
        "octahedron" => CaseConfig {
            grid: [50, 50, 50],
            shapes: vec![ImplicitShape::Octahedron { center: [0.5, 0.5, 0.5], radius: 0.3 }],
            motion: MotionSpec::Curvature { constrained: true },
            dt: 1e-4,
            t_final: 0.03,
            snapshots: vec![0.0, 0.001, 0.002, 0.005, 0.007, 0.01, 0.03],
            ..base(name)
        },
        "helical-sphere" => CaseConfig {
            domain: [[0.0, 1.0], [0.0, 1.0], [0.0, 2.0]],
            grid: [75, 75, 150],
            bc: [BoundaryKind::Periodic; 3],
            shapes: vec![ImplicitShape::Sphere { center: [0.5, 0.75, 0.25], radius: 0.1 }],
            motion: MotionSpec::Superposed {
                parts: vec![
                    MotionSpec::Helical {
                        u_max: 160.0,
                        v_max: 160.0,
                        w_max: -40.0,
                        center: [0.5, 0.75],
                    },
                    MotionSpec::Curvature { constrained: true },
                ],
            },
            dt: 2.5e-5,
            t_final: 0.025,
            snapshots: vec![0.0, 0.0125, 0.025],
            // the prescribed rotation exceeds the split-scheme bound away
            // from the interface; boundedness slips are clipped and reported
            cfl_limit: 1.5,
            ..base(name)
        },
        other => {
            return Err(VofError::Config(format!(
                "unknown case '{other}'; available: {}",
                CASE_IDS.join(", ")
            )))
        }
    };
    Ok(cfg)
}

/// Interface energy `sum |grad C| dV` restricted to cells that can carry a
/// nonzero gradient (anything else would waste a full-grid stencil pass).
fn sparse_interface_energy(field: &ColorField, mark: &mut Vec<u8>) -> f64 {
    let g = &field.grid;
    let n = g.ncells();
    mark.clear();
    mark.resize(n, 0);
    let vals = &field.values;
    let nx = g.nx;
    let nxny = g.nx * g.ny;
    for i in 0..n {
        if i % nx != 0 && vals[i] != vals[i - 1] {
            mark[i] = 1;
            mark[i - 1] = 1;
        }
        if i >= nx && (i / nx) % g.ny != 0 && vals[i] != vals[i - nx] {
            mark[i] = 1;
            mark[i - nx] = 1;
        }
        if i >= nxny && vals[i] != vals[i - nxny] {
            mark[i] = 1;
            mark[i - nxny] = 1;
        }
    }
    // periodic seams
    for d in 0..3 {
        if g.bc[d] != BoundaryKind::Periodic {
            continue;
        }
        let (nloop, _) = match d {
            0 => (g.ny * g.nz, g.nx),
            1 => (g.nx * g.nz, g.ny),
            _ => (g.nx * g.ny, g.nz),
        };
        for s in 0..nloop {
            let (a, b) = match d {
                0 => {
                    let (j, k) = (s % g.ny, s / g.ny);
                    (g.idx(0, j, k), g.idx(g.nx - 1, j, k))
                }
                1 => {
                    let (i, k) = (s % g.nx, s / g.nx);
                    (g.idx(i, 0, k), g.idx(i, g.ny - 1, k))
                }
                _ => {
                    let (i, j) = (s % g.nx, s / g.nx);
                    (g.idx(i, j, 0), g.idx(i, j, g.nz - 1))
                }
            };
            if vals[a] != vals[b] {
                mark[a] = 1;
                mark[b] = 1;
            }
        }
    }
    // gradient stencils reach one cell beyond a jump
    let mut energy = 0.0;
    let dv = g.cell_volume();
    for idx in 0..n {
        if mark[idx] == 0 {
            continue;
        }
        let (i, j, k) = g.coords(idx);
        let lo = |v: usize| v.saturating_sub(1);
        for kk in lo(k)..=(k + 1).min(g.nz - 1) {
            for jj in lo(j)..=(j + 1).min(g.ny - 1) {
                for ii in lo(i)..=(i + 1).min(g.nx - 1) {
                    let nb = g.idx(ii, jj, kk);
                    if mark[nb] == 0 {
                        mark[nb] = 2;
                    }
                }
            }
        }
    }
    for idx in 0..n {
        if mark[idx] == 0 {
            continue;
        }
        let (i, j, k) = g.coords(idx);
        let (gx, gy, gz) = field.gradient_at(i, j, k);
        energy += (gx * gx + gy * gy + gz * gz).sqrt();
    }
    energy * dv
}

/// Executes the configured time loop and returns the full diagnostics
/// series, writing snapshots and CSVs when an output directory is set.
pub fn run_case(config: &CaseConfig) -> Result<CaseRun> {
    config.validate()?;
    let grid = config.build_grid();
    let shape = shape_union(config.shapes.clone())?.with_caches();
    shape.validate()?;
    let initial = voxelize(&shape, &grid);
    let mut field = initial.clone();

    let nsteps = (config.t_final / config.dt).round() as usize;
    if nsteps == 0 {
        return Err(VofError::Config("t_final shorter than one step".into()));
    }

    let writer = config.outputs.dir.as_ref().map(|dir| {
        crate::io::CaseWriter::new(dir.clone(), &config.name, config.outputs.diag_stride)
    });
    let mut writer = match writer {
        Some(w) => Some(w?),
        None => None,
    };

    let mut diag = Diagnostics::default();
    let mut mark_buf: Vec<u8> = Vec::new();
    let dv = grid.cell_volume();
    let v0 = field.total_volume();
    diag.t.push(0.0);
    diag.volume.push(v0);
    diag.volume_norm.push(1.0);
    diag.energy.push(sparse_interface_energy(&field, &mut mark_buf));
    diag.kappa_bar.push(0.0);
    diag.clipped_mass.push(0.0);
    diag.wisps.push(0);
    diag.cfl.push(0.0);
    diag.kappa_dx_max.push(0.0);

    let mut rp_state = config.rp_radius.map(RpState::new);
    let mut rp_reference = Vec::new();
    if let Some(s) = rp_state {
        rp_reference.push(s);
    }

    let curv_opts = CurvatureOptions {
        eps: config.clip_eps,
        unsquared_z_slope: config.unsquared_z_slope,
    };

    if let Some(w) = writer.as_mut() {
        if config.outputs.write_vtk {
            w.write_snapshot(&field, 0, 0.0)?;
        }
    }
    if config.outputs.component_stride > 0 {
        diag.components.push((0.0, connected_components(&field, 0.5)));
    }
    let mut next_snapshot = 1usize;

    let mut end_reason = EndReason::Completed;
    for step in 0..nsteps {
        let t = step as f64 * config.dt;

        // interface must still exist for interface-driven motion
        let mixed_count = field
            .values
            .iter()
            .filter(|&&c| c > config.clip_eps && c < 1.0 - config.clip_eps)
            .count();
        if mixed_count == 0 && config.motion.needs_curvature() {
            end_reason = EndReason::InterfaceVanished { t };
            break;
        }

        let mut kappa_bar = 0.0;
        let mut kappa_dx_max = 0.0;
        let rp = rp_state;

        // velocity assembly
        let vel = match &config.motion {
            MotionSpec::Curvature { constrained } => {
                let curv = compute_curvature(&field, &curv_opts);
                kappa_dx_max = curv.kappa_dx_max;
                if *constrained {
                    match mean_curvature(&field, &curv, config.delta, t) {
                        Ok(kb) => kappa_bar = kb,
                        Err(VofError::InterfaceVanished { .. }) => {
                            end_reason = EndReason::InterfaceVanished { t };
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                Some(curvature_velocity(&field, &curv, kappa_bar))
            }
            MotionSpec::RadialRp { non_split, .. } => {
                let rdot = rp.map(|s| s.rdot).unwrap_or(0.0);
                if *non_split {
                    None
                } else {
                    Some(rp_velocity(&field, rdot, config.clip_eps))
                }
            }
            MotionSpec::Superposed { parts } => {
                let mut total = VelocityField::zeros(&grid);
                for part in parts {
                    let part_vel = match part {
                        MotionSpec::Curvature { constrained } => {
                            let curv = compute_curvature(&field, &curv_opts);
                            kappa_dx_max = kappa_dx_max.max(curv.kappa_dx_max);
                            if *constrained {
                                match mean_curvature(&field, &curv, config.delta, t) {
                                    Ok(kb) => kappa_bar = kb,
                                    Err(VofError::InterfaceVanished { .. }) => {
                                        end_reason = EndReason::InterfaceVanished { t };
                                        break;
                                    }
                                    Err(e) => return Err(e),
                                }
                            }
                            curvature_velocity(&field, &curv, kappa_bar)
                        }
                        MotionSpec::RadialRp { .. } => {
                            let rdot = rp.map(|s| s.rdot).unwrap_or(0.0);
                            rp_velocity(&field, rdot, config.clip_eps)
                        }
                        prescribed => {
                            prescribed_velocity(prescribed, &grid, t + 0.5 * config.dt)?
                        }
                    };
                    total.add_cell_centered(&part_vel);
                }
                if !matches!(end_reason, EndReason::Completed) {
                    break;
                }
                total.average_to_faces();
                Some(total)
            }
            prescribed => Some(prescribed_velocity(prescribed, &grid, t + 0.5 * config.dt)?),
        };

        // advance the color field
        let report = match vel {
            Some(vel) => match advect_step(
                &mut field,
                &vel,
                config.dt,
                step,
                config.clip_eps,
                config.cfl_limit,
            ) {
                Ok(rep) => rep,
                Err(VofError::CflViolation { cfl, .. }) => {
                    end_reason = EndReason::CflAbort { t, cfl };
                    break;
                }
                Err(e) => return Err(e),
            },
            None => {
                // diagnostic non-split source update
                let rdot = rp.map(|s| s.rdot).unwrap_or(0.0);
                apply_radial_source(&mut field, rdot, config.dt);
                let (clipped, wisps) = crate::advect::clip_and_report(&mut field, config.clip_eps);
                let cfl = {
                    let mut s = 1.0 / grid.dx + 1.0 / grid.dy;
                    if !grid.is_2d() {
                        s += 1.0 / grid.dz;
                    }
                    rdot.abs() * config.dt * s
                };
                crate::advect::StepReport { cfl, clipped_mass: clipped, wisps }
            }
        };

        // advance the wall ODE
        if let (Some(state), Some((dp, rho, _))) = (rp_state, config.motion.rp_params()) {
            match rp_integrate(state, config.dt, dp, rho) {
                Ok(next) => {
                    rp_state = Some(next);
                    rp_reference.push(next);
                }
                Err(VofError::RadiusCollapsed) => {
                    end_reason = EndReason::RadiusFloor { t };
                    break;
                }
                Err(e) => return Err(e),
            }
        }

        let t_next = (step + 1) as f64 * config.dt;
        let volume = field.total_volume();
        diag.t.push(t_next);
        diag.volume.push(volume);
        diag.volume_norm.push(volume / v0);
        diag.energy.push(sparse_interface_energy(&field, &mut mark_buf));
        diag.kappa_bar.push(kappa_bar);
        diag.clipped_mass.push(report.clipped_mass);
        diag.wisps.push(report.wisps as u64);
        diag.cfl.push(report.cfl);
        diag.kappa_dx_max.push(kappa_dx_max);

        if config.outputs.component_stride > 0
            && (step + 1) % config.outputs.component_stride == 0
        {
            diag.components.push((t_next, connected_components(&field, 0.5)));
        }

        if let Some(w) = writer.as_mut() {
            if config.outputs.write_vtk {
                while next_snapshot < config.snapshots.len()
                    && config.snapshots[next_snapshot] <= t_next + 0.5 * config.dt
                {
                    w.write_snapshot(&field, next_snapshot, t_next)?;
                    next_snapshot += 1;
                }
            }
        }

        // interface-vanished end for interface-driven motion
        if volume < 0.5 * dv && config.motion.needs_curvature() {
            end_reason = EndReason::InterfaceVanished { t: t_next };
            break;
        }
        if let (Some(state), Some(cells)) = (rp_state, config.stop_radius_cells) {
            if state.r < cells * grid.dx {
                end_reason = EndReason::RadiusFloor { t: t_next };
                break;
            }
        }
    }

    diag.end_reason = Some(end_reason);

    if let Some(w) = writer.as_mut() {
        w.write_diagnostics(&diag)?;
        if grid.is_2d() {
            let contours = crate::metrics::extract_contour(&field, 0.5);
            w.write_contours(&contours)?;
        }
        if config.outputs.write_vtk {
            w.write_snapshot(&field, 999, *diag.t.last().unwrap())?;
        }
    }

    Ok(CaseRun { grid, initial, field, diagnostics: diag, rp_reference })
}
