//! Velocity fields that drive each case: curvature-driven interface
//! velocities (constrained and unconstrained), prescribed analytic fields,
//! superposition, and the Rayleigh-Plesset reference ODE.

use crate::curvature::CurvatureField;
use crate::error::{Result, VofError};
use crate::field::{ColorField, VelocityField};
use crate::grid::{Axis, Grid};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Gradient magnitudes below this give zero interface velocity.
const GRAD_FLOOR: f64 = 1e-12;

/// Declarative velocity description bound into a case.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MotionSpec {
    /// Front propagation with speed `kappa - kbar` along the interface
    /// normal; `constrained` enforces the volume constraint through `kbar`.
    Curvature { constrained: bool },
    /// `u = 2 pi (y - yc)`, `v = -2 pi (x - xc)`: one revolution per unit time.
    RigidRotation { center: [f64; 2] },
    /// Single-vortex stretching flow with `cos(pi t / T)` reversal.
    Vortex2d { period: f64 },
    /// Three-dimensional deformation field with `cos(pi t / T)` reversal.
    Deformation3d { period: f64 },
    /// Helical transport: rotation about the (xc, yc) axis plus an axial
    /// component `w = w_max * acos(phi)`.
    Helical {
        u_max: f64,
        v_max: f64,
        w_max: f64,
        center: [f64; 2],
    },
    /// Radially collapsing/expanding interface driven by the bubble ODE.
    /// `non_split` switches to the diagnostic source-term update.
    RadialRp {
        dp: f64,
        rho: f64,
        #[serde(default)]
        non_split: bool,
    },
    Superposed { parts: Vec<MotionSpec> },
}

impl MotionSpec {
    pub fn needs_curvature(&self) -> bool {
        match self {
            MotionSpec::Curvature { .. } => true,
            MotionSpec::Superposed { parts } => parts.iter().any(|p| p.needs_curvature()),
            _ => false,
        }
    }

    pub fn is_constrained(&self) -> bool {
        match self {
            MotionSpec::Curvature { constrained } => *constrained,
            MotionSpec::Superposed { parts } => parts.iter().any(|p| p.is_constrained()),
            _ => false,
        }
    }

    pub fn rp_params(&self) -> Option<(f64, f64, bool)> {
        match self {
            MotionSpec::RadialRp { dp, rho, non_split } => Some((*dp, *rho, *non_split)),
            MotionSpec::Superposed { parts } => parts.iter().find_map(|p| p.rp_params()),
            _ => None,
        }
    }
}

/// Interface velocity from the curvature deviation: in mixed cells each
/// component is `(kappa - kbar) * dC/dx_d / |grad C|`, zero elsewhere, so a
/// convex blob of reference fluid moves inward. Face values are the
/// arithmetic mean of the adjacent cells.
pub fn curvature_velocity(
    field: &ColorField,
    curv: &CurvatureField,
    kappa_bar: f64,
) -> VelocityField {
    let mut vel = VelocityField::zeros(&field.grid);
    fill_interface_velocity(field, &mut vel, |idx| curv.kappa[idx] - kappa_bar, &curv.active);
    vel.average_to_faces();
    vel
}

/// Interface velocity scaled by the bubble wall speed `rdot`.
pub fn rp_velocity(field: &ColorField, rdot: f64, eps: f64) -> VelocityField {
    let g = &field.grid;
    let mut vel = VelocityField::zeros(g);
    let mixed: Vec<bool> = field
        .values
        .iter()
        .map(|&c| c > eps && c < 1.0 - eps)
        .collect();
    // the projection acts wherever the gradient stencil sees the band
    let mut active = mixed.clone();
    for idx in 0..g.ncells() {
        if !mixed[idx] {
            continue;
        }
        let (i, j, k) = g.coords(idx);
        let (i, j, k) = (i as isize, j as isize, k as isize);
        let mut offsets = vec![(-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0)];
        if !g.is_2d() {
            offsets.push((0, 0, -1));
            offsets.push((0, 0, 1));
        }
        for (di, dj, dk) in offsets {
            let (ni, nj, nk) = (i + di, j + dj, k + dk);
            let mut outside = false;
            for (v, ax) in [(ni, Axis::X), (nj, Axis::Y), (nk, Axis::Z)] {
                if (v < 0 || v >= g.n(ax) as isize)
                    && g.bc[ax.index()] == crate::grid::BoundaryKind::ZeroNeumann
                {
                    outside = true;
                }
            }
            if !outside {
                active[g.idx(
                    g.resolve(ni, Axis::X),
                    g.resolve(nj, Axis::Y),
                    g.resolve(nk, Axis::Z),
                )] = true;
            }
        }
    }
    fill_interface_velocity(field, &mut vel, |_| rdot, &active);
    vel.average_to_faces();
    vel
}

fn fill_interface_velocity(
    field: &ColorField,
    vel: &mut VelocityField,
    speed: impl Fn(usize) -> f64,
    mixed: &[bool],
) {
    let g = &field.grid;
    for idx in 0..g.ncells() {
        if !mixed[idx] {
            continue;
        }
        let (i, j, k) = g.coords(idx);
        let (gx, gy, gz) = field.gradient_at(i, j, k);
        let mag = (gx * gx + gy * gy + gz * gz).sqrt();
        if mag < GRAD_FLOOR {
            continue;
        }
        let s = speed(idx) / mag;
        vel.u[idx] = s * gx;
        vel.v[idx] = s * gy;
        if !g.is_2d() {
            vel.w[idx] = s * gz;
        }
    }
}

/// Evaluates a prescribed analytic field at time `t`. Cell-centered values
/// come from the exact formulas; face values are built from a discrete
/// stream function / vector potential for the solenoidal vortex fields so
/// that the face divergence vanishes identically, and from face averaging
/// otherwise.
pub fn prescribed_velocity(spec: &MotionSpec, grid: &Grid, t: f64) -> Result<VelocityField> {
    match spec {
        MotionSpec::RigidRotation { center } => {
            let [xc, yc] = *center;
            let psi = move |x: f64, y: f64| PI * ((x - xc).powi(2) + (y - yc).powi(2));
            let mut vel = from_stream_function(grid, psi);
            fill_cells_2d(grid, &mut vel, |x, y| {
                (2.0 * PI * (y - yc), -2.0 * PI * (x - xc))
            });
            Ok(vel)
        }
        MotionSpec::Vortex2d { period } => {
            let gt = (PI * t / period).cos();
            let psi = move |x: f64, y: f64| {
                -(1.0 / PI) * (PI * x).sin().powi(2) * (PI * y).sin().powi(2) * gt
            };
            let mut vel = from_stream_function(grid, psi);
            fill_cells_2d(grid, &mut vel, |x, y| {
                let u = -2.0 * (PI * x).sin().powi(2) * (PI * y).sin() * (PI * y).cos() * gt;
                let v = 2.0 * (PI * y).sin().powi(2) * (PI * x).sin() * (PI * x).cos() * gt;
                (u, v)
            });
            Ok(vel)
        }
        MotionSpec::Deformation3d { period } => {
            if grid.is_2d() {
                return Err(VofError::Config(
                    "deformation-3d motion requires a 3D grid".into(),
                ));
            }
            let gt = (PI * t / period).cos();
            Ok(deformation_field(grid, gt))
        }
        MotionSpec::Helical { u_max, v_max, w_max, center } => {
            let [xc, yc] = *center;
            let (u_max, v_max, w_max) = (*u_max, *v_max, *w_max);
            let mut vel = VelocityField::zeros(grid);
            for k in 0..grid.nz {
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let idx = grid.idx(i, j, k);
                        let [x, y, _] = grid.cell_center(i, j, k);
                        vel.u[idx] = 2.0 * PI * u_max * (y - yc);
                        vel.v[idx] = 2.0 * PI * v_max * (xc - x);
                        let rho = ((x - xc).powi(2) + (y - yc).powi(2)).sqrt();
                        let phi = if rho > 0.0 { ((x - xc) / rho).clamp(-1.0, 1.0) } else { 1.0 };
                        vel.w[idx] = w_max * phi.acos();
                    }
                }
            }
            vel.average_to_faces();
            Ok(vel)
        }
        MotionSpec::Curvature { .. } | MotionSpec::RadialRp { .. } | MotionSpec::Superposed { .. } => {
            Err(VofError::Config(format!(
                "motion kind is not a prescribed field: {spec:?}"
            )))
        }
    }
}

/// Builds a 2D velocity field from corner samples of a stream function:
/// `u = d(psi)/dy`, `v = -d(psi)/dx` as exact differences, which makes the
/// discrete face divergence vanish identically.
fn from_stream_function(grid: &Grid, psi: impl Fn(f64, f64) -> f64) -> VelocityField {
    assert!(grid.is_2d(), "stream function construction is 2D only");
    let g = grid;
    let mut vel = VelocityField::zeros(g);
    let np = g.nx + 1;
    let mut corners = vec![0.0; np * (g.ny + 1)];
    for j in 0..=g.ny {
        for i in 0..=g.nx {
            let x = g.origin[0] + i as f64 * g.dx;
            let y = g.origin[1] + j as f64 * g.dy;
            corners[i + np * j] = psi(x, y);
        }
    }
    for j in 0..g.ny {
        for i in 0..=g.nx {
            let f = vel.fidx(Axis::X, i, j, 0);
            vel.fu[f] = (corners[i + np * (j + 1)] - corners[i + np * j]) / g.dy;
        }
    }
    for j in 0..=g.ny {
        for i in 0..g.nx {
            let f = vel.fidx(Axis::Y, i, j, 0);
            vel.fv[f] = -(corners[i + 1 + np * j] - corners[i + np * j]) / g.dx;
        }
    }
    vel
}

fn fill_cells_2d(grid: &Grid, vel: &mut VelocityField, f: impl Fn(f64, f64) -> (f64, f64)) {
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let idx = grid.idx(i, j, 0);
            let [x, y, _] = grid.cell_center(i, j, 0);
            let (u, v) = f(x, y);
            vel.u[idx] = u;
            vel.v[idx] = v;
        }
    }
}

/// The 3D deformation field built from a discrete vector potential: face
/// fluxes are edge circulations, so every cell's face divergence cancels
/// to round-off.
fn deformation_field(grid: &Grid, gt: f64) -> VelocityField {
    let g = grid;
    let mut vel = VelocityField::zeros(g);
    let s = |x: f64| (PI * x).sin().powi(2);
    let sp = |x: f64| PI * (2.0 * PI * x).sin();
    // A = (0, -S(x) S'(y) S(z), S(x) S(y) S'(z)) * gt / pi^2
    let a2 = |x: f64, y: f64, z: f64| -s(x) * sp(y) * s(z) * gt / (PI * PI);
    let a3 = |x: f64, y: f64, z: f64| s(x) * s(y) * sp(z) * gt / (PI * PI);
    let xat = |i: usize| g.origin[0] + i as f64 * g.dx;
    let yat = |j: usize| g.origin[1] + j as f64 * g.dy;
    let zat = |k: usize| g.origin[2] + k as f64 * g.dz;

    // x faces: circulation of (A2, A3) around the (y, z) rectangle
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..=g.nx {
                let f = vel.fidx(Axis::X, i, j, k);
                let x = xat(i);
                let (y0, y1) = (yat(j), yat(j + 1));
                let (z0, z1) = (zat(k), zat(k + 1));
                let ym = 0.5 * (y0 + y1);
                let zm = 0.5 * (z0 + z1);
                let circ = (a2(x, ym, z0) - a2(x, ym, z1)) * g.dy
                    + (a3(x, y1, zm) - a3(x, y0, zm)) * g.dz;
                vel.fu[f] = circ / (g.dy * g.dz);
            }
        }
    }
    // y faces: boundary edges run along z and x; A1 = 0, only A3 contributes
    for k in 0..g.nz {
        for j in 0..=g.ny {
            for i in 0..g.nx {
                let f = vel.fidx(Axis::Y, i, j, k);
                let y = yat(j);
                let (x0, x1) = (xat(i), xat(i + 1));
                let (z0, z1) = (zat(k), zat(k + 1));
                let xm = 0.5 * (x0 + x1);
                let zm = 0.5 * (z0 + z1);
                let circ = (a3(x0, y, zm) - a3(x1, y, zm)) * g.dz;
                let _ = xm;
                vel.fv[f] = circ / (g.dx * g.dz);
            }
        }
    }
    // z faces: edges along x and y; A1 = 0, only A2 contributes
    for k in 0..=g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                let f = vel.fidx(Axis::Z, i, j, k);
                let z = zat(k);
                let (x0, x1) = (xat(i), xat(i + 1));
                let (y0, y1) = (yat(j), yat(j + 1));
                let ym = 0.5 * (y0 + y1);
                let circ = (a2(x1, ym, z) - a2(x0, ym, z)) * g.dy;
                vel.fw[f] = circ / (g.dx * g.dy);
            }
        }
    }
    // cell-centered samples of the analytic field for the CFL guard
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                let idx = g.idx(i, j, k);
                let [x, y, z] = g.cell_center(i, j, k);
                vel.u[idx] =
                    2.0 * s(x) * (2.0 * PI * y).sin() * (2.0 * PI * z).sin() * gt;
                vel.v[idx] =
                    -(2.0 * PI * x).sin() * s(y) * (2.0 * PI * z).sin() * gt;
                vel.w[idx] =
                    -(2.0 * PI * x).sin() * (2.0 * PI * y).sin() * s(z) * gt;
            }
        }
    }
    vel
}

/// Bubble wall state for the reduced Rayleigh-Plesset equation
/// `R R'' + (3/2) R'^2 = dp / rho`.
#[derive(Debug, Clone, Copy)]
pub struct RpState {
    pub r: f64,
    pub rdot: f64,
    pub t: f64,
}

impl RpState {
    pub fn new(r: f64) -> RpState {
        RpState { r, rdot: 0.0, t: 0.0 }
    }
}

/// Classic fourth-order Runge-Kutta step of `(R, R')`.
pub fn rp_integrate(state: RpState, dt: f64, dp: f64, rho: f64) -> Result<RpState> {
    let accel = |r: f64, rdot: f64| -> Result<f64> {
        if r <= 0.0 {
            return Err(VofError::RadiusCollapsed);
        }
        Ok((dp / rho - 1.5 * rdot * rdot) / r)
    };
    let (r0, v0) = (state.r, state.rdot);
    let k1r = v0;
    let k1v = accel(r0, v0)?;
    let k2r = v0 + 0.5 * dt * k1v;
    let k2v = accel(r0 + 0.5 * dt * k1r, v0 + 0.5 * dt * k1v)?;
    let k3r = v0 + 0.5 * dt * k2v;
    let k3v = accel(r0 + 0.5 * dt * k2r, v0 + 0.5 * dt * k2v)?;
    let k4r = v0 + dt * k3v;
    let k4v = accel(r0 + dt * k3r, v0 + dt * k3v)?;
    let r = r0 + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    let rdot = v0 + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if r <= 0.0 {
        return Err(VofError::RadiusCollapsed);
    }
    Ok(RpState { r, rdot, t: state.t + dt })
}

/// Diagnostic non-split update `dC/dt = -rdot |grad C|`; smears the
/// interface and exists only for comparison against the split scheme.
pub fn apply_radial_source(field: &mut ColorField, rdot: f64, dt: f64) {
    let g = field.grid.clone();
    let snapshot = field.clone();
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                let (gx, gy, gz) = snapshot.gradient_at(i, j, k);
                let mag = (gx * gx + gy * gy + gz * gz).sqrt();
                if mag == 0.0 {
                    continue;
                }
                let idx = g.idx(i, j, k);
                field.values[idx] = (field.values[idx] - dt * rdot * mag).clamp(0.0, 1.0);
            }
        }
    }
}
