//! Height-function curvature estimation and the interface-mean curvature.
//!
//! Heights are 3-cell column sums of `C` along the dominant normal axis.
//! With that convention the curvature of a convex blob of reference fluid
//! is positive (a disc of radius `r` gives `kappa ~ +1/r`, a sphere `+2/r`),
//! and swapping the fluids flips the sign.

use crate::error::{Result, VofError};
use crate::field::ColorField;
use crate::grid::{Axis, BoundaryKind, Grid};
use crate::plic::youngs_normal;

/// Tolerance for treating a column end cell as pure fluid/void.
const COLUMN_TOL: f64 = 1e-8;

/// Dirac-delta surrogate concentrating interface integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaKind {
    /// `4 C (1 - C)`: bounded and smooth.
    Polynomial,
    /// `|grad C|` by central differences.
    Gradient,
}

/// Options for the curvature evaluation.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureOptions {
    /// Mixed-cell threshold (cells with `eps < C < 1 - eps` carry interface).
    pub eps: f64,
    /// Reproduces the 3D denominator with the transverse slope entering
    /// unsquared, for comparison runs only. The default squares it.
    pub unsquared_z_slope: bool,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        CurvatureOptions { eps: 1e-10, unsquared_z_slope: false }
    }
}

/// Per-cell curvature. `kappa` is defined for every mixed cell after the
/// nearest-valid fill; `valid` marks cells whose own height columns were
/// usable (only those enter integral quantities).
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub kappa: Vec<f64>,
    pub valid: Vec<bool>,
    pub mixed: Vec<bool>,
    /// Mixed cells plus their face-neighbor ring: everywhere the interface
    /// velocity formula applies (the gradient stencil reaches one cell
    /// beyond the band).
    pub active: Vec<bool>,
    /// Largest `|kappa| * dx` seen among valid cells; values near one mean
    /// the interface curvature is at the resolvability limit.
    pub kappa_dx_max: f64,
}

/// Sums `C` over the 3-cell column through `(i, j, k)` along `axis`,
/// scaled by the spacing. Returns `None` when the column leaves the domain
/// on a zero-Neumann axis or does not bracket the interface sharply.
///
/// `fluid_low` orients the test: `true` means the fluid side sits at lower
/// indices along the column axis.
fn height_column(
    field: &ColorField,
    i: isize,
    j: isize,
    k: isize,
    axis: Axis,
    fluid_low: bool,
    strict: bool,
) -> Option<f64> {
    let g = &field.grid;
    let n = g.n(axis) as isize;
    let along = |l: isize| -> (isize, isize, isize) {
        match axis {
            Axis::X => (i + l, j, k),
            Axis::Y => (i, j + l, k),
            Axis::Z => (i, j, k + l),
        }
    };
    // column plus its bracket cells must stay inside the domain on clamped axes
    if g.bc[axis.index()] == BoundaryKind::ZeroNeumann {
        let base = match axis {
            Axis::X => i,
            Axis::Y => j,
            Axis::Z => k,
        };
        if base - 2 < 0 || base + 2 >= n {
            return None;
        }
    }
    let c_at = |l: isize| {
        let (a, b, c) = along(l);
        field.ghost(a, b, c)
    };
    let (lo, mid, hi) = (c_at(-1), c_at(0), c_at(1));
    if strict {
        // the window must bracket the interface: one cell beyond each end is
        // pure fluid on the fluid side and pure void on the other, otherwise
        // the column sum saturates and the height loses exactness
        let (below, above) = (c_at(-2), c_at(2));
        let (full_side, void_side) = if fluid_low { (below, above) } else { (above, below) };
        if full_side < 1.0 - COLUMN_TOL || void_side > COLUMN_TOL {
            return None;
        }
        // orient so the fluid occupies the low end
        let (a, b, c) = if fluid_low { (lo, mid, hi) } else { (hi, mid, lo) };
        // sharp monotone profile
        if a < b - COLUMN_TOL || b < c - COLUMN_TOL {
            return None;
        }
    }
    Some((lo + mid + hi) * g.d(axis))
}

/// Checks that all transverse offsets used by the column stencil stay inside
/// the domain on zero-Neumann axes.
fn transverse_in_range(g: &Grid, base: isize, axis: Axis) -> bool {
    if g.bc[axis.index()] == BoundaryKind::Periodic {
        return true;
    }
    base - 1 >= 0 && base + 1 < g.n(axis) as isize
}

struct CellCurvature {
    kappa: f64,
}

fn curvature_at(
    field: &ColorField,
    i: usize,
    j: usize,
    k: usize,
    opts: &CurvatureOptions,
) -> Option<CellCurvature> {
    curvature_at_mode(field, i, j, k, opts, true)
}

fn curvature_at_mode(
    field: &ColorField,
    i: usize,
    j: usize,
    k: usize,
    opts: &CurvatureOptions,
    strict: bool,
) -> Option<CellCurvature> {
    let g = &field.grid;
    let m = youngs_normal(field, i, j, k);
    let (i, j, k) = (i as isize, j as isize, k as isize);
    if m == [0.0; 3] {
        return None;
    }
    let dims = if g.is_2d() { 2 } else { 3 };
    let mut dom = 0usize;
    for d in 1..dims {
        if m[d].abs() > m[dom].abs() {
            dom = d;
        }
    }
    let dom_axis = Axis::from_index(dom);
    // m = -grad C: positive dominant component means C decreases upward,
    // i.e. the fluid occupies the low side of the column.
    let fluid_low = m[dom] > 0.0;

    if g.is_2d() {
        let t_axis = if dom_axis == Axis::X { Axis::Y } else { Axis::X };
        if !transverse_in_range(g, if t_axis == Axis::X { i } else { j }, t_axis) {
            return None;
        }
        let col = |o: isize| -> Option<f64> {
            let (ci, cj) = match (dom_axis, t_axis) {
                (Axis::Y, Axis::X) => (i + o, j),
                (Axis::X, Axis::Y) => (i, j + o),
                _ => unreachable!(),
            };
            height_column(field, ci, cj, k, dom_axis, fluid_low, strict)
        };
        let (hm, h0, hp) = (col(-1)?, col(0)?, col(1)?);
        let dt = g.d(t_axis);
        let hx = (hp - hm) / (2.0 * dt);
        let hxx = (hp - 2.0 * h0 + hm) / (dt * dt);
        let kappa = -hxx / (1.0 + hx * hx).powf(1.5);
        Some(CellCurvature { kappa })
    } else {
        let (t1, t2) = match dom_axis {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        };
        let base = |axis: Axis| match axis {
            Axis::X => i,
            Axis::Y => j,
            Axis::Z => k,
        };
        if !transverse_in_range(g, base(t1), t1) || !transverse_in_range(g, base(t2), t2) {
            return None;
        }
        let col = |o1: isize, o2: isize| -> Option<f64> {
            let mut ci = i;
            let mut cj = j;
            let mut ck = k;
            let mut shift = |axis: Axis, o: isize| match axis {
                Axis::X => ci += o,
                Axis::Y => cj += o,
                Axis::Z => ck += o,
            };
            shift(t1, o1);
            shift(t2, o2);
            height_column(field, ci, cj, ck, dom_axis, fluid_low, strict)
        };
        let mut h = [[0.0f64; 3]; 3];
        for (a, o1) in (-1..=1).enumerate() {
            for (b, o2) in (-1..=1).enumerate() {
                h[a][b] = col(o1, o2)?;
            }
        }
        let d1 = g.d(t1);
        let d2 = g.d(t2);
        let hx = (h[2][1] - h[0][1]) / (2.0 * d1);
        let hz = (h[1][2] - h[1][0]) / (2.0 * d2);
        let hxx = (h[2][1] - 2.0 * h[1][1] + h[0][1]) / (d1 * d1);
        let hzz = (h[1][2] - 2.0 * h[1][1] + h[1][0]) / (d2 * d2);
        let hxz = (h[2][2] - h[2][0] - h[0][2] + h[0][0]) / (4.0 * d1 * d2);
        let num = hxx + hzz + hxx * hz * hz + hzz * hx * hx - 2.0 * hxz * hx * hz;
        let base = if opts.unsquared_z_slope {
            1.0 + hx * hx + hz
        } else {
            1.0 + hx * hx + hz * hz
        };
        if base <= 0.0 {
            return None;
        }
        let kappa = -num / base.powf(1.5);
        Some(CellCurvature { kappa })
    }
}

/// Height-function curvature in one 2D cell (mixed cells only).
pub fn curvature_2d(field: &ColorField, i: usize, j: usize) -> Option<f64> {
    curvature_at(field, i, j, 0, &CurvatureOptions::default()).map(|c| c.kappa)
}

/// Height-function curvature in one 3D cell (mixed cells only).
pub fn curvature_3d(field: &ColorField, i: usize, j: usize, k: usize) -> Option<f64> {
    curvature_at(field, i, j, k, &CurvatureOptions::default()).map(|c| c.kappa)
}

/// Evaluates curvature over every mixed cell. Cells whose columns fail the
/// strict bracketing test inherit the value of the nearest valid mixed
/// cell (breadth-first, ties to the lower index); the fill also covers the
/// one-cell ring around the interface band so velocity extension can read
/// kappa there.
pub fn compute_curvature(field: &ColorField, opts: &CurvatureOptions) -> CurvatureField {
    let g = &field.grid;
    let n = g.ncells();
    let mut kappa = vec![0.0; n];
    let mut valid = vec![false; n];
    let mut has_value = vec![false; n];
    let mut mixed = vec![false; n];
    let mut kappa_dx_max: f64 = 0.0;
    let dx_min = g.dx.min(g.dy).min(if g.is_2d() { f64::INFINITY } else { g.dz });
    let kappa_cap = 1.0 / dx_min;

    for idx in 0..n {
        let c = field.values[idx];
        if c <= opts.eps || c >= 1.0 - opts.eps {
            continue;
        }
        mixed[idx] = true;
        let (i, j, k) = g.coords(idx);
        if let Some(cc) = curvature_at_mode(field, i, j, k, opts, true) {
            kappa[idx] = cc.kappa.clamp(-kappa_cap, kappa_cap);
            valid[idx] = true;
            has_value[idx] = true;
            kappa_dx_max = kappa_dx_max.max(cc.kappa.abs() * dx_min);
        }
    }

    // the velocity formula acts on mixed cells and their face neighbors
    let mut active = mixed.clone();
    for idx in 0..n {
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
                    && g.bc[ax.index()] == BoundaryKind::ZeroNeumann
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

    let need_fill = (0..n).filter(|&i| active[i] && !has_value[i]).count();
    if need_fill > 0 {
        fill_from_nearest_valid(g, &mut kappa, &has_value, &active, need_fill);
    }

    CurvatureField { kappa, valid, mixed, active, kappa_dx_max }
}

/// Multi-source BFS on the cell lattice assigning each unvalued cell the
/// kappa of its nearest valid source; deterministic tie-breaking by
/// processing each frontier in ascending index order.
fn fill_from_nearest_valid(
    g: &Grid,
    kappa: &mut [f64],
    sources: &[bool],
    targets: &[bool],
    mut remaining: usize,
) {
    let n = g.ncells();
    let mut assigned = vec![false; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&i| sources[i]).collect();
    for &i in &frontier {
        assigned[i] = true;
    }
    if frontier.is_empty() {
        return;
    }
    let neighbors = |idx: usize, out: &mut Vec<usize>| {
        out.clear();
        let (i, j, k) = g.coords(idx);
        let push = |ii: isize, jj: isize, kk: isize, out: &mut Vec<usize>| {
            let axes = [Axis::X, Axis::Y, Axis::Z];
            let vals = [ii, jj, kk];
            for (&v, &ax) in vals.iter().zip(&axes) {
                let nn = g.n(ax) as isize;
                if (v < 0 || v >= nn) && g.bc[ax.index()] == BoundaryKind::ZeroNeumann {
                    return;
                }
            }
            let ri = g.resolve(ii, Axis::X);
            let rj = g.resolve(jj, Axis::Y);
            let rk = g.resolve(kk, Axis::Z);
            out.push(g.idx(ri, rj, rk));
        };
        let (i, j, k) = (i as isize, j as isize, k as isize);
        push(i - 1, j, k, out);
        push(i + 1, j, k, out);
        push(i, j - 1, k, out);
        push(i, j + 1, k, out);
        if !g.is_2d() {
            push(i, j, k - 1, out);
            push(i, j, k + 1, out);
        }
    };

    let mut scratch = Vec::with_capacity(6);
    while remaining > 0 && !frontier.is_empty() {
        frontier.sort_unstable();
        let mut next = Vec::new();
        for &cell in &frontier {
            neighbors(cell, &mut scratch);
            for &nb in &scratch {
                if !assigned[nb] {
                    assigned[nb] = true;
                    kappa[nb] = kappa[cell];
                    if targets[nb] {
                        remaining -= 1;
                    }
                    next.push(nb);
                }
            }
        }
        frontier = next;
    }
}

/// Interface-mean curvature: the Lagrange multiplier of the volume
/// constraint, `kbar = sum(kappa * delta) / sum(delta)` over valid cells.
pub fn mean_curvature(
    field: &ColorField,
    curv: &CurvatureField,
    delta: DeltaKind,
    t: f64,
) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    // integrate over every mixed cell that carries velocity, inherited
    // kappa included: averaging only the valid subset biases kbar wherever
    // high-curvature cells are unresolved, and the constraint then leaks
    for idx in 0..curv.kappa.len() {
        if !curv.mixed[idx] {
            continue;
        }
        let w = match delta {
            DeltaKind::Polynomial => {
                let c = field.values[idx];
                4.0 * c * (1.0 - c)
            }
            DeltaKind::Gradient => {
                let (i, j, k) = field.grid.coords(idx);
                let (gx, gy, gz) = field.gradient_at(i, j, k);
                (gx * gx + gy * gy + gz * gz).sqrt()
            }
        };
        num += curv.kappa[idx] * w;
        den += w;
    }
    if den <= 0.0 {
        return Err(VofError::InterfaceVanished { t });
    }
    Ok(num / den)
}
