//! Implicit (level-set style) geometry descriptions, boolean composition,
//! and conversion of an implicit function into cell volume fractions.
//!
//! Sign convention: `evaluate < 0` inside the reference fluid (`C -> 1`).

use crate::error::{Result, VofError};
use crate::field::ColorField;
use crate::grid::Grid;
use serde::{Deserialize, Serialize};

/// Subdivision depth for mixed-cell voxelization: 4 halvings give 256
/// subcells in 2D and 4096 in 3D.
const SUBDIV_DEPTH: u32 = 4;

/// An implicit shape, evaluated as a signed scalar field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ImplicitShape {
    /// Sphere in 3D; disc in 2D mode (evaluated in the grid midplane).
    Sphere { center: [f64; 3], radius: f64 },
    /// Zalesak geometry: disc with a vertical slot of `slot_width` removed,
    /// cut from the bottom rim up to `center_y - radius + slot_length`.
    SlottedDisc {
        center: [f64; 2],
        radius: f64,
        slot_width: f64,
        slot_length: f64,
    },
    /// Pointed star `r(theta) = shift + scale * cos(petals * theta)`.
    Star {
        center: [f64; 2],
        shift: f64,
        scale: f64,
        petals: u32,
    },
    /// Wound spiral: tube of half-width `width` around a parameterized
    /// point set.
    Spiral {
        center: [f64; 2],
        turns: f64,
        head: f64,
        scale: f64,
        points: usize,
        width: f64,
        #[serde(skip)]
        point_cache: Vec<[f64; 2]>,
    },
    /// Two spheres joined by a cylinder along x.
    Dumbbell {
        center: [f64; 3],
        offset: f64,
        radius: f64,
        neck_radius: f64,
    },
    Ellipsoid { center: [f64; 3], semi_axes: [f64; 3] },
    Superellipsoid { center: [f64; 3], radius: f64, exponent: u32 },
    Octahedron { center: [f64; 3], radius: f64 },
    /// `normal . x - offset`, mostly for tests.
    HalfSpace { normal: [f64; 3], offset: f64 },
    Union { shapes: Vec<ImplicitShape> },
    /// Complement: swaps inside and outside.
    Complement { shape: Box<ImplicitShape> },
}

impl ImplicitShape {
    pub fn evaluate(&self, x: f64, y: f64, z: f64) -> f64 {
        match self {
            ImplicitShape::Sphere { center, radius } => {
                let dx = x - center[0];
                let dy = y - center[1];
                let dz = z - center[2];
                (dx * dx + dy * dy + dz * dz).sqrt() - radius
            }
            ImplicitShape::SlottedDisc { center, radius, slot_width, slot_length } => {
                let disc = {
                    let dx = x - center[0];
                    let dy = y - center[1];
                    (dx * dx + dy * dy).sqrt() - radius
                };
                let slot_top = center[1] - radius + slot_length;
                let slot = (x - center[0]).abs() - 0.5 * slot_width;
                let slot = slot.max(y - slot_top);
                disc.max(-slot)
            }
            ImplicitShape::Star { center, shift, scale, petals } => {
                let dx = x - center[0];
                let dy = y - center[1];
                let r = (dx * dx + dy * dy).sqrt();
                let theta = dy.atan2(dx);
                r - (shift + scale * (*petals as f64 * theta).cos())
            }
            ImplicitShape::Spiral { width, point_cache, .. } => {
                debug_assert!(!point_cache.is_empty(), "spiral used without with_caches()");
                let mut best = f64::INFINITY;
                for p in point_cache {
                    let d2 = (x - p[0]) * (x - p[0]) + (y - p[1]) * (y - p[1]);
                    best = best.min(d2);
                }
                best.sqrt() - width
            }
            ImplicitShape::Dumbbell { center, offset, radius, neck_radius } => {
                let dx = x - center[0];
                let dy = y - center[1];
                let dz = z - center[2];
                let rr = (dy * dy + dz * dz).sqrt();
                let sphere_r = ((dx + offset) * (dx + offset) + dy * dy + dz * dz).sqrt() - radius;
                let sphere_l = ((dx - offset) * (dx - offset) + dy * dy + dz * dz).sqrt() - radius;
                let cylinder = (dx.abs() - offset).max(rr - neck_radius);
                sphere_r.min(sphere_l).min(cylinder)
            }
            ImplicitShape::Ellipsoid { center, semi_axes } => {
                let dx = (x - center[0]) / semi_axes[0];
                let dy = (y - center[1]) / semi_axes[1];
                let dz = (z - center[2]) / semi_axes[2];
                dx * dx + dy * dy + dz * dz - 1.0
            }
            ImplicitShape::Superellipsoid { center, radius, exponent } => {
                let n = *exponent as i32;
                ((x - center[0]) / radius).abs().powi(n)
                    + ((y - center[1]) / radius).abs().powi(n)
                    + ((z - center[2]) / radius).abs().powi(n)
                    - 1.0
            }
            ImplicitShape::Octahedron { center, radius } => {
                (x - center[0]).abs() + (y - center[1]).abs() + (z - center[2]).abs() - radius
            }
            ImplicitShape::HalfSpace { normal, offset } => {
                normal[0] * x + normal[1] * y + normal[2] * z - offset
            }
            ImplicitShape::Union { shapes } => shapes
                .iter()
                .map(|s| s.evaluate(x, y, z))
                .fold(f64::INFINITY, f64::min),
            ImplicitShape::Complement { shape } => -shape.evaluate(x, y, z),
        }
    }

    /// Fills derived data (the spiral's parameterized point set). Shapes
    /// deserialized from configs must pass through this before evaluation.
    pub fn with_caches(mut self) -> ImplicitShape {
        match &mut self {
            ImplicitShape::Spiral { center, turns, head, scale, points, point_cache, .. } => {
                point_cache.clear();
                for k in 1..=*points {
                    let s = (k as f64 + *head) / (*points as f64 + *head);
                    let theta = 2.0 * std::f64::consts::PI * *turns * s.sqrt();
                    let rad = *scale * *turns * s.sqrt() / (1.0 + *turns);
                    point_cache.push([
                        center[0] + rad * theta.cos(),
                        center[1] + rad * theta.sin(),
                    ]);
                }
            }
            ImplicitShape::Union { shapes } => {
                let owned = std::mem::take(shapes);
                *shapes = owned.into_iter().map(|s| s.with_caches()).collect();
            }
            ImplicitShape::Complement { shape } => {
                let owned = std::mem::replace(
                    shape.as_mut(),
                    ImplicitShape::HalfSpace { normal: [1.0, 0.0, 0.0], offset: 0.0 },
                );
                **shape = owned.with_caches();
            }
            _ => {}
        }
        self
    }

    /// Validates parameter ranges; shapes built from configs go through this.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(VofError::Config(msg));
        match self {
            ImplicitShape::Sphere { radius, .. } if *radius <= 0.0 => {
                bad(format!("sphere radius must be positive, got {radius}"))
            }
            ImplicitShape::SlottedDisc { radius, slot_width, slot_length, .. }
                if *radius <= 0.0 || *slot_width <= 0.0 || *slot_length <= 0.0 =>
            {
                bad("slotted-disc dimensions must be positive".into())
            }
            ImplicitShape::Star { shift, scale, petals, .. }
                if *shift <= 0.0 || *scale <= 0.0 || *petals < 1 =>
            {
                bad("star requires positive shift/scale and petals >= 1".into())
            }
            ImplicitShape::Spiral { width, points, .. } if *width <= 0.0 || *points < 2 => {
                bad("spiral requires positive width and at least 2 points".into())
            }
            ImplicitShape::Dumbbell { radius, neck_radius, offset, .. }
                if *radius <= 0.0 || *neck_radius <= 0.0 || *offset <= 0.0 =>
            {
                bad("dumbbell dimensions must be positive".into())
            }
            ImplicitShape::Ellipsoid { semi_axes, .. }
                if semi_axes.iter().any(|&a| a <= 0.0) =>
            {
                bad("ellipsoid semi-axes must be positive".into())
            }
            ImplicitShape::Superellipsoid { radius, exponent, .. }
                if *radius <= 0.0 || *exponent == 0 || *exponent % 2 != 0 =>
            {
                bad("superellipsoid requires positive radius and even positive exponent".into())
            }
            ImplicitShape::Octahedron { radius, .. } if *radius <= 0.0 => {
                bad(format!("octahedron radius must be positive, got {radius}"))
            }
            ImplicitShape::HalfSpace { normal, .. } if *normal == [0.0; 3] => {
                bad("half-space normal must be nonzero".into())
            }
            ImplicitShape::Union { shapes } => {
                if shapes.is_empty() {
                    return bad("union of zero shapes".into());
                }
                for s in shapes {
                    s.validate()?;
                }
                Ok(())
            }
            ImplicitShape::Complement { shape } => shape.validate(),
            _ => Ok(()),
        }
    }
}

/// Pointwise minimum of the member evaluations.
pub fn shape_union(shapes: Vec<ImplicitShape>) -> Result<ImplicitShape> {
    if shapes.is_empty() {
        return Err(VofError::Config("union of zero shapes".into()));
    }
    if shapes.len() == 1 {
        return Ok(shapes.into_iter().next().unwrap());
    }
    Ok(ImplicitShape::Union { shapes })
}

/// Fraction of the box `[x0,x1] x [y0,y1] x [z0,z1]` where `phi < 0`,
/// by recursive midpoint subdivision. 2D mode subdivides in-plane only.
fn box_fraction(
    shape: &ImplicitShape,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    z0: f64,
    z1: f64,
    two_d: bool,
    depth: u32,
) -> f64 {
    let zm = 0.5 * (z0 + z1);
    let corners_2d = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
    let mut neg = 0usize;
    let mut pos = 0usize;
    let mut tally = |v: f64| {
        if v < 0.0 {
            neg += 1;
        } else {
            pos += 1;
        }
    };
    if two_d {
        for (cx, cy) in corners_2d {
            tally(shape.evaluate(cx, cy, zm));
        }
        tally(shape.evaluate(0.5 * (x0 + x1), 0.5 * (y0 + y1), zm));
    } else {
        for cz in [z0, z1] {
            for (cx, cy) in corners_2d {
                tally(shape.evaluate(cx, cy, cz));
            }
        }
        tally(shape.evaluate(0.5 * (x0 + x1), 0.5 * (y0 + y1), zm));
    }
    if pos == 0 {
        return 1.0;
    }
    if neg == 0 {
        return 0.0;
    }
    if depth == 0 {
        // leaf: linearize phi from the corner samples and take the exact
        // fraction below the resulting plane; a binary center test would
        // leave O(2^-8) noise in C, which curvature stencils amplify
        let xm = 0.5 * (x0 + x1);
        let ym = 0.5 * (y0 + y1);
        let c0 = shape.evaluate(xm, ym, zm);
        let (gx, gy, gz) = if two_d {
            let f = |x: f64, y: f64| shape.evaluate(x, y, zm);
            (
                0.5 * (f(x1, y0) + f(x1, y1) - f(x0, y0) - f(x0, y1)),
                0.5 * (f(x0, y1) + f(x1, y1) - f(x0, y0) - f(x1, y0)),
                0.0,
            )
        } else {
            let f = |x: f64, y: f64, z: f64| shape.evaluate(x, y, z);
            let mut gx = 0.0;
            let mut gy = 0.0;
            let mut gz = 0.0;
            for &z in &[z0, z1] {
                gx += 0.25 * (f(x1, y0, z) + f(x1, y1, z) - f(x0, y0, z) - f(x0, y1, z));
                gy += 0.25 * (f(x0, y1, z) + f(x1, y1, z) - f(x0, y0, z) - f(x1, y0, z));
            }
            for &y in &[y0, y1] {
                gz += 0.25 * (f(x0, y, z1) + f(x1, y, z1) - f(x0, y, z0) - f(x1, y, z0));
            }
            (gx, gy, gz)
        };
        // phi(u) ~ c0 + m . (u - 1/2) on the unit box
        let m = [gx, gy, gz];
        let beta = 0.5 * (m[0] + m[1] + m[2]) - c0;
        return crate::plic::halfspace_volume(m, beta);
    }
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let mut acc = 0.0;
    if two_d {
        for (a0, a1) in [(x0, xm), (xm, x1)] {
            for (b0, b1) in [(y0, ym), (ym, y1)] {
                acc += box_fraction(shape, a0, a1, b0, b1, z0, z1, true, depth - 1);
            }
        }
        acc / 4.0
    } else {
        for (a0, a1) in [(x0, xm), (xm, x1)] {
            for (b0, b1) in [(y0, ym), (ym, y1)] {
                for (c0, c1) in [(z0, zm), (zm, z1)] {
                    acc += box_fraction(shape, a0, a1, b0, b1, c0, c1, false, depth - 1);
                }
            }
        }
        acc / 8.0
    }
}

/// Converts an implicit shape into per-cell volume fractions.
pub fn voxelize(shape: &ImplicitShape, grid: &Grid) -> ColorField {
    let two_d = grid.is_2d();
    let mut field = ColorField::zeros(grid);
    for k in 0..grid.nz {
        let z0 = grid.origin[2] + k as f64 * grid.dz;
        let z1 = z0 + grid.dz;
        for j in 0..grid.ny {
            let y0 = grid.origin[1] + j as f64 * grid.dy;
            let y1 = y0 + grid.dy;
            for i in 0..grid.nx {
                let x0 = grid.origin[0] + i as f64 * grid.dx;
                let x1 = x0 + grid.dx;
                let f = box_fraction(shape, x0, x1, y0, y1, z0, z1, two_d, SUBDIV_DEPTH);
                field.values[grid.idx(i, j, k)] = f.clamp(0.0, 1.0);
            }
        }
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryKind;

    #[test]
    fn halfspace_on_cell_face_is_exact() {
        let g = Grid::square_2d(8, 0.0, 1.0);
        // interface exactly on the face x = 0.5
        let shape = ImplicitShape::HalfSpace { normal: [1.0, 0.0, 0.0], offset: 0.5 };
        let f = voxelize(&shape, &g);
        for j in 0..8 {
            for i in 0..8 {
                let expect = if i < 4 { 1.0 } else { 0.0 };
                assert_eq!(f.get(i, j, 0), expect, "cell ({i},{j})");
            }
        }
    }

    #[test]
    fn halfspace_through_cell_center_gives_half() {
        let g = Grid::square_2d(8, 0.0, 1.0);
        let xc = g.cell_center(3, 0, 0)[0];
        let shape = ImplicitShape::HalfSpace { normal: [1.0, 0.0, 0.0], offset: xc };
        let f = voxelize(&shape, &g);
        for j in 0..8 {
            assert!((f.get(3, j, 0) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_area_close_to_analytic() {
        let g = Grid::square_2d(128, 0.0, 1.0);
        let shape = ImplicitShape::Sphere { center: [0.5, 0.5, 0.0], radius: 0.15 };
        let f = voxelize(&shape, &g);
        let area = f.total_volume();
        let exact = std::f64::consts::PI * 0.15 * 0.15;
        assert!((area - exact).abs() / exact < 0.002, "area = {area}, exact = {exact}");
    }

    #[test]
    fn union_of_one_is_identity() {
        let s = ImplicitShape::Sphere { center: [0.0; 3], radius: 1.0 };
        let u = shape_union(vec![s.clone()]).unwrap();
        for p in [[0.1, 0.2, 0.3], [1.5, 0.0, 0.0]] {
            assert_eq!(u.evaluate(p[0], p[1], p[2]), s.evaluate(p[0], p[1], p[2]));
        }
    }

    #[test]
    fn empty_union_is_error() {
        assert!(shape_union(vec![]).is_err());
    }

    #[test]
    fn disjoint_spheres_volumes_add() {
        let g = Grid::cube_3d(48, 0.0, 1.0);
        let a = ImplicitShape::Sphere { center: [0.3, 0.3, 0.3], radius: 0.12 };
        let b = ImplicitShape::Sphere { center: [0.7, 0.7, 0.7], radius: 0.12 };
        let va = voxelize(&a, &g).total_volume();
        let vb = voxelize(&b, &g).total_volume();
        let u = shape_union(vec![a, b]).unwrap();
        let vu = voxelize(&u, &g).total_volume();
        assert!((vu - (va + vb)).abs() / vu < 1e-9);
    }

    #[test]
    fn voxelize_monotone_under_union() {
        let g = Grid::square_2d(32, 0.0, 1.0);
        let a = ImplicitShape::Sphere { center: [0.45, 0.5, 0.0], radius: 0.2 };
        let b = ImplicitShape::Sphere { center: [0.6, 0.55, 0.0], radius: 0.15 };
        let fa = voxelize(&a, &g);
        let fb = voxelize(&b, &g);
        let fu = voxelize(&shape_union(vec![a, b]).unwrap(), &g);
        let tol = 2.0_f64.powi(-12);
        for i in 0..g.ncells() {
            let m = fa.values[i].max(fb.values[i]);
            assert!(fu.values[i] >= m - tol, "cell {i}: union {} < max {}", fu.values[i], m);
        }
    }

    #[test]
    fn complement_gives_one_minus_c() {
        let g = Grid::square_2d(32, 0.0, 1.0);
        let s = ImplicitShape::Sphere { center: [0.5, 0.5, 0.0], radius: 0.25 };
        let f = voxelize(&s, &g);
        let fc = voxelize(
            &ImplicitShape::Complement { shape: Box::new(s) },
            &g,
        );
        let tol = 2.0_f64.powi(-8);
        for i in 0..g.ncells() {
            assert!((fc.values[i] - (1.0 - f.values[i])).abs() <= tol);
        }
    }

    #[test]
    fn octahedron_center_value() {
        let s = ImplicitShape::Octahedron { center: [0.5, 0.5, 0.5], radius: 0.3 };
        assert!((s.evaluate(0.5, 0.5, 0.5) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn star_zero_on_petal_axis() {
        let s = ImplicitShape::Star { center: [0.0, 0.0], shift: 25.0, scale: 10.0, petals: 8 };
        // along theta = 0 the radius is shift + scale
        assert!(s.evaluate(35.0, 0.0, 0.0).abs() < 1e-12);
    }

    #[test]
    fn dumbbell_is_connected() {
        let g = Grid::new(
            [64, 64, 64],
            [0.0; 3],
            [100.0; 3],
            [BoundaryKind::ZeroNeumann; 3],
        );
        let s = ImplicitShape::Dumbbell {
            center: [50.0, 50.0, 50.0],
            offset: 20.0,
            radius: 10.0,
            neck_radius: 5.0,
        };
        let f = voxelize(&s, &g);
        let n = crate::metrics::connected_components(&f, 0.5);
        assert_eq!(n, 1);
    }

    #[test]
    fn spiral_area_matches_fine_sampling() {
        let s = ImplicitShape::Spiral {
            center: [50.0, 50.0],
            turns: 2.5,
            head: 3.0,
            scale: 50.0,
            points: 400,
            width: 3.0,
            point_cache: Vec::new(),
        }
        .with_caches();
        let g = Grid::new(
            [100, 100, 1],
            [0.0, 0.0, 0.0],
            [100.0, 100.0, 1.0],
            [BoundaryKind::ZeroNeumann; 3],
        );
        let area = voxelize(&s, &g).total_volume();
        // point-in-set sampling oracle
        let n = 2048usize;
        let h = 100.0 / n as f64;
        let mut hits = 0u64;
        for j in 0..n {
            let y = (j as f64 + 0.5) * h;
            for i in 0..n {
                let x = (i as f64 + 0.5) * h;
                if s.evaluate(x, y, 0.5) < 0.0 {
                    hits += 1;
                }
            }
        }
        let sampled = hits as f64 * h * h;
        assert!(
            (area - sampled).abs() / sampled < 0.01,
            "voxelized = {area}, sampled = {sampled}"
        );
    }
}
