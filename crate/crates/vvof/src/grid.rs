//! Uniform Cartesian grid bookkeeping shared by every field in the solver.
//!
//! A grid with `nz == 1` runs in 2D mode: the z axis is inert (no z sweeps)
//! and `dz` enters cell volumes as a unit-like factor.

use serde::{Deserialize, Serialize};

/// Boundary handling per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Periodic,
    ZeroNeumann,
}

/// Coordinate axis identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        match i {
            0 => Axis::X,
            1 => Axis::Y,
            2 => Axis::Z,
            _ => panic!("axis index out of range: {i}"),
        }
    }
}

/// Uniform Cartesian cell lattice. Cell (i, j, k) is centered at
/// `origin + ((i + 1/2) dx, (j + 1/2) dy, (k + 1/2) dz)` with 0-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub origin: [f64; 3],
    pub bc: [BoundaryKind; 3],
}

impl Grid {
    pub fn new(
        n: [usize; 3],
        lo: [f64; 3],
        hi: [f64; 3],
        bc: [BoundaryKind; 3],
    ) -> Grid {
        let [nx, ny, nz] = n;
        assert!(nx >= 3 && ny >= 3, "cell counts must be >= 3");
        assert!(nz == 1 || nz >= 3, "nz must be 1 (2D) or >= 3");
        let dx = (hi[0] - lo[0]) / nx as f64;
        let dy = (hi[1] - lo[1]) / ny as f64;
        // 2D mode: dz is a unit factor so volumes reduce to areas, and the
        // plane sits at z = 0 regardless of the requested z extent.
        let mut origin = lo;
        let dz = if nz == 1 {
            origin[2] = -0.5;
            1.0
        } else {
            (hi[2] - lo[2]) / nz as f64
        };
        assert!(dx > 0.0 && dy > 0.0 && dz > 0.0, "spacings must be positive");
        Grid { nx, ny, nz, dx, dy, dz, origin, bc }
    }

    /// Square 2D grid over `[lo, hi]^2` with zero-Neumann boundaries.
    pub fn square_2d(n: usize, lo: f64, hi: f64) -> Grid {
        Grid::new(
            [n, n, 1],
            [lo, lo, 0.0],
            [hi, hi, 1.0],
            [BoundaryKind::ZeroNeumann; 3],
        )
    }

    /// Cubic 3D grid over `[lo, hi]^3` with zero-Neumann boundaries.
    pub fn cube_3d(n: usize, lo: f64, hi: f64) -> Grid {
        Grid::new(
            [n, n, n],
            [lo, lo, lo],
            [hi, hi, hi],
            [BoundaryKind::ZeroNeumann; 3],
        )
    }

    #[inline]
    pub fn is_2d(&self) -> bool {
        self.nz == 1
    }

    #[inline]
    pub fn ncells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny && k < self.nz);
        i + self.nx * (j + self.ny * k)
    }

    /// Inverse of `idx`.
    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let i = idx % self.nx;
        let j = (idx / self.nx) % self.ny;
        let k = idx / (self.nx * self.ny);
        (i, j, k)
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    #[inline]
    pub fn n(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
            Axis::Z => self.nz,
        }
    }

    #[inline]
    pub fn d(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
            Axis::Z => self.dz,
        }
    }

    #[inline]
    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.dx,
            self.origin[1] + (j as f64 + 0.5) * self.dy,
            self.origin[2] + (k as f64 + 0.5) * self.dz,
        ]
    }

    /// Resolves a possibly out-of-range index along `axis` to an in-range one:
    /// periodic wrap or nearest-edge clamp. Supports ghost depth <= 2.
    #[inline]
    pub fn resolve(&self, i: isize, axis: Axis) -> usize {
        let n = self.n(axis) as isize;
        if i >= 0 && i < n {
            return i as usize;
        }
        match self.bc[axis.index()] {
            // periodic wrap is exact at any depth
            BoundaryKind::Periodic => (i.rem_euclid(n)) as usize,
            BoundaryKind::ZeroNeumann => {
                debug_assert!(
                    i >= -2 && i < n + 2,
                    "ghost access depth > 2 on axis {:?}: {}",
                    axis,
                    i
                );
                i.clamp(0, n - 1) as usize
            }
        }
    }

    pub fn domain_volume(&self) -> f64 {
        self.ncells() as f64 * self.cell_volume()
    }

    /// Axes that are swept during advection (z is inert in 2D).
    pub fn active_axes(&self) -> &'static [Axis] {
        if self.is_2d() {
            &[Axis::X, Axis::Y]
        } else {
            &Axis::ALL
        }
    }
}
