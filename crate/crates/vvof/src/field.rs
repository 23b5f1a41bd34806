//! Scalar and vector field storage on a [`Grid`].

use crate::grid::{Axis, Grid};

/// Per-cell volume fraction of the reference fluid, `C` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ColorField {
    pub fn zeros(grid: &Grid) -> ColorField {
        ColorField { values: vec![0.0; grid.ncells()], grid: grid.clone() }
    }

    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize, usize, usize) -> f64) -> ColorField {
        let mut values = vec![0.0; grid.ncells()];
        for k in 0..grid.nz {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    values[grid.idx(i, j, k)] = f(i, j, k);
                }
            }
        }
        ColorField { values, grid: grid.clone() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.grid.idx(i, j, k)]
    }

    /// Value at a possibly out-of-range index triple: periodic wrap or
    /// nearest in-range value depending on the axis boundary kind.
    #[inline]
    pub fn ghost(&self, i: isize, j: isize, k: isize) -> f64 {
        let i = self.grid.resolve(i, Axis::X);
        let j = self.grid.resolve(j, Axis::Y);
        let k = self.grid.resolve(k, Axis::Z);
        self.values[self.grid.idx(i, j, k)]
    }

    /// Total fluid volume `sum(C) * dx dy dz`.
    pub fn total_volume(&self) -> f64 {
        let dv = self.grid.cell_volume();
        self.values.iter().sum::<f64>() * dv
    }

    /// Central-difference gradient at every cell center, using ghost values.
    pub fn gradient_cc(&self) -> VelocityField {
        let g = &self.grid;
        let mut out = VelocityField::zeros(g);
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let idx = g.idx(i, j, k);
                    let (gx, gy, gz) = self.gradient_at(i, j, k);
                    out.u[idx] = gx;
                    out.v[idx] = gy;
                    out.w[idx] = gz;
                }
            }
        }
        out
    }

    /// Central-difference gradient in one cell.
    #[inline]
    pub fn gradient_at(&self, i: usize, j: usize, k: usize) -> (f64, f64, f64) {
        let g = &self.grid;
        let (i, j, k) = (i as isize, j as isize, k as isize);
        let gx = (self.ghost(i + 1, j, k) - self.ghost(i - 1, j, k)) / (2.0 * g.dx);
        let gy = (self.ghost(i, j + 1, k) - self.ghost(i, j - 1, k)) / (2.0 * g.dy);
        let gz = if g.is_2d() {
            0.0
        } else {
            (self.ghost(i, j, k + 1) - self.ghost(i, j, k - 1)) / (2.0 * g.dz)
        };
        (gx, gy, gz)
    }

    /// Discrete interface measure `sum(|grad C|) dV`, the energy diagnostic.
    pub fn interface_energy(&self) -> f64 {
        let g = &self.grid;
        let dv = g.cell_volume();
        let mut e = 0.0;
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let (gx, gy, gz) = self.gradient_at(i, j, k);
                    e += (gx * gx + gy * gy + gz * gz).sqrt();
                }
            }
        }
        e * dv
    }

    /// Indices of mixed cells: `eps < C < 1 - eps`.
    pub fn mixed_cells(&self, eps: f64) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > eps && c < 1.0 - eps)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Cell-centered velocity components plus the face-normal values used for
/// fluxing. Face arrays have one extra layer along their own axis; the face
/// `fu[i + (nx+1)*(j + ny*k)]` sits between cells `i-1` and `i`.
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub fu: Vec<f64>,
    pub fv: Vec<f64>,
    pub fw: Vec<f64>,
}

impl VelocityField {
    pub fn zeros(grid: &Grid) -> VelocityField {
        let n = grid.ncells();
        VelocityField {
            u: vec![0.0; n],
            v: vec![0.0; n],
            w: vec![0.0; n],
            fu: vec![0.0; (grid.nx + 1) * grid.ny * grid.nz],
            fv: vec![0.0; grid.nx * (grid.ny + 1) * grid.nz],
            fw: vec![0.0; grid.nx * grid.ny * (grid.nz + 1)],
            grid: grid.clone(),
        }
    }

    #[inline]
    pub fn fidx(&self, axis: Axis, i: usize, j: usize, k: usize) -> usize {
        let g = &self.grid;
        match axis {
            Axis::X => i + (g.nx + 1) * (j + g.ny * k),
            Axis::Y => i + g.nx * (j + (g.ny + 1) * k),
            Axis::Z => i + g.nx * (j + g.ny * k),
        }
    }

    #[inline]
    pub fn face(&self, axis: Axis, i: usize, j: usize, k: usize) -> f64 {
        match axis {
            Axis::X => self.fu[self.fidx(axis, i, j, k)],
            Axis::Y => self.fv[self.fidx(axis, i, j, k)],
            Axis::Z => self.fw[self.fidx(axis, i, j, k)],
        }
    }

    #[inline]
    pub fn cell(&self, axis: Axis, idx: usize) -> f64 {
        match axis {
            Axis::X => self.u[idx],
            Axis::Y => self.v[idx],
            Axis::Z => self.w[idx],
        }
    }

    /// Fills the face arrays with the arithmetic mean of the two adjacent
    /// cell values. Boundary faces wrap on periodic axes and take the edge
    /// cell value on zero-Neumann axes.
    pub fn average_to_faces(&mut self) {
        let g = self.grid.clone();
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..=g.nx {
                    let f = self.fidx(Axis::X, i, j, k);
                    let a = self.u[g.idx(g.resolve(i as isize - 1, Axis::X), j, k)];
                    let b = self.u[g.idx(g.resolve(i as isize, Axis::X), j, k)];
                    self.fu[f] = 0.5 * (a + b);
                }
            }
        }
        for k in 0..g.nz {
            for j in 0..=g.ny {
                for i in 0..g.nx {
                    let f = self.fidx(Axis::Y, i, j, k);
                    let a = self.v[g.idx(i, g.resolve(j as isize - 1, Axis::Y), k)];
                    let b = self.v[g.idx(i, g.resolve(j as isize, Axis::Y), k)];
                    self.fv[f] = 0.5 * (a + b);
                }
            }
        }
        if !g.is_2d() {
            for k in 0..=g.nz {
                for j in 0..g.ny {
                    for i in 0..g.nx {
                        let f = self.fidx(Axis::Z, i, j, k);
                        let a = self.w[g.idx(i, j, g.resolve(k as isize - 1, Axis::Z))];
                        let b = self.w[g.idx(i, j, g.resolve(k as isize, Axis::Z))];
                        self.fw[f] = 0.5 * (a + b);
                    }
                }
            }
        }
    }

    /// Adds the cell-centered components of `other` into `self`.
    /// Face values are not touched; call `average_to_faces` afterwards.
    pub fn add_cell_centered(&mut self, other: &VelocityField) {
        assert_eq!(self.grid, other.grid, "velocity grids must match");
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            *a += b;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += b;
        }
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryKind;

    fn periodic_square(n: usize) -> Grid {
        let mut g = Grid::square_2d(n, 0.0, 1.0);
        g.bc = [BoundaryKind::Periodic; 3];
        g
    }

    #[test]
    fn ghost_wraps_periodic_and_mirrors_neumann() {
        let gp = periodic_square(4);
        let f = ColorField::from_fn(&gp, |i, _, _| i as f64);
        assert_eq!(f.ghost(-1, 0, 0), 3.0);
        assert_eq!(f.ghost(4, 0, 0), 0.0);

        let gn = Grid::square_2d(4, 0.0, 1.0);
        let f = ColorField::from_fn(&gn, |i, _, _| i as f64);
        assert_eq!(f.ghost(-1, 0, 0), 0.0);
        assert_eq!(f.ghost(5, 0, 0), 3.0);
        assert_eq!(f.ghost(2, 1, 0), 2.0);
    }

    #[test]
    fn total_volume_trivial_fields() {
        let g = Grid::cube_3d(4, 0.0, 1.0);
        assert_eq!(ColorField::zeros(&g).total_volume(), 0.0);
        let ones = ColorField::from_fn(&g, |_, _, _| 1.0);
        assert!((ones.total_volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_volume_is_linear() {
        let g = Grid::square_2d(8, 0.0, 1.0);
        let f1 = ColorField::from_fn(&g, |i, j, _| ((i * 7 + j * 3) % 10) as f64 / 20.0);
        let f2 = ColorField::from_fn(&g, |i, j, _| ((i + j * 5) % 9) as f64 / 18.0);
        let (a, b) = (0.3, 0.5);
        let combo = ColorField {
            grid: g.clone(),
            values: f1
                .values
                .iter()
                .zip(&f2.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        };
        let lhs = combo.total_volume();
        let rhs = a * f1.total_volume() + b * f2.total_volume();
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn gradient_of_constant_field_is_zero() {
        let g = Grid::cube_3d(4, 0.0, 1.0);
        let f = ColorField::from_fn(&g, |_, _, _| 0.37);
        let grad = f.gradient_cc();
        assert!(grad.u.iter().chain(&grad.v).chain(&grad.w).all(|&x| x == 0.0));
    }

    #[test]
    fn gradient_of_linear_field_is_exact_in_interior() {
        let g = Grid::square_2d(8, 0.0, 1.0);
        let f = ColorField::from_fn(&g, |i, _, _| g.cell_center(i, 0, 0)[0]);
        for j in 0..8 {
            for i in 1..7 {
                let (gx, gy, _) = f.gradient_at(i, j, 0);
                assert!((gx - 1.0).abs() < 1e-12, "gx = {gx}");
                assert_eq!(gy, 0.0);
            }
        }
    }

    #[test]
    fn face_average_matches_stencil() {
        let g = periodic_square(4);
        let mut vel = VelocityField::zeros(&g);
        for k in 0..1 {
            for j in 0..4 {
                for i in 0..4 {
                    vel.u[g.idx(i, j, k)] = i as f64;
                }
            }
        }
        vel.average_to_faces();
        // interior face between cells 1 and 2
        assert_eq!(vel.face(Axis::X, 2, 0, 0), 1.5);
        // periodic boundary face averages cells 3 and 0
        assert_eq!(vel.face(Axis::X, 0, 0, 0), 1.5);
    }
}
