//! Reference geometry for validating the analytic plane/volume relations:
//! exact half-space volumes of the unit cube via tetrahedral clipping.
//! Independent of the solver's branch formulas by construction.

pub type Tet = [[f64; 3]; 4];

pub fn tet_volume(t: &Tet) -> f64 {
    let u = sub(t[1], t[0]);
    let v = sub(t[2], t[0]);
    let w = sub(t[3], t[0]);
    (dot(u, cross(v, w)) / 6.0).abs()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn lerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

/// Clips a tetrahedron against `f(x) <= 0`, returning the kept region as
/// sub-tetrahedra. `f` must be affine.
pub fn clip_tet(t: &Tet, f: &dyn Fn([f64; 3]) -> f64) -> Vec<Tet> {
    let d: Vec<f64> = t.iter().map(|&p| f(p)).collect();
    let inside: Vec<usize> = (0..4).filter(|&i| d[i] <= 0.0).collect();
    let outside: Vec<usize> = (0..4).filter(|&i| d[i] > 0.0).collect();
    let x = |a: usize, b: usize| -> [f64; 3] {
        let t_ab = d[a] / (d[a] - d[b]);
        lerp(t[a], t[b], t_ab)
    };
    match inside.len() {
        0 => vec![],
        4 => vec![*t],
        1 => {
            let a = inside[0];
            let [o1, o2, o3] = [outside[0], outside[1], outside[2]];
            vec![[t[a], x(a, o1), x(a, o2), x(a, o3)]]
        }
        3 => {
            // prism between the inside face and the cut plane
            let [a, b, c] = [inside[0], inside[1], inside[2]];
            let o = outside[0];
            let (xa, xb, xc) = (x(a, o), x(b, o), x(c, o));
            vec![
                [t[a], t[b], t[c], xc],
                [t[a], t[b], xb, xc],
                [t[a], xa, xb, xc],
            ]
        }
        2 => {
            // wedge with triangular ends (Pa, Xac, Xad) and (Pb, Xbc, Xbd)
            let [a, b] = [inside[0], inside[1]];
            let [c, dd] = [outside[0], outside[1]];
            let (xac, xad, xbc, xbd) = (x(a, c), x(a, dd), x(b, c), x(b, dd));
            vec![
                [t[a], xac, xad, xbd],
                [t[a], xac, xbd, xbc],
                [t[a], xbc, xbd, t[b]],
            ]
        }
        _ => unreachable!(),
    }
}

/// Kuhn decomposition of the unit cube into six tetrahedra.
pub fn unit_cube_tets() -> Vec<Tet> {
    const PATHS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PATHS
        .iter()
        .map(|path| {
            let mut corners = [[0.0; 3]; 4];
            let mut cur = [0.0; 3];
            for (step, &axis) in path.iter().enumerate() {
                cur[axis] = 1.0;
                corners[step + 1] = cur;
            }
            corners
        })
        .collect()
}

/// Exact volume of `{x in unit cube : m . x <= beta}`.
pub fn halfspace_cube_volume(m: [f64; 3], beta: f64) -> f64 {
    let f = |p: [f64; 3]| m[0] * p[0] + m[1] * p[1] + m[2] * p[2] - beta;
    unit_cube_tets()
        .iter()
        .flat_map(|t| clip_tet(t, &f))
        .map(|t| tet_volume(&t))
        .sum()
}

/// Exact volume of the same region restricted to `x0 <= x_axis <= x1`.
pub fn slab_halfspace_cube_volume(m: [f64; 3], beta: f64, x0: f64, x1: f64, axis: usize) -> f64 {
    let plane = move |p: [f64; 3]| m[0] * p[0] + m[1] * p[1] + m[2] * p[2] - beta;
    let lo = move |p: [f64; 3]| x0 - p[axis];
    let hi = move |p: [f64; 3]| p[axis] - x1;
    let mut tets = unit_cube_tets();
    for f in [&plane as &dyn Fn([f64; 3]) -> f64, &lo, &hi] {
        tets = tets.iter().flat_map(|t| clip_tet(t, f)).collect();
    }
    tets.iter().map(tet_volume).sum()
}

/// Deterministic xorshift generator for reproducible sampling.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> XorShift {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-1, 1).
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }
}
