//! Quantitative diagnostics: field errors, convergence orders, iso-contour
//! extraction, circularity/sphericity, and connected-component counting.

use crate::error::{Result, VofError};
use crate::field::ColorField;
use crate::grid::{Axis, BoundaryKind};
use std::collections::HashMap;

/// Why a case loop ended.
#[derive(Debug, Clone, PartialEq)]
pub enum EndReason {
    Completed,
    InterfaceVanished { t: f64 },
    RadiusFloor { t: f64 },
    CflAbort { t: f64, cfl: f64 },
}

impl std::fmt::Display for EndReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndReason::Completed => write!(f, "completed"),
            EndReason::InterfaceVanished { t } => write!(f, "interface-vanished at t={t}"),
            EndReason::RadiusFloor { t } => write!(f, "radius-floor at t={t}"),
            EndReason::CflAbort { t, cfl } => write!(f, "cfl-abort at t={t} (cfl={cfl:.3})"),
        }
    }
}

/// Per-step scalar time series of a run. Vectors share one length; entry 0
/// is the initial state.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub t: Vec<f64>,
    pub volume: Vec<f64>,
    pub volume_norm: Vec<f64>,
    pub energy: Vec<f64>,
    pub kappa_bar: Vec<f64>,
    pub clipped_mass: Vec<f64>,
    pub wisps: Vec<u64>,
    pub cfl: Vec<f64>,
    /// Resolvability indicator `max |kappa| dx` per step (not serialized).
    pub kappa_dx_max: Vec<f64>,
    /// Connected-component counts sampled at a configured stride.
    pub components: Vec<(f64, usize)>,
    pub end_reason: Option<EndReason>,
}

impl Diagnostics {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Mean absolute cell difference between two fields on the same grid.
pub fn l1_error(a: &ColorField, b: &ColorField) -> Result<f64> {
    if a.grid != b.grid {
        return Err(VofError::GridMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.grid.nx, a.grid.ny, a.grid.nz, b.grid.nx, b.grid.ny, b.grid.nz
        )));
    }
    let sum: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(sum / a.grid.ncells() as f64)
}

/// Pairwise convergence orders from `(N, L1)` entries with doubling `N`.
///
/// Sign convention: positive means the error decreases under refinement
/// (`order = log2(L1_N / L1_2N)`).
pub fn convergence_order(errors: &[(usize, f64)]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(VofError::Config("need at least two (N, L1) entries".into()));
    }
    let mut orders = Vec::with_capacity(errors.len() - 1);
    for pair in errors.windows(2) {
        let (n0, e0) = pair[0];
        let (n1, e1) = pair[1];
        if n1 != 2 * n0 {
            return Err(VofError::Config(format!(
                "grid sizes must double: {n0} then {n1}"
            )));
        }
        orders.push((e0.ln() - e1.ln()) / std::f64::consts::LN_2);
    }
    Ok(orders)
}

/// A piecewise-linear contour component in the plane.
#[derive(Debug, Clone)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Polyline {
    pub fn perimeter(&self) -> f64 {
        let mut p = 0.0;
        let n = self.points.len();
        let last = if self.closed { n } else { n - 1 };
        for s in 0..last {
            let a = self.points[s];
            let b = self.points[(s + 1) % n];
            p += ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        }
        p
    }

    /// Signed area by the shoelace formula (closed polylines only).
    pub fn area(&self) -> f64 {
        let n = self.points.len();
        let mut a = 0.0;
        for s in 0..n {
            let p = self.points[s];
            let q = self.points[(s + 1) % n];
            a += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * a
    }
}

/// Marching-squares iso-contour of a 2D field at `level`, on the lattice of
/// cell centers with linear interpolation along lattice edges. Saddle cells
/// are disambiguated by comparing the cell average against the level.
pub fn extract_contour(field: &ColorField, level: f64) -> Vec<Polyline> {
    let g = &field.grid;
    assert!(g.is_2d(), "extract_contour expects a 2D field");
    let nx = g.nx;
    let ny = g.ny;
    let node = |i: usize, j: usize| field.values[g.idx(i, j, 0)];
    let node_pos = |i: usize, j: usize| {
        let c = g.cell_center(i, j, 0);
        [c[0], c[1]]
    };

    // lattice edge ids: horizontal edges then vertical edges
    let h_id = |i: usize, j: usize| i + (nx - 1) * j;
    let v_id = |i: usize, j: usize| (nx - 1) * ny + i + nx * j;

    let mut crossings: HashMap<usize, [f64; 2]> = HashMap::new();
    let mut links: HashMap<usize, Vec<usize>> = HashMap::new();

    type Edge = (usize, (usize, usize), (usize, usize));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let v = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)];
            let inside = [v[0] >= level, v[1] >= level, v[2] >= level, v[3] >= level];
            let code = inside
                .iter()
                .enumerate()
                .fold(0u8, |c, (b, &x)| c | ((x as u8) << b));
            if code == 0 || code == 15 {
                continue;
            }
            // edge order: bottom, right, top, left
            let edges: [Edge; 4] = [
                (h_id(i, j), (i, j), (i + 1, j)),
                (v_id(i + 1, j), (i + 1, j), (i + 1, j + 1)),
                (h_id(i, j + 1), (i, j + 1), (i + 1, j + 1)),
                (v_id(i, j), (i, j), (i, j + 1)),
            ];
            let mut seg = |ea: usize, eb: usize| {
                let mut cut = |e: usize| -> usize {
                    let (id, a, b) = edges[e];
                    crossings.entry(id).or_insert_with(|| {
                        let va = node(a.0, a.1);
                        let vb = node(b.0, b.1);
                        let pa = node_pos(a.0, a.1);
                        let pb = node_pos(b.0, b.1);
                        let t = (level - va) / (vb - va);
                        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
                    });
                    id
                };
                let ia = cut(ea);
                let ib = cut(eb);
                links.entry(ia).or_default().push(ib);
                links.entry(ib).or_default().push(ia);
            };
            match code {
                1 | 14 => seg(3, 0),
                2 | 13 => seg(0, 1),
                4 | 11 => seg(1, 2),
                8 | 7 => seg(2, 3),
                3 | 12 => seg(3, 1),
                6 | 9 => seg(0, 2),
                5 | 10 => {
                    // saddle: resolve by the cell average
                    let avg = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    let center_inside = avg >= level;
                    let corners_1_3 = code == 5;
                    if corners_1_3 == center_inside {
                        seg(3, 2);
                        seg(0, 1);
                    } else {
                        seg(3, 0);
                        seg(1, 2);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    stitch(&crossings, &links)
}

fn stitch(
    crossings: &HashMap<usize, [f64; 2]>,
    links: &HashMap<usize, Vec<usize>>,
) -> Vec<Polyline> {
    let mut visited: HashMap<usize, bool> = HashMap::new();
    let mut out = Vec::new();
    // a deterministic traversal order
    let mut ids: Vec<usize> = crossings.keys().copied().collect();
    ids.sort_unstable();

    // open chains first (endpoints have a single link)
    for start_open in [true, false] {
        for &start in &ids {
            if visited.get(&start).copied().unwrap_or(false) {
                continue;
            }
            let deg = links.get(&start).map_or(0, |l| l.len());
            if start_open != (deg == 1) {
                continue;
            }
            let mut chain = vec![start];
            visited.insert(start, true);
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = links
                    .get(&cur)
                    .and_then(|ls| {
                        ls.iter()
                            .find(|&&n| n != prev && !visited.get(&n).copied().unwrap_or(false))
                    })
                    .copied();
                match next {
                    Some(n) => {
                        visited.insert(n, true);
                        chain.push(n);
                        prev = cur;
                        cur = n;
                    }
                    None => break,
                }
            }
            let closed = links
                .get(&cur)
                .map_or(false, |ls| ls.contains(&start) && chain.len() > 2);
            out.push(Polyline {
                points: chain.iter().map(|id| crossings[id]).collect(),
                closed,
            });
        }
    }
    out
}

/// Circularity `perimeter^2 / (4 pi area)` of the largest closed contour
/// component: 1 for a perfect circle, larger otherwise.
pub fn circularity(contours: &[Polyline]) -> Result<f64> {
    let best = contours
        .iter()
        .filter(|p| p.closed)
        .max_by(|a, b| a.area().abs().partial_cmp(&b.area().abs()).unwrap());
    match best {
        Some(p) => {
            let per = p.perimeter();
            let area = p.area().abs();
            Ok(per * per / (4.0 * std::f64::consts::PI * area))
        }
        None => Err(VofError::OpenContour),
    }
}

/// Number of connected components of `{C > threshold}` under face
/// connectivity (4 in 2D, 6 in 3D), honoring periodic wrap.
pub fn connected_components(field: &ColorField, threshold: f64) -> usize {
    let g = &field.grid;
    let n = g.ncells();
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] || field.values[start] <= threshold {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
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
                if outside {
                    continue;
                }
                let nidx = g.idx(
                    g.resolve(ni, Axis::X),
                    g.resolve(nj, Axis::Y),
                    g.resolve(nk, Axis::Z),
                );
                if !seen[nidx] && field.values[nidx] > threshold {
                    seen[nidx] = true;
                    stack.push(nidx);
                }
            }
        }
    }
    count
}

/// Triangulated iso-surface of a 3D field.
#[derive(Debug, Clone, Default)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriMesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = [
                    self.vertices[t[0] as usize],
                    self.vertices[t[1] as usize],
                    self.vertices[t[2] as usize],
                ];
                let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                let cx = u[1] * v[2] - u[2] * v[1];
                let cy = u[2] * v[0] - u[0] * v[2];
                let cz = u[0] * v[1] - u[1] * v[0];
                0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
            })
            .sum()
    }

    /// Volume enclosed by the (consistently oriented) surface.
    pub fn enclosed_volume(&self) -> f64 {
        let v: f64 = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = [
                    self.vertices[t[0] as usize],
                    self.vertices[t[1] as usize],
                    self.vertices[t[2] as usize],
                ];
                (a[0] * (b[1] * c[2] - b[2] * c[1])
                    - a[1] * (b[0] * c[2] - b[2] * c[0])
                    + a[2] * (b[0] * c[1] - b[1] * c[0]))
                    / 6.0
            })
            .sum();
        v.abs()
    }

    /// Number of connected surface components (shared-vertex connectivity).
    pub fn component_count(&self) -> usize {
        if self.triangles.is_empty() {
            return 0;
        }
        let n = self.vertices.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for t in &self.triangles {
            let a = find(&mut parent, t[0]);
            let b = find(&mut parent, t[1]);
            let c = find(&mut parent, t[2]);
            parent[b as usize] = a;
            parent[c as usize] = a;
        }
        let mut used = vec![false; n];
        for t in &self.triangles {
            for &v in t {
                used[v as usize] = true;
            }
        }
        let mut roots = std::collections::HashSet::new();
        for v in 0..n as u32 {
            if used[v as usize] {
                roots.insert(find(&mut parent, v));
            }
        }
        roots.len()
    }

    /// Sphericity `pi^(1/3) (6 V)^(2/3) / A`; 1 for a perfect sphere.
    pub fn sphericity(&self) -> f64 {
        let v = self.enclosed_volume();
        let a = self.area();
        std::f64::consts::PI.powf(1.0 / 3.0) * (6.0 * v).powf(2.0 / 3.0) / a
    }
}

/// Iso-surface extraction by marching tetrahedra on the Kuhn subdivision of
/// each lattice cube (table-free and crack-free; vertices welded on shared
/// lattice edges).
pub fn extract_surface(field: &ColorField, level: f64) -> TriMesh {
    let g = &field.grid;
    assert!(!g.is_2d(), "extract_surface expects a 3D field");
    let (nx, ny, nz) = (g.nx, g.ny, g.nz);
    let node_id = |i: usize, j: usize, k: usize| -> u64 {
        (i + nx * (j + ny * k)) as u64
    };
    let node_val = |i: usize, j: usize, k: usize| field.values[g.idx(i, j, k)];
    let node_pos = |i: usize, j: usize, k: usize| g.cell_center(i, j, k);

    // Kuhn simplices: paths from the low corner to the high corner of each
    // cube, one axis at a time, in each of the six axis orders.
    const PATHS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];

    let mut mesh = TriMesh::default();
    let mut edge_verts: HashMap<(u64, u64), u32> = HashMap::new();

    let mut vertex_on_edge = |mesh: &mut TriMesh,
                              edge_verts: &mut HashMap<(u64, u64), u32>,
                              a: (usize, usize, usize),
                              b: (usize, usize, usize)|
     -> u32 {
        let ia = node_id(a.0, a.1, a.2);
        let ib = node_id(b.0, b.1, b.2);
        let key = if ia < ib { (ia, ib) } else { (ib, ia) };
        if let Some(&v) = edge_verts.get(&key) {
            return v;
        }
        let va = node_val(a.0, a.1, a.2);
        let vb = node_val(b.0, b.1, b.2);
        let t = (level - va) / (vb - va);
        let pa = node_pos(a.0, a.1, a.2);
        let pb = node_pos(b.0, b.1, b.2);
        let p = [
            pa[0] + t * (pb[0] - pa[0]),
            pa[1] + t * (pb[1] - pa[1]),
            pa[2] + t * (pb[2] - pa[2]),
        ];
        let id = mesh.vertices.len() as u32;
        mesh.vertices.push(p);
        edge_verts.insert(key, id);
        id
    };

    for k in 0..nz - 1 {
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                // skip cubes without a crossing
                let mut any_in = false;
                let mut any_out = false;
                for dk in 0..2 {
                    for dj in 0..2 {
                        for di in 0..2 {
                            if node_val(i + di, j + dj, k + dk) >= level {
                                any_in = true;
                            } else {
                                any_out = true;
                            }
                        }
                    }
                }
                if !(any_in && any_out) {
                    continue;
                }
                for path in PATHS {
                    let mut corners = [(i, j, k); 4];
                    let mut cur = [i, j, k];
                    for (step, &axis) in path.iter().enumerate() {
                        cur[axis] += 1;
                        corners[step + 1] = (cur[0], cur[1], cur[2]);
                    }
                    march_tet(
                        &mut mesh,
                        &mut edge_verts,
                        &mut vertex_on_edge,
                        corners,
                        [g.dx, g.dy, g.dz],
                        |c| node_val(c.0, c.1, c.2),
                        level,
                    );
                }
            }
        }
    }
    mesh
}

fn march_tet(
    mesh: &mut TriMesh,
    edge_verts: &mut HashMap<(u64, u64), u32>,
    vertex_on_edge: &mut impl FnMut(
        &mut TriMesh,
        &mut HashMap<(u64, u64), u32>,
        (usize, usize, usize),
        (usize, usize, usize),
    ) -> u32,
    corners: [(usize, usize, usize); 4],
    spacing: [f64; 3],
    val: impl Fn((usize, usize, usize)) -> f64,
    level: f64,
) {
    let inside: Vec<usize> = (0..4).filter(|&c| val(corners[c]) >= level).collect();
    let outside: Vec<usize> = (0..4).filter(|&c| val(corners[c]) < level).collect();
    let pos = |c: (usize, usize, usize)| -> [f64; 3] {
        [c.0 as f64 * spacing[0], c.1 as f64 * spacing[1], c.2 as f64 * spacing[2]]
    };
    // outward reference direction: from the inside centroid to the outside
    // centroid
    let centroid = |ids: &[usize]| -> [f64; 3] {
        let mut c = [0.0; 3];
        for &i in ids {
            let p = pos(corners[i]);
            c[0] += p[0];
            c[1] += p[1];
            c[2] += p[2];
        }
        let n = ids.len() as f64;
        [c[0] / n, c[1] / n, c[2] / n]
    };
    let mut push_oriented = |mesh: &mut TriMesh, tri: [u32; 3], outward: [f64; 3]| {
        let [a, b, c] = [
            mesh.vertices[tri[0] as usize],
            mesh.vertices[tri[1] as usize],
            mesh.vertices[tri[2] as usize],
        ];
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        if n[0] * outward[0] + n[1] * outward[1] + n[2] * outward[2] >= 0.0 {
            mesh.triangles.push(tri);
        } else {
            mesh.triangles.push([tri[0], tri[2], tri[1]]);
        }
    };
    if inside.is_empty() || outside.is_empty() {
        return;
    }
    let ci = centroid(&inside);
    let co = centroid(&outside);
    let outward = [co[0] - ci[0], co[1] - ci[1], co[2] - ci[2]];
    match inside.len() {
        1 => {
            let a = inside[0];
            let vs: Vec<u32> = outside
                .iter()
                .map(|&o| vertex_on_edge(mesh, edge_verts, corners[a], corners[o]))
                .collect();
            push_oriented(mesh, [vs[0], vs[1], vs[2]], outward);
        }
        3 => {
            let a = outside[0];
            let vs: Vec<u32> = inside
                .iter()
                .map(|&o| vertex_on_edge(mesh, edge_verts, corners[a], corners[o]))
                .collect();
            push_oriented(mesh, [vs[0], vs[1], vs[2]], outward);
        }
        2 => {
            let (a, b) = (inside[0], inside[1]);
            let (c, d) = (outside[0], outside[1]);
            let vac = vertex_on_edge(mesh, edge_verts, corners[a], corners[c]);
            let vad = vertex_on_edge(mesh, edge_verts, corners[a], corners[d]);
            let vbc = vertex_on_edge(mesh, edge_verts, corners[b], corners[c]);
            let vbd = vertex_on_edge(mesh, edge_verts, corners[b], corners[d]);
            push_oriented(mesh, [vac, vad, vbd], outward);
            push_oriented(mesh, [vac, vbd, vbc], outward);
        }
        _ => unreachable!(),
    }
}
