use vvof::curvature::{compute_curvature, CurvatureOptions};
use vvof::*;

fn main() {
    let g = Grid::cube_3d(50, 0.0, 1.0);
    let shape = ImplicitShape::Ellipsoid {
        center: [0.5, 0.5, 0.5],
        semi_axes: [0.35, 0.15625, 0.15625],
    };
    let f = voxelize(&shape, &g);
    let curv = compute_curvature(&f, &CurvatureOptions::default());
    let nmixed = curv.mixed.iter().filter(|&&m| m).count();
    let nvalid = curv.valid.iter().filter(|&&v| v).count();
    println!("mixed {nmixed}, valid {nvalid}");
    // kbar over valid only vs over all mixed (inherited included)
    let mut nv = 0.0;
    let mut dv = 0.0;
    let mut nm = 0.0;
    let mut dm = 0.0;
    for i in 0..g.ncells() {
        let c = f.values[i];
        let w = 4.0 * c * (1.0 - c);
        if curv.valid[i] {
            nv += curv.kappa[i] * w;
            dv += w;
        }
        if curv.mixed[i] {
            nm += curv.kappa[i] * w;
            dm += w;
        }
    }
    println!("kbar valid-only = {:.4}", nv / dv);
    println!("kbar all-mixed  = {:.4}", nm / dm);
    let (mut kmin, mut kmax) = (f64::MAX, f64::MIN);
    for i in 0..g.ncells() {
        if curv.valid[i] {
            kmin = kmin.min(curv.kappa[i]);
            kmax = kmax.max(curv.kappa[i]);
        }
    }
    println!("valid kappa range [{kmin:.2}, {kmax:.2}], kappa_dx_max={:.3}", curv.kappa_dx_max);
}
