use vvof::curvature::{compute_curvature, CurvatureOptions};
use vvof::*;

fn main() {
    for n in [48usize, 64, 128] {
        let g = Grid::cube_3d(n, 0.0, 1.0);
        let shape = ImplicitShape::Sphere { center: [0.5, 0.5, 0.5], radius: 0.25 };
        let f = voxelize(&shape, &g);
        let curv = compute_curvature(&f, &CurvatureOptions::default());
        let mut sum = 0.0;
        let mut cnt = 0;
        let mut errsum = 0.0;
        for i in 0..g.ncells() {
            if curv.valid[i] {
                sum += curv.kappa[i];
                errsum += (curv.kappa[i] * 0.25 - 2.0).abs();
                cnt += 1;
            }
        }
        println!(
            "n={n}: valid={cnt}, mean kappa={:.4} (exact 8), mean|kr-2|={:.4}",
            sum / cnt as f64,
            errsum / cnt as f64
        );
        if n == 48 {
            // sample a cell near the sphere top and dump heights by hand
            let k = (0.75 / g.dz) as usize;
            for kk in [k - 1, k, k + 1] {
                let i = n / 2;
                let j = n / 2;
                let c = f.get(i, j, kk);
                if c > 1e-10 && c < 1.0 - 1e-10 {
                    let m = youngs_normal(&f, i, j, kk);
                    println!(
                        "  top cell ({i},{j},{kk}): C={c:.4} m=({:.3},{:.3},{:.3}) kappa={:.4} valid={}",
                        m[0], m[1], m[2], curv.kappa[g.idx(i, j, kk)], curv.valid[g.idx(i, j, kk)]
                    );
                }
            }
        }
    }
}
