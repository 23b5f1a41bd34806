use vvof::*;
use vvof::curvature::{compute_curvature, CurvatureOptions};

fn main() {
    let g = Grid::square_2d(128, 0.0, 1.0);
    let shape = ImplicitShape::Sphere { center: [0.5, 0.5, 0.0], radius: 0.25 };
    let f = voxelize(&shape, &g);
    let curv = compute_curvature(&f, &CurvatureOptions::default());
    let mut worst = Vec::new();
    for idx in 0..g.ncells() {
        if curv.valid[idx] {
            let err = (curv.kappa[idx] * 0.25 - 1.0).abs();
            let (i, j, _) = g.coords(idx);
            worst.push((err, i, j, curv.kappa[idx], f.values[idx]));
        }
    }
    worst.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!("valid cells: {}", worst.len());
    println!("worst 12:");
    for w in worst.iter().take(12) {
        println!("  err={:.3} cell=({}, {}) kappa={:.3} C={:.6}", w.0, w.1, w.2, w.3, w.4);
    }
    let mean: f64 = worst.iter().map(|w| w.0).sum::<f64>() / worst.len() as f64;
    println!("mean err = {mean:.4}");
    // dump a neighborhood of the worst cell
    let (_, i, j, _, _) = worst[0];
    println!("C field near ({},{}):", i, j);
    for jj in (j.saturating_sub(3)..=(j + 3).min(127)).rev() {
        let row: Vec<String> = (i.saturating_sub(3)..=(i + 3).min(127))
            .map(|ii| format!("{:.4}", f.get(ii, jj, 0)))
            .collect();
        println!("  j={jj}: {}", row.join(" "));
    }
    let m = youngs_normal(&f, i, j, 0);
    println!("youngs normal at worst: {m:?}");
}
