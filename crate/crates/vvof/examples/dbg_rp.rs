use vvof::cases::{builtin_case, run_case};

fn main() {
    let mut cfg = builtin_case("rp-collapse").unwrap();
    cfg.grid = [50, 50, 50];
    cfg.dt = 5e-4;
    cfg.snapshots.clear();
    let t0 = std::time::Instant::now();
    let run = run_case(&cfg).unwrap();
    let d = &run.diagnostics;
    let domain_v = 4.0f64.powi(3);
    let dx = run.grid.dx;
    let mut worst: f64 = 0.0;
    for (row, s) in run.rp_reference.iter().enumerate() {
        let row = row + 1;
        if row >= d.len() {
            break;
        }
        let void = domain_v - d.volume[row];
        let r_eq = (3.0 * void / (4.0 * std::f64::consts::PI)).powf(1.0 / 3.0);
        let rel = (r_eq - s.r).abs() / s.r;
        if s.r >= 4.0 * dx {
            worst = worst.max(rel);
        }
        if row % 300 == 0 || row + 1 == d.len() {
            println!("t={:.4} R_ref={:.4} R_eq={:.4} rel={:.4}", s.t, s.r, r_eq, rel);
        }
    }
    println!("worst rel err while R>4dx: {:.4}; end {:?}; elapsed {:.1?}",
        worst, d.end_reason, t0.elapsed());
}
