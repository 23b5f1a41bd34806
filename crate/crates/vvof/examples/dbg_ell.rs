use vvof::cases::{builtin_case, run_case};

fn main() {
    for case in ["ellipsoid", "squircle"] {
        let mut cfg = builtin_case(case).unwrap();
        cfg.t_final = 10000.0 * cfg.dt;
        cfg.snapshots.clear();
        let t0 = std::time::Instant::now();
        let run = run_case(&cfg).unwrap();
        let d = &run.diagnostics;
        let mut worst: f64 = 0.0;
        for v in &d.volume_norm {
            worst = worst.max((v - 1.0).abs());
        }
        let n = d.len() - 1;
        println!(
            "{case}: {n} steps, V/V0 final={:.6}, max|V/V0-1|={:.4}, elapsed {:.0?}",
            d.volume_norm[n], worst, t0.elapsed()
        );
        for s in (0..d.len()).step_by(1000) {
            println!("   step {s:5} V/V0={:.6} kbar={:.3}", d.volume_norm[s], d.kappa_bar[s]);
        }
    }
}
