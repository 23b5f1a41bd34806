use vvof::cases::{builtin_case, run_case};

fn main() {
    // short unconstrained star segment
    let mut cfg = builtin_case("pointed-star").unwrap();
    cfg.t_final = 100.0 * cfg.dt;
    cfg.snapshots.clear();
    let t0 = std::time::Instant::now();
    let run = run_case(&cfg).unwrap();
    let d = &run.diagnostics;
    let n = d.len() - 1;
    println!(
        "star: {} steps in {:.2?}; E0={:.4} E end={:.4}; V/V0={:.6}; maxCFL={:.3}; end={:?}",
        n, t0.elapsed(), d.energy[0], d.energy[n], d.volume_norm[n],
        d.cfl.iter().cloned().fold(0.0f64, f64::max),
        d.end_reason
    );
    let mono = d.energy.windows(2).filter(|w| w[1] > w[0] * 1.0001).count();
    println!("star: energy increases (>1e-4 rel) in {} of {} step pairs", mono, n);

    // short constrained ellipsoid segment at 50^3
    let mut cfg = builtin_case("ellipsoid").unwrap();
    cfg.t_final = 200.0 * cfg.dt;
    cfg.snapshots.clear();
    let t0 = std::time::Instant::now();
    let run = run_case(&cfg).unwrap();
    let d = &run.diagnostics;
    let n = d.len() - 1;
    let vmax = d.volume_norm.iter().cloned().fold(f64::MIN, f64::max);
    let vmin = d.volume_norm.iter().cloned().fold(f64::MAX, f64::min);
    println!(
        "ellipsoid: {} steps in {:.2?}; kbar last={:.3}; V/V0 in [{:.6},{:.6}]; maxCFL={:.3}",
        n, t0.elapsed(), d.kappa_bar[n], vmin, vmax,
        d.cfl.iter().cloned().fold(0.0f64, f64::max)
    );
}
