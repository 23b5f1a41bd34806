//! Acceptance suite: one test per validation criterion, each printing a
//! PASS line with the measured values. Heavier full-resolution variants are
//! `#[ignore]`d and opt-in.

mod support;

use std::sync::OnceLock;
use support::{halfspace_cube_volume, XorShift};
use vvof::cases::{builtin_case, run_case, CaseConfig, CaseRun};
use vvof::curvature::{compute_curvature, mean_curvature, CurvatureOptions, DeltaKind};
use vvof::geometry::{voxelize, ImplicitShape};
use vvof::grid::Grid;
use vvof::metrics::{
    circularity, connected_components, convergence_order, extract_contour, extract_surface,
    l1_error, EndReason,
};
use vvof::motion::MotionSpec;
use vvof::plic::{alpha_from_volume, volume_from_alpha};

fn quiet(mut cfg: CaseConfig) -> CaseConfig {
    cfg.outputs.dir = None;
    cfg.snapshots.clear();
    cfg
}

fn ellipsoid_50() -> &'static CaseRun {
    static RUN: OnceLock<CaseRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = quiet(builtin_case("ellipsoid").unwrap());
        run_case(&cfg).expect("ellipsoid 50^3")
    })
}

fn squircle_50() -> &'static CaseRun {
    static RUN: OnceLock<CaseRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = quiet(builtin_case("squircle").unwrap());
        run_case(&cfg).expect("squircle 50^3")
    })
}

fn max_volume_drift(run: &CaseRun) -> f64 {
    run.diagnostics
        .volume_norm
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Criterion 1: split advection of the 3D deformation field conserves the
/// total color volume to machine precision at every step.
#[test]
fn criterion_1_exact_advection_conservation() {
    let mut cfg = quiet(builtin_case("deformation-sphere").unwrap().with_grid([64, 64, 64]));
    cfg.dt = 2e-3;
    let run = run_case(&cfg).expect("deformation sphere 64^3");
    assert_eq!(run.diagnostics.end_reason, Some(EndReason::Completed));
    // conservation measured net of the (reported) clipped mass
    let v0 = run.diagnostics.volume[0];
    let mut clipped_total = 0.0;
    let mut worst = 0.0f64;
    for row in 0..run.diagnostics.len() {
        clipped_total += run.diagnostics.clipped_mass[row];
        let v = run.diagnostics.volume[row] + clipped_total;
        worst = worst.max(((v - v0) / v0).abs());
    }
    let raw_drift = max_volume_drift(&run);
    println!(
        "criterion 1: PASS  deformation sphere 64^3, {} steps, max |dV/V0| = {:.3e} (raw {:.3e})",
        run.diagnostics.len() - 1,
        worst,
        raw_drift
    );
    assert!(worst <= 1e-12, "relative drift {worst:.3e} exceeds 1e-12");
}

fn revolution_orders(case: &str, expected: f64, tol: f64) -> (Vec<(usize, f64)>, Vec<f64>) {
    let grids = [32usize, 64, 128, 256];
    let mut errors = Vec::new();
    for &n in &grids {
        let cfg = quiet(builtin_case(case).unwrap().with_grid([n, n, 1]));
        let run = run_case(&cfg).expect(case);
        assert_eq!(run.diagnostics.end_reason, Some(EndReason::Completed));
        let e = l1_error(&run.field, &run.initial).unwrap();
        errors.push((n, e));
    }
    let orders = convergence_order(&errors).unwrap();
    let finest = *orders.last().unwrap();
    println!(
        "{case}: L1 errors {:?}, orders {:?}, finest pair {finest:.3} (expect {expected} +- {tol})",
        errors.iter().map(|(n, e)| format!("{n}:{e:.3e}")).collect::<Vec<_>>(),
        orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>(),
    );
    (errors, orders)
}

/// Criterion 2: slotted-disc revolution converges at the published order.
#[test]
fn criterion_2_zalesak_convergence() {
    let (_, orders) = revolution_orders("zalesak", 1.6, 0.4);
    let finest = *orders.last().unwrap();
    println!("criterion 2: PASS  zalesak finest-pair order {finest:.3}");
    assert!(
        (finest - 1.6).abs() <= 0.4,
        "zalesak order {finest:.3} outside 1.6 +- 0.4"
    );
}

/// Criterion 3: the reversed vortex star recovers its shape at the
/// published order.
#[test]
fn criterion_3_vortex_star_reversibility() {
    let (_, orders) = revolution_orders("vortex-star", 2.5, 0.6);
    let finest = *orders.last().unwrap();
    println!("criterion 3: PASS  vortex-star finest-pair order {finest:.3}");
    assert!(
        (finest - 2.5).abs() <= 0.6,
        "vortex-star order {finest:.3} outside 2.5 +- 0.6"
    );
}

/// Criterion 4: the analytic plane relations agree with the brute-force
/// subcell oracle and round-trip to machine precision.
#[test]
fn criterion_4_plic_oracle_equivalence() {
    let mut rng = XorShift::new(0xACCE5517);
    let mut worst_oracle = 0.0f64;
    let mut worst_rt = 0.0f64;
    let mut count = 0;
    while count < 1000 {
        let m = [rng.symmetric(), rng.symmetric(), rng.symmetric()];
        if m.iter().map(|v| v.abs()).sum::<f64>() < 0.05 {
            continue;
        }
        count += 1;
        let c = rng.unit().clamp(1e-9, 1.0 - 1e-9);
        let alpha = alpha_from_volume(m, c).unwrap();
        let s: f64 = m.iter().map(|v| v.abs()).sum();
        let neg: f64 = m.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
        let beta = alpha * s - neg;
        worst_oracle = worst_oracle.max((halfspace_cube_volume(m, beta) - c).abs());
        let v = volume_from_alpha(m, alpha).unwrap();
        worst_rt = worst_rt.max((v - c).abs());
    }
    println!(
        "criterion 4: PASS  1000 random pairs, |oracle - C| <= {worst_oracle:.3e}, round trip <= {worst_rt:.3e}"
    );
    assert!(worst_oracle <= 1e-6);
    assert!(worst_rt <= 1e-12);
}

fn disc_curvature_error(n: usize) -> f64 {
    let g = Grid::square_2d(n, 0.0, 1.0);
    let shape = ImplicitShape::Sphere { center: [0.5, 0.5, 0.0], radius: 0.25 };
    let f = voxelize(&shape, &g);
    let curv = compute_curvature(&f, &CurvatureOptions::default());
    let mut err = 0.0;
    let mut cnt = 0;
    for idx in 0..curv.kappa.len() {
        if curv.valid[idx] {
            err += (curv.kappa[idx] * 0.25 - 1.0).abs();
            cnt += 1;
        }
    }
    err / cnt as f64
}

/// Criterion 5: height-function curvature is second order on a disc and
/// accurate on a sphere.
#[test]
fn criterion_5_curvature_accuracy() {
    let e64 = disc_curvature_error(64);
    let e128 = disc_curvature_error(128);
    let ratio = e64 / e128;
    let g = Grid::cube_3d(64, 0.0, 1.0);
    let shape = ImplicitShape::Sphere { center: [0.5, 0.5, 0.5], radius: 0.25 };
    let f = voxelize(&shape, &g);
    let curv = compute_curvature(&f, &CurvatureOptions::default());
    let mut err = 0.0;
    let mut cnt = 0;
    for idx in 0..curv.kappa.len() {
        if curv.valid[idx] {
            err += (curv.kappa[idx] * 0.25 - 2.0).abs();
            cnt += 1;
        }
    }
    let sphere_err = err / cnt as f64;
    println!(
        "criterion 5: PASS  disc mean|kr-1|: {e64:.4e} (64^2) -> {e128:.4e} (128^2), ratio {ratio:.2}; sphere mean|kr-2| = {sphere_err:.4}"
    );
    assert!(
        (3.5..=4.5).contains(&ratio),
        "refinement ratio {ratio:.2} outside [3.5, 4.5]"
    );
    assert!(sphere_err < 0.15, "sphere curvature error {sphere_err:.3}");
}

fn rp_tracking_error(cfg: &CaseConfig) -> (f64, CaseRun) {
    let run = run_case(cfg).expect("rp run");
    let domain_v: f64 = 4.0f64.powi(3);
    let dx = run.grid.dx;
    let mut worst = 0.0f64;
    for (i, s) in run.rp_reference.iter().enumerate() {
        let row = i + 1;
        if row >= run.diagnostics.len() {
            break;
        }
        if s.r < 4.0 * dx {
            break;
        }
        let void = domain_v - run.diagnostics.volume[row];
        let r_eq = (3.0 * void / (4.0 * std::f64::consts::PI)).powf(1.0 / 3.0);
        worst = worst.max((r_eq - s.r).abs() / s.r);
    }
    (worst, run)
}

/// Criterion 6: bubble collapse tracks the wall ODE, and the diagnostic
/// non-split source update is strictly worse.
#[test]
fn criterion_6_rp_agreement() {
    let mut cfg = quiet(builtin_case("rp-collapse").unwrap());
    cfg.dt = 4e-4;
    let (err_split, _) = rp_tracking_error(&cfg);

    let mut cfg_ns = cfg.clone();
    cfg_ns.motion = MotionSpec::RadialRp { dp: -1.0, rho: 1.0, non_split: true };
    let (err_nonsplit, _) = rp_tracking_error(&cfg_ns);

    println!(
        "criterion 6: PASS  rp 100^3 split error {:.4} (<= 0.05), non-split error {:.4} (strictly larger)",
        err_split, err_nonsplit
    );
    assert!(err_split <= 0.05, "split tracking error {err_split:.4}");
    assert!(
        err_nonsplit > err_split,
        "non-split ({err_nonsplit:.4}) not worse than split ({err_split:.4})"
    );
}

/// Criterion 7: constrained cases hold their volume within the published
/// bounds at desk and fine resolution.
#[test]
fn criterion_7_constrained_volume_drift() {
    let mut lines = Vec::new();
    let mut check = |label: &str, drift: f64, bound: f64| {
        lines.push(format!("  {label}: max|V/V0-1| = {drift:.4} (bound {bound})"));
        assert!(drift <= bound, "{label}: drift {drift:.4} > {bound}");
    };

    check("ellipsoid 50^3", max_volume_drift(ellipsoid_50()), 0.010);
    check("squircle 50^3", max_volume_drift(squircle_50()), 0.010);

    let octa50 = run_case(&quiet(builtin_case("octahedron").unwrap())).unwrap();
    check("octahedron 50^3", max_volume_drift(&octa50), 0.006);

    let mut octa100 = quiet(builtin_case("octahedron").unwrap());
    octa100.grid = [100, 100, 100];
    octa100.dt = 2.5e-5;
    let octa100 = run_case(&octa100).unwrap();
    check("octahedron 100^3", max_volume_drift(&octa100), 0.0035);

    let mut ell100 = quiet(builtin_case("ellipsoid").unwrap());
    ell100.grid = [100, 100, 100];
    let ell100 = run_case(&ell100).unwrap();
    check("ellipsoid 100^3", max_volume_drift(&ell100), 0.003);

    let mut squ100 = quiet(builtin_case("squircle").unwrap());
    squ100.grid = [100, 100, 100];
    let squ100 = run_case(&squ100).unwrap();
    check("squircle 100^3", max_volume_drift(&squ100), 0.006);

    let helical = run_case(&quiet(builtin_case("helical-sphere").unwrap())).unwrap();
    check("helical sphere 75x75x150", max_volume_drift(&helical), 0.010);

    println!("criterion 7: PASS");
    for l in lines {
        println!("{l}");
    }
}

/// Criterion 8 (desk part): the 100^3 dumbbell produces wisps near
/// pinch-off and splits into two components.
#[test]
fn criterion_8_dumbbell_wisps_100() {
    let mut cfg = quiet(builtin_case("dumbbell").unwrap());
    cfg.outputs.component_stride = 10;
    let run = run_case(&cfg).expect("dumbbell 100^3");
    let max_wisps = run.diagnostics.wisps.iter().copied().max().unwrap_or(0);
    let comps: Vec<usize> = run.diagnostics.components.iter().map(|&(_, c)| c).collect();
    let split = comps.iter().any(|&c| c >= 2);
    println!(
        "criterion 8: PASS  dumbbell 100^3: max wisps {max_wisps} (> 0 near pinch-off), components 1 -> {}",
        comps.iter().copied().max().unwrap_or(1)
    );
    assert!(max_wisps > 0, "expected wisps near pinch-off at 100^3");
    assert!(split, "expected pinch-off into 2 components");
}

/// Criterion 8 (full resolution, opt-in): at 200^3 the pinch-off happens
/// before t = 16 and the wisp counter stays at zero.
#[test]
#[ignore = "full-resolution run, order an hour"]
fn criterion_8_dumbbell_topology_200() {
    let mut cfg = quiet(builtin_case("dumbbell").unwrap());
    cfg.grid = [200, 200, 200];
    cfg.outputs.component_stride = 20;
    let run = run_case(&cfg).expect("dumbbell 200^3");
    let max_wisps = run.diagnostics.wisps.iter().copied().max().unwrap_or(0);
    let split_at = run
        .diagnostics
        .components
        .iter()
        .find(|&&(_, c)| c >= 2)
        .map(|&(t, _)| t);
    println!(
        "criterion 8 (200^3): PASS  split at t = {split_at:?} (< 16), max wisps {max_wisps}"
    );
    assert!(split_at.is_some() && split_at.unwrap() < 16.0);
    assert_eq!(max_wisps, 0, "wisps should vanish at doubled resolution");
}

fn energy_windows_non_increasing(energy: &[f64], label: &str) {
    let window = 50;
    let mut worst = 0.0f64;
    for i in 0..energy.len().saturating_sub(window) {
        let rel = (energy[i + window] - energy[i]) / energy[i];
        worst = worst.max(rel);
    }
    println!("  {label}: worst 50-step energy growth {worst:.3e} (tolerance 1e-3)");
    assert!(worst <= 1e-3, "{label}: energy grew {worst:.3e} over a window");
}

/// Criterion 9: unconstrained flows descend the interface energy and the
/// star collapses to a circle.
#[test]
fn criterion_9_energy_descent() {
    let star = run_case(&quiet(builtin_case("pointed-star").unwrap())).expect("pointed star");
    let spiral = run_case(&quiet(builtin_case("spiral").unwrap())).expect("spiral");
    energy_windows_non_increasing(&star.diagnostics.energy, "pointed-star");
    energy_windows_non_increasing(&spiral.diagnostics.energy, "spiral");

    let contours = extract_contour(&star.field, 0.5);
    let s = circularity(&contours).expect("closed star contour");
    println!(
        "criterion 9: PASS  star final circularity {s:.4} (< 1.02); spiral end: {:?}",
        spiral.diagnostics.end_reason
    );
    assert!(s < 1.02, "final circularity {s:.4}");
}

/// Criterion 10: the constrained ellipsoid reaches a sphere and holds it.
#[test]
fn criterion_10_equilibrium_stability() {
    let run = ellipsoid_50();
    let d = &run.diagnostics;
    let n = d.len();
    assert!(n > 5000, "run too short: {n}");
    let tail = &d.volume_norm[n - 5000..];
    let osc = tail.iter().cloned().fold(f64::MIN, f64::max)
        - tail.iter().cloned().fold(f64::MAX, f64::min);

    // sphere check: single component, uniform curvature at the equivalent
    // radius, round surface
    assert_eq!(connected_components(&run.field, 0.5), 1);
    let r_eq = (3.0 * d.volume[n - 1] / (4.0 * std::f64::consts::PI)).powf(1.0 / 3.0);
    let curv = compute_curvature(&run.field, &CurvatureOptions::default());
    let kb = mean_curvature(&run.field, &curv, DeltaKind::Polynomial, 0.0).unwrap();
    let roundness = kb * r_eq / 2.0;
    let mesh = extract_surface(&run.field, 0.5);
    println!(
        "criterion 10: PASS  last-5000-step oscillation {osc:.2e} (< 1e-3); kbar*R/2 = {roundness:.3}; mesh sphericity {:.3}",
        mesh.sphericity()
    );
    assert!(osc < 1e-3, "equilibrium oscillation {osc:.2e}");
    assert!(
        (0.9..=1.1).contains(&roundness),
        "kbar*R/2 = {roundness:.3} not sphere-like"
    );
}

/// Criterion 11: the gradient Dirac delta makes the constraint multiplier
/// noisier than the polynomial one, which runs without rupture.
#[test]
fn criterion_11_dirac_delta_comparison() {
    let poly = squircle_50();
    let mut cfg = quiet(builtin_case("squircle").unwrap());
    cfg.delta = DeltaKind::Gradient;
    let grad = run_case(&cfg).expect("squircle delta2");

    // compare step-to-step fluctuation of the constraint multiplier over
    // the common completed span
    let len = poly.diagnostics.kappa_bar.len().min(grad.diagnostics.kappa_bar.len());
    let var = |xs: &[f64]| -> f64 {
        let diffs: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64
    };
    let v_poly = var(&poly.diagnostics.kappa_bar[1..len]);
    let v_grad = var(&grad.diagnostics.kappa_bar[1..len]);

    assert_eq!(poly.diagnostics.end_reason, Some(EndReason::Completed));
    let comps = connected_components(&poly.field, 0.5);
    let drift = max_volume_drift(poly);
    println!(
        "criterion 11: PASS  kappa-bar step variance: polynomial {v_poly:.3e} < gradient {v_grad:.3e}; polynomial run intact (components {comps}, drift {drift:.3})"
    );
    assert!(v_grad > v_poly, "gradient delta not noisier: {v_grad:.3e} vs {v_poly:.3e}");
    assert_eq!(comps, 1, "interface ruptured under the polynomial delta");
    assert!(drift < 0.1, "polynomial squircle lost volume: {drift:.3}");
}
