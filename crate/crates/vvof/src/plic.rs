//! Piecewise linear interface calculation: Youngs corner-averaged normals
//! and the analytic relations between the plane constant of `m . x = alpha`
//! and the volume fraction it cuts from the unit cell.
//!
//! All plane constants are expressed in the normalized frame: components of
//! `m` reflected to be non-negative and scaled so they sum to one, with the
//! cell mapped to the unit cube. In that frame `alpha` lies in `[0, 1]` and
//! `alpha = 1/2` always cuts half the cell.

use crate::error::{Result, VofError};
use crate::field::ColorField;
use crate::grid::Axis;

/// Smallest normal component kept before branch selection; avoids division
/// blow-ups in the analytic relations.
pub const M_EPS: f64 = 1e-12;

/// Interface plane of one mixed cell: raw (non-normalized) normal from the
/// Youngs estimate, plus the plane constant in the normalized frame.
#[derive(Debug, Clone, Copy)]
pub struct PlicPlane {
    pub m: [f64; 3],
    pub alpha: f64,
}

/// Normal with non-negative components summing to one, and the per-axis
/// reflection flags that map the original cell into this frame.
#[derive(Debug, Clone, Copy)]
struct NormalizedNormal {
    m: [f64; 3],
    flipped: [bool; 3],
}

fn normalize(m: [f64; 3]) -> Result<NormalizedNormal> {
    if m == [0.0; 3] {
        return Err(VofError::DegenerateNormal);
    }
    let mut a = [0.0; 3];
    let mut flipped = [false; 3];
    for d in 0..3 {
        flipped[d] = m[d] < 0.0;
        a[d] = m[d].abs().max(M_EPS);
    }
    let s = a[0] + a[1] + a[2];
    Ok(NormalizedNormal { m: [a[0] / s, a[1] / s, a[2] / s], flipped })
}

fn sort3(m: [f64; 3]) -> [f64; 3] {
    let mut v = m;
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Volume fraction cut below the plane `m . x = alpha` in the unit cube,
/// for sorted non-negative `m` summing to one and `alpha` in `[0, 1/2]`.
fn volume_sorted_half(m: [f64; 3], alpha: f64) -> f64 {
    let [m1, m2, m3] = m;
    let m12 = m1 + m2;
    let a = alpha;
    if a <= 0.0 {
        return 0.0;
    }
    if a < m1 {
        return a * a * a / (6.0 * m1 * m2 * m3);
    }
    if a < m2 {
        return (3.0 * a * (a - m1) + m1 * m1) / (6.0 * m2 * m3);
    }
    // (a^3 - (a-m1)^3) / m1 without cancellation
    let q1 = a * a + a * (a - m1) + (a - m1) * (a - m1);
    if a < m12.min(m3) {
        // a^3 - (a-m1)^3 - (a-m2)^3 over 6 m1 m2 m3, factored so a small
        // m1 never amplifies round-off
        let u2 = (a - m2).max(0.0);
        return (q1 - u2 * u2 * u2 / m1) / (6.0 * m2 * m3);
    }
    if m3 >= m12 {
        // slab regime: plane spans the full cross-section
        return (2.0 * a - m12) / (2.0 * m3);
    }
    let u2 = (a - m2).max(0.0);
    let u3 = (a - m3).max(0.0);
    (q1 - (u2 * u2 * u2 + u3 * u3 * u3) / m1) / (6.0 * m2 * m3)
}

/// Cross-section area `dV/dalpha` matching `volume_sorted_half`.
fn area_sorted_half(m: [f64; 3], alpha: f64) -> f64 {
    let [m1, m2, m3] = m;
    let m12 = m1 + m2;
    let a = alpha;
    if a <= 0.0 {
        return 0.0;
    }
    if a < m1 {
        return 3.0 * a * a / (6.0 * m1 * m2 * m3);
    }
    if a < m2 {
        return (6.0 * a - 3.0 * m1) / (6.0 * m2 * m3);
    }
    let q1 = 2.0 * a - m1;
    if a < m12.min(m3) {
        let u2 = (a - m2).max(0.0);
        return (q1 - u2 * u2 / m1) / (2.0 * m2 * m3);
    }
    if m3 >= m12 {
        return 1.0 / m3;
    }
    let u2 = (a - m2).max(0.0);
    let u3 = (a - m3).max(0.0);
    (q1 - (u2 * u2 + u3 * u3) / m1) / (2.0 * m2 * m3)
}

/// Solves `t^3 + p t + q = 0` for `p <= 0` and returns the real root closest
/// to the interval `[lo, hi]` (three-real-root trigonometric form).
fn depressed_cubic_root_in(p: f64, q: f64, lo: f64, hi: f64) -> f64 {
    if p >= -1e-300 {
        return (-q).cbrt().clamp(lo, hi);
    }
    let amp = 2.0 * (-p / 3.0).sqrt();
    let cos3phi = (-4.0 * q / (amp * amp * amp)).clamp(-1.0, 1.0);
    let phi = cos3phi.acos() / 3.0;
    let mut best = f64::NAN;
    let mut best_pen = f64::INFINITY;
    for k in 0..3 {
        let t = amp * (phi + 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        let pen = if t < lo { lo - t } else if t > hi { t - hi } else { 0.0 };
        if pen < best_pen {
            best_pen = pen;
            best = t;
        }
    }
    best.clamp(lo, hi)
}

/// Plane constant for a target volume fraction `v` in `[0, 1/2]`, sorted
/// non-negative `m` summing to one. Inverse of `volume_sorted_half`.
fn alpha_sorted_half(m: [f64; 3], v: f64) -> f64 {
    let [m1, m2, m3] = m;
    let m12 = m1 + m2;
    let prod6 = 6.0 * m1 * m2 * m3;
    let v1 = if m1 > 0.0 { m1 * m1 / (6.0 * m2 * m3) } else { 0.0 };
    let v2 = if m2 > 0.0 { v1 + (m2 - m1) / (2.0 * m3) } else { 0.0 };
    let v3 = if m3 < m12 {
        volume_sorted_half(m, m3)
    } else {
        m12 / (2.0 * m3)
    };

    let guess = if v <= v1 {
        (prod6 * v).cbrt()
    } else if v <= v2 {
        0.5 * (m1 + ((24.0 * m2 * m3 * v - m1 * m1) / 3.0).max(0.0).sqrt())
    } else if v <= v3 {
        // alpha^3 - 3 m12 alpha^2 + 3(m1^2+m2^2) alpha - (m1^3+m2^3) + prod6 v = 0
        // depressed with alpha = t + m12
        let p = -6.0 * m1 * m2;
        let q = 3.0 * m1 * m2 * (2.0 * v * m3 - m12);
        let t = depressed_cubic_root_in(p, q, -m1, (m3 - m12).min(0.0));
        t + m12
    } else if m3 >= m12 {
        m3 * v + 0.5 * m12
    } else {
        // 2 alpha^3 - 3 alpha^2 + 3 s2 alpha - s3 + prod6 v = 0, alpha = t + 1/2
        let s2 = m1 * m1 + m2 * m2 + m3 * m3;
        let s3 = m1 * m1 * m1 + m2 * m2 * m2 + m3 * m3 * m3;
        let p = 1.5 * s2 - 0.75;
        let q = 0.75 * s2 - 0.25 - 0.5 * (s3 - prod6 * v);
        let t = depressed_cubic_root_in(p.min(0.0), q, m3 - 0.5, 0.0);
        t + 0.5
    };

    // Safeguarded Newton against the forward relation; the monotone volume
    // keeps a bisection bracket valid when the analytic guess is off near a
    // branch boundary.
    let mut a = guess.clamp(0.0, 0.5);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..60 {
        let r = volume_sorted_half(m, a) - v;
        if r.abs() <= 1e-16 {
            break;
        }
        if r > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        let da = area_sorted_half(m, a);
        let newton = if da > 0.0 { a - r / da } else { f64::NAN };
        a = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * 0.5 {
            break;
        }
    }
    a
}

/// Volume fraction of `{x in unit cube : m'. x <= alpha}` where `m'` is `m`
/// reflected and normalized to non-negative components summing to one.
pub fn volume_from_alpha(m: [f64; 3], alpha: f64) -> Result<f64> {
    let n = normalize(m)?;
    Ok(volume_from_alpha_normalized(n.m, alpha))
}

/// Volume fraction of `{u in unit cube : m . u <= beta}` for a raw
/// (unnormalized, possibly negative) `m`. Zero components stay exact, so
/// axis-aligned planes cut exact slabs.
pub fn halfspace_volume(m: [f64; 3], beta: f64) -> f64 {
    let s: f64 = m.iter().map(|v| v.abs()).sum();
    if s < 1e-300 {
        return if beta >= 0.0 { 1.0 } else { 0.0 };
    }
    let neg: f64 = m.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    let mm = [m[0].abs(), m[1].abs(), m[2].abs()];
    volume_from_alpha_normalized([mm[0] / s, mm[1] / s, mm[2] / s], (beta + neg) / s)
}

fn volume_from_alpha_normalized(m: [f64; 3], alpha: f64) -> f64 {
    if alpha <= 0.0 {
        return 0.0;
    }
    if alpha >= 1.0 {
        return 1.0;
    }
    let ms = sort3(m);
    if alpha > 0.5 {
        1.0 - volume_sorted_half(ms, 1.0 - alpha)
    } else {
        volume_sorted_half(ms, alpha)
    }
}

/// Plane constant `alpha` (normalized frame) whose cut volume equals `c`.
pub fn alpha_from_volume(m: [f64; 3], c: f64) -> Result<f64> {
    let n = normalize(m)?;
    if !(0.0..=1.0).contains(&c) {
        return Err(VofError::Config(format!("volume fraction out of range: {c}")));
    }
    Ok(alpha_from_volume_normalized(n.m, c))
}

fn alpha_from_volume_normalized(m: [f64; 3], c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    if c >= 1.0 {
        return 1.0;
    }
    if c == 0.5 {
        return 0.5;
    }
    let ms = sort3(m);
    if c > 0.5 {
        1.0 - alpha_sorted_half(ms, 1.0 - c)
    } else {
        alpha_sorted_half(ms, c)
    }
}

/// Volume of the PLIC-cut region restricted to the slab
/// `x0 <= x_axis <= x1` of the unit cell (absolute, not per slab width).
///
/// The plane is renormalized to the slab and the full-cell relation reused.
pub fn cut_volume(m: [f64; 3], alpha: f64, x0: f64, x1: f64, axis: Axis) -> Result<f64> {
    debug_assert!((0.0..=1.0).contains(&x0) && x0 <= x1 && x1 <= 1.0);
    let n = normalize(m)?;
    let w = x1 - x0;
    if w <= 0.0 {
        return Ok(0.0);
    }
    let d = axis.index();
    // map the slab into the reflected frame
    let (s0, _s1) = if n.flipped[d] { (1.0 - x1, 1.0 - x0) } else { (x0, x1) };
    let mut msub = n.m;
    msub[d] *= w;
    let asub = alpha - n.m[d] * s0;
    let s = msub[0] + msub[1] + msub[2];
    let frac = volume_from_alpha_normalized(
        [msub[0] / s, msub[1] / s, msub[2] / s],
        asub / s,
    );
    Ok(frac * w)
}

/// Youngs finite-difference interface normal `m = -grad C` estimated from
/// corner differences averaged back to the cell center. Not normalized; the
/// zero vector is returned for uniform neighborhoods.
pub fn youngs_normal(field: &ColorField, i: usize, j: usize, k: usize) -> [f64; 3] {
    let g = &field.grid;
    let (i, j, k) = (i as isize, j as isize, k as isize);
    if g.is_2d() {
        let c = |di: isize, dj: isize| field.ghost(i + di, j + dj, 0);
        let mut mx = 0.0;
        let mut my = 0.0;
        // four corners at (i +- 1/2, j +- 1/2)
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let (di, dj) = (sx as isize, sy as isize);
            let cx = (c(di, dj) + c(di, 0) - c(0, dj) - c(0, 0)) * sx as f64;
            let cy = (c(di, dj) - c(di, 0) + c(0, dj) - c(0, 0)) * sy as f64;
            mx -= cx / (2.0 * g.dx);
            my -= cy / (2.0 * g.dy);
        }
        [mx / 4.0, my / 4.0, 0.0]
    } else {
        let c = |di: isize, dj: isize, dk: isize| field.ghost(i + di, j + dj, k + dk);
        let mut m = [0.0; 3];
        for (sx, sy, sz) in [
            (1, 1, 1),
            (1, 1, -1),
            (1, -1, 1),
            (1, -1, -1),
            (-1, 1, 1),
            (-1, 1, -1),
            (-1, -1, 1),
            (-1, -1, -1),
        ] {
            let (di, dj, dk) = (sx as isize, sy as isize, sz as isize);
            let mut fx = 0.0;
            let mut fy = 0.0;
            let mut fz = 0.0;
            for a in [0, 1] {
                for b in [0, 1] {
                    fx += c(di, a * dj, b * dk) - c(0, a * dj, b * dk);
                    fy += c(a * di, dj, b * dk) - c(a * di, 0, b * dk);
                    fz += c(a * di, b * dj, dk) - c(a * di, b * dj, 0);
                }
            }
            m[0] -= fx * sx as f64 / (4.0 * g.dx);
            m[1] -= fy * sy as f64 / (4.0 * g.dy);
            m[2] -= fz * sz as f64 / (4.0 * g.dz);
        }
        [m[0] / 8.0, m[1] / 8.0, m[2] / 8.0]
    }
}

/// Reconstructs the interface plane of a mixed cell from the current field.
pub fn reconstruct(field: &ColorField, i: usize, j: usize, k: usize) -> Option<PlicPlane> {
    let m = youngs_normal(field, i, j, k);
    if m == [0.0; 3] {
        return None;
    }
    let c = field.get(i, j, k).clamp(0.0, 1.0);
    let alpha = alpha_from_volume(m, c).ok()?;
    Some(PlicPlane { m, alpha })
}
