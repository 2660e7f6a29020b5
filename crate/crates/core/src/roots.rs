//! Simultaneous root finding (Aberth-Ehrlich), unimodularity verdicts and
//! the Gauss-Lucas containment check.
//!
//! The iteration runs in two phases: a double-precision pass that brings the
//! approximations into the quadratic regime, then a Gauss-Seidel pass at the
//! requested precision. Initial guesses are deterministic, so repeated runs
//! are bit-identical.

use num_complex::Complex64;
use rug::Float;
use serde::Serialize;

use crate::complex::{pow2, Coefficient};
use crate::error::{invalid, Error, Result};
use crate::poly::{derivative, evaluate_with_derivative, Polynomial};

/// Angular offset of the initial guesses; breaks the symmetry of
/// palindromic inputs.
const ANGLE_OFFSET: f64 = 0.4;
const F64_ITERATIONS: usize = 400;

/// Default tolerance for unimodularity verdicts, `2^{-prec/3}`.
pub fn unimodularity_tol(prec: u32) -> f64 {
    2f64.powi(-((prec / 3) as i32))
}

/// Iteration cap used by the convenience entry points.
pub fn default_max_iter(prec: u32) -> usize {
    200 + 2 * prec as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub roots: Vec<Coefficient>,
    /// Backward error `|p(z)| / sum_j |A_j| |z|^j` at each root.
    pub residuals: Vec<f64>,
    pub max_modulus_deviation: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Indices of roots accepted on the residual test while their
    /// corrections were still above the step threshold (multiple roots and
    /// tight clusters).
    pub clustered: Vec<usize>,
}

impl RootReport {
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(Coefficient::abs_f64).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// All roots of `p` with multiplicity.
///
/// A root is accepted once its Aberth correction drops below
/// `2^{-prec/2} max(1, |z|)`, or once its backward error is below
/// `2^{-7 prec/8}`. The report is returned with `converged = false` when
/// `max_iter` is exhausted first.
pub fn all_roots(p: &Polynomial, prec: u32, max_iter: usize) -> Result<RootReport> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(invalid("root finding needs degree at least 1"));
    }
    let q = p.trimmed().with_precision(prec);
    let zeros = q.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = Polynomial::formal(prec, q.coeffs()[zeros..].to_vec());
    let mut roots = vec![Coefficient::zero(prec); zeros];
    let mut iterations = 0;
    let mut converged = true;
    let mut clustered = Vec::new();

    match reduced.formal_degree() {
        0 => {}
        1 => {
            let c = reduced.coeffs();
            roots.push(-(&c[0] / &c[1]));
        }
        n => {
            let start = f64_phase(&reduced, n);
            let out = mp_phase(&reduced, start, prec, max_iter);
            iterations = out.iterations;
            converged = out.converged;
            clustered = out.clustered.into_iter().map(|i| i + zeros).collect();
            roots.extend(out.roots);
        }
    }

    let residuals = roots.iter().map(|z| backward_error(&q, z)).collect();
    let max_modulus_deviation = cluster_representatives(&q, &roots, &clustered, prec)
        .iter()
        .map(|z| {
            let mut dev = z.abs();
            dev -= 1;
            dev.abs().to_f64()
        })
        .fold(0.0, f64::max);
    Ok(RootReport {
        roots,
        residuals,
        max_modulus_deviation,
        iterations,
        converged,
        clustered,
    })
}

/// The roots with each group of mutually close clustered roots replaced by
/// one representative. An m-fold root is only resolved to about
/// `2^{-prec/m}` by its copies, so the representative is the group centroid
/// refined by Newton on `p^{(m-1)}`, where the root is simple. The centroid
/// is kept when the refinement leaves the group's neighbourhood.
fn cluster_representatives(
    p: &Polynomial,
    roots: &[Coefficient],
    clustered: &[usize],
    prec: u32,
) -> Vec<Coefficient> {
    let radius = pow2(64, -((prec / 8) as i32)).to_f64();
    let mut group: Vec<usize> = (0..roots.len()).collect();
    for (a, &i) in clustered.iter().enumerate() {
        for &j in &clustered[a + 1..] {
            let scale = roots[i].abs_f64().max(1.0);
            if (&roots[i] - &roots[j]).abs_f64() <= radius * scale {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gj {
                        *g = gi;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for leader in 0..roots.len() {
        let members: Vec<&Coefficient> = (0..roots.len())
            .filter(|&i| group[i] == leader)
            .map(|i| &roots[i])
            .collect();
        match members.len() {
            0 => {}
            1 => out.push(members[0].clone()),
            m => {
                let mut sum = Coefficient::zero(prec);
                for z in &members {
                    sum = &sum + *z;
                }
                let centroid = sum.scale(&(Float::with_val(prec, 1) / m as u32));
                let refined = refine_multiple(p, &centroid, m, prec)
                    .filter(|z| (z - &centroid).abs_f64() <= radius * centroid.abs_f64().max(1.0));
                out.push(refined.unwrap_or(centroid));
            }
        }
    }
    out
}

fn refine_multiple(p: &Polynomial, start: &Coefficient, m: usize, prec: u32) -> Option<Coefficient> {
    let mut q = p.clone();
    for _ in 1..m {
        q = derivative(&q).ok()?;
    }
    let step_tol = pow2(64, -(prec as i32 - 8)).to_f64();
    let mut z = start.clone();
    for _ in 0..2 * prec {
        let (value, slope) = evaluate_with_derivative(&q, &z);
        if value.is_zero() {
            return Some(z);
        }
        if slope.is_zero() {
            return None;
        }
        let step = &value / &slope;
        if !step.is_finite() {
            return None;
        }
        z = &z - &step;
        if step.abs_f64() <= step_tol * z.abs_f64().max(1.0) {
            return Some(z);
        }
    }
    None
}

/// [`all_roots`] at the polynomial's own precision with the default cap.
pub fn roots_of(p: &Polynomial) -> Result<RootReport> {
    let prec = p.precision_bits();
    all_roots(p, prec, default_max_iter(prec))
}

/// `(max_i ||z_i| - 1| <= tol, max_i ||z_i| - 1|)`.
pub fn unimodularity(p: &Polynomial, tol: f64) -> Result<(bool, f64)> {
    let report = converged_roots(p)?;
    Ok((report.max_modulus_deviation <= tol, report.max_modulus_deviation))
}

pub fn max_root_modulus(p: &Polynomial) -> Result<f64> {
    Ok(converged_roots(p)?.max_modulus())
}

fn converged_roots(p: &Polynomial) -> Result<RootReport> {
    let report = roots_of(p)?;
    if !report.converged {
        return Err(Error::NoConvergence {
            iterations: report.iterations,
        });
    }
    Ok(report)
}

/// Whether every root of `P'` lies within `tol` of the convex hull of the
/// roots of `P`. The tolerance is scaled by `max(1, max |root|)`.
pub fn convex_hull_containment(p: &Polynomial, tol: f64) -> Result<bool> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) if d < 2 => return Err(invalid("containment check needs degree at least 2")),
        _ => {}
    }
    let outer: Vec<Complex64> = converged_roots(p)?.roots.iter().map(Coefficient::to_c64).collect();
    let inner = converged_roots(&derivative(p)?)?;
    let scale = outer.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let hull = convex_hull(&outer);
    Ok(inner
        .roots
        .iter()
        .all(|z| distance_to_hull(&hull, z.to_c64()) <= tol * scale))
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let floor = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= floor && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn distance_to_segment(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn distance_to_hull(hull: &[Complex64], p: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p - hull[0]).norm(),
        2 => distance_to_segment(hull[0], hull[1], p),
        n => {
            let mut inside = true;
            let mut best = f64::INFINITY;
            for i in 0..n {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                let e = b - a;
                if e.re * (p - a).im - e.im * (p - a).re < 0.0 {
                    inside = false;
                }
                best = best.min(distance_to_segment(a, b, p));
            }
            if inside {
                0.0
            } else {
                best
            }
        }
    }
}

fn backward_error(p: &Polynomial, z: &Coefficient) -> f64 {
    let prec = p.precision_bits();
    let r = z.abs();
    let mut value = Coefficient::zero(prec);
    let mut weight = Float::new(prec);
    for a in p.coeffs().iter().rev() {
        value = &(&value * z) + a;
        weight *= &r;
        weight += a.abs();
    }
    if weight.is_zero() {
        return 0.0;
    }
    (value.abs() / weight).to_f64()
}

fn initial_guesses(p: &Polynomial, n: usize) -> Vec<Complex64> {
    let lead = &p.coeffs()[n];
    let mut cauchy = Float::new(p.precision_bits());
    for a in &p.coeffs()[..n] {
        let ratio = (a / lead).abs();
        if ratio > cauchy {
            cauchy = ratio;
        }
    }
    let radius = 1.0 + cauchy.to_f64().min(1e150);
    (0..n)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + ANGLE_OFFSET;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// `p(z) / p'(z)` in double precision, via the reversed polynomial outside
/// the unit disk to avoid overflow.
fn newton_ratio_f64(c: &[Complex64], z: Complex64) -> Complex64 {
    let n = c.len() - 1;
    if z.norm() <= 1.0 {
        let (mut v, mut s) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in c.iter().rev() {
            s = s * z + v;
            v = v * z + a;
        }
        v / s
    } else {
        let w = z.inv();
        let (mut v, mut s) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in c.iter() {
            s = s * w + v;
            v = v * w + a;
        }
        z * v / (v * n as f64 - w * s)
    }
}

fn f64_phase(p: &Polynomial, n: usize) -> Vec<Complex64> {
    let guesses = initial_guesses(p, n);
    let scale = p.max_abs_coeff();
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|a| a.scale(&Float::with_val(p.precision_bits(), 1 / &scale)).to_c64())
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) || coeffs[n] == Complex64::new(0.0, 0.0) {
        return guesses;
    }
    let mut z = guesses.clone();
    for _ in 0..F64_ITERATIONS {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let ratio = newton_ratio_f64(&coeffs, z[i]);
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i && z[i] != z[j] {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst < 1e-14 {
            break;
        }
    }
    if z.iter().all(|w| w.is_finite()) {
        z
    } else {
        guesses
    }
}

struct MpOutcome {
    roots: Vec<Coefficient>,
    iterations: usize,
    converged: bool,
    clustered: Vec<usize>,
}

fn mp_phase(p: &Polynomial, start: Vec<Complex64>, prec: u32, max_iter: usize) -> MpOutcome {
    let n = start.len();
    let mut z: Vec<Coefficient> = start.iter().map(|&w| Coefficient::from_c64(prec, w)).collect();
    let mut done = vec![false; n];
    let mut clustered = Vec::new();
    let step_tol = pow2(64, -((prec / 2) as i32)).to_f64();
    let residual_tol = pow2(64, -((7 * prec / 8) as i32)).to_f64();
    let one = Coefficient::one(prec);
    let mut iterations = 0;

    while iterations < max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (value, slope) = evaluate_with_derivative(p, &z[i]);
            if value.is_zero() {
                done[i] = true;
                continue;
            }
            let small_residual = backward_error(p, &z[i]) <= residual_tol;
            let mut repulsion = Coefficient::zero(prec);
            for j in 0..n {
                if j != i {
                    let gap = &z[i] - &z[j];
                    if !gap.is_zero() {
                        repulsion = &repulsion + &gap.recip();
                    }
                }
            }
            let step = if slope.is_zero() {
                // stationary point: nudge off it deterministically
                Coefficient::from_f64(prec, step_tol, step_tol)
            } else {
                let ratio = &value / &slope;
                &ratio / &(&one - &(&ratio * &repulsion))
            };
            if !step.is_finite() {
                continue;
            }
            z[i] = &z[i] - &step;
            let size = step.abs_f64() / z[i].abs_f64().max(1.0);
            if size <= step_tol {
                done[i] = true;
            } else if small_residual {
                done[i] = true;
                clustered.push(i);
            }
        }
    }
    clustered.sort_unstable();
    MpOutcome {
        roots: z,
        iterations,
        converged: done.iter().all(|d| *d),
        clustered,
    }
}
