//! Lipschitz-certified extrema of `|p|` on the unit circle, and the
//! perturbed-construction certificate built from them.
//!
//! `|p(e^{i theta})|` is sampled on a uniform grid of `M` angles. Between
//! grid points it cannot move by more than `L pi / M`, where
//! `L = sum_j j |A_j|` bounds its derivative in `theta`. The samples are taken
//! in double precision; the bound adds an explicit allowance for the
//! rounding of the coefficients, the evaluation points and Horner's scheme.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::Float;
use serde::Serialize;

use crate::complex::Coefficient;
use crate::error::{invalid, Error, Result};
use crate::poly::{check_unit, default_tol, evaluate, star, Polynomial};
use crate::roots::{max_root_modulus, unimodularity, unimodularity_tol};

/// Default sample count for certificates.
pub const CERTIFICATE_SAMPLES: usize = 1 << 16;
/// Default sample count for exploratory bounds.
pub const EXPLORATORY_SAMPLES: usize = 1 << 12;
/// Adaptive refinement never goes beyond this many samples.
pub const MAX_SAMPLES: usize = 1 << 24;

const GOLDEN_ITERATIONS: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Min,
    Max,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleBound {
    pub kind: BoundKind,
    /// Best grid value.
    pub sampled_extremum: f64,
    /// Value at `theta_at` after golden-section refinement, at full
    /// precision. Never worse than the grid value.
    pub refined_extremum: f64,
    pub theta_at: f64,
    pub lipschitz: f64,
    pub samples: usize,
    pub rounding_slack: f64,
    /// `sampled_extremum -/+ (lipschitz pi / samples + rounding_slack)`.
    pub certified_bound: f64,
}

/// `sum_j j |A_j|`, rounded upward to double precision.
pub fn lipschitz_constant(p: &Polynomial) -> f64 {
    let mut s = Float::new(p.precision_bits());
    for (j, a) in p.coeffs().iter().enumerate() {
        s += a.abs() * j as u64;
    }
    let v = s.to_f64();
    v + v * 4.0 * f64::EPSILON
}

pub fn certified_min_on_circle(p: &Polynomial, samples: usize) -> Result<CircleBound> {
    circle_bound(p, samples, BoundKind::Min)
}

pub fn certified_max_on_circle(p: &Polynomial, samples: usize) -> Result<CircleBound> {
    circle_bound(p, samples, BoundKind::Max)
}

fn horner_c64(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn modulus_at(p: &Polynomial, theta: f64) -> Float {
    let z = Coefficient::exp_i(&Float::with_val(p.precision_bits(), theta));
    evaluate(p, &z).abs()
}

fn circle_bound(p: &Polynomial, samples: usize, kind: BoundKind) -> Result<CircleBound> {
    if samples < 64 {
        return Err(invalid(format!("at least 64 samples are needed, got {samples}")));
    }
    let coeffs = p.to_c64();
    let d = p.formal_degree();
    let l1: f64 = coeffs.iter().map(|a| a.norm()).sum();
    let lipschitz = lipschitz_constant(p);

    // Conjugate symmetry: |p(e^{-i theta})| = |p(e^{i theta})| for real p.
    let real = p.coeffs().iter().all(|a| a.im().is_zero());
    let last = if real && samples % 2 == 0 { samples / 2 } else { samples - 1 };
    let step = 2.0 * PI / samples as f64;
    let better = |a: f64, b: f64| match kind {
        BoundKind::Min => a < b,
        BoundKind::Max => a > b,
    };
    let mut best = (0usize, horner_c64(&coeffs, Complex64::new(1.0, 0.0)).norm());
    for i in 1..=last {
        let v = horner_c64(&coeffs, Complex64::from_polar(1.0, i as f64 * step)).norm();
        if better(v, best.1) {
            best = (i, v);
        }
    }

    let u = f64::EPSILON / 2.0;
    let n = (4 * d + 8) as f64 * u;
    let gamma = n / (1.0 - n);
    let rounding_slack = 2.0 * (l1 * (u + gamma) + lipschitz * 16.0 * PI * u);

    let centre = best.0 as f64 * step;
    let sign = if kind == BoundKind::Min { 1.0 } else { -1.0 };
    let theta = golden_section(|t| sign * modulus_at(p, t).to_f64(), centre - step, centre + step);
    let at_theta = modulus_at(p, theta).to_f64();
    let at_centre = modulus_at(p, centre).to_f64();
    let (theta_at, refined_extremum) = if better(at_theta, at_centre) || at_theta == at_centre {
        (theta, at_theta)
    } else {
        (centre, at_centre)
    };

    let spread = lipschitz * PI / samples as f64 + rounding_slack;
    let certified_bound = match kind {
        BoundKind::Min => best.1 - spread,
        BoundKind::Max => best.1 + spread,
    };
    Ok(CircleBound {
        kind,
        sampled_extremum: best.1,
        refined_extremum,
        theta_at: normalize_angle(theta_at),
        lipschitz,
        samples,
        rounding_slack,
        certified_bound,
    })
}

/// Angle in `(-pi, pi]`.
fn normalize_angle(t: f64) -> f64 {
    let mut t = t % (2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    } else if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..GOLDEN_ITERATIONS {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// `z^{2k-n} h + z^k e + lambda (h* + z^{k-m} e*)`, with `n` and `m` the
/// formal degrees of `h` and `e`.
pub fn assemble_lemma2(h: &Polynomial, e: &Polynomial, lambda: &Coefficient, k: usize) -> Result<Polynomial> {
    let n = h.formal_degree();
    let m = e.formal_degree();
    if k <= n.max(m) {
        return Err(Error::DegreeConstraint { d: k, n: n.max(m) });
    }
    let h_star = star(h)?;
    let head = h.shift(2 * k - n).add(&e.shift(k));
    let mut tail = h_star;
    if !e.is_zero() {
        tail = tail.add(&star(e)?.shift(k - m));
    }
    Ok(head.add(&tail.scale(lambda)))
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Starting sample count.
    pub samples: usize,
    /// Cap for the adaptive doubling when a bound straddles `c`.
    pub max_samples: usize,
    /// The assembled polynomial is also checked by direct root finding
    /// when its degree is at most this.
    pub direct_check_max_degree: usize,
    pub tol: f64,
}

impl CertifyOptions {
    pub fn new(samples: usize, tol: f64) -> Self {
        CertifyOptions {
            samples,
            max_samples: MAX_SAMPLES.max(samples),
            direct_check_max_degree: 120,
            tol,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectCheck {
    pub degree: usize,
    pub unimodular: bool,
    pub max_modulus_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Certificate {
    pub h: Polynomial,
    pub e: Polynomial,
    pub lambda: Coefficient,
    pub k: usize,
    pub c: f64,
    pub h_min_bound: CircleBound,
    pub e_max_bound: CircleBound,
    pub h_max_root_modulus: f64,
    pub h_roots_inside: bool,
    pub direct_check: Option<DirectCheck>,
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Certificate with [`CertifyOptions::new`] defaults.
pub fn lemma2_certificate(
    h: &Polynomial,
    e: &Polynomial,
    lambda: &Coefficient,
    k: usize,
    c: f64,
    samples: usize,
    tol: f64,
) -> Result<Lemma2Certificate> {
    lemma2_certificate_with(h, e, lambda, k, c, &CertifyOptions::new(samples, tol))
}

/// Checks `min |h| >= c` and `max |e| <= c` on the circle and that the
/// roots of `h` lie in the open disk; together these make every zero of
/// [`assemble_lemma2`] unimodular.
///
/// A bound that straddles `c` triggers sample doubling up to
/// `max_samples`; if it still straddles, the certificate is invalid with an
/// "insufficient samples" diagnostic.
pub fn lemma2_certificate_with(
    h: &Polynomial,
    e: &Polynomial,
    lambda: &Coefficient,
    k: usize,
    c: f64,
    opts: &CertifyOptions,
) -> Result<Lemma2Certificate> {
    let n = h.formal_degree();
    let m = e.formal_degree();
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if k <= n.max(m) {
        return Err(Error::DegreeConstraint { d: k, n: n.max(m) });
    }
    check_unit(lambda, default_tol(h.precision_bits().min(lambda.prec())))?;
    if !(c > 0.0) {
        return Err(invalid(format!("c must be positive, got {c}")));
    }
    let mut diagnostics = Vec::new();

    let mut samples = opts.samples;
    let mut h_min_bound = certified_min_on_circle(h, samples)?;
    while h_min_bound.certified_bound < c && h_min_bound.sampled_extremum >= c && samples < opts.max_samples {
        samples *= 2;
        h_min_bound = certified_min_on_circle(h, samples)?;
    }
    if h_min_bound.certified_bound < c {
        if h_min_bound.sampled_extremum >= c {
            diagnostics.push(format!("insufficient samples: min |h| bound straddles c at {samples} samples"));
        } else {
            diagnostics.push(format!("min |h| on the circle is below c ({})", h_min_bound.refined_extremum));
        }
    }

    let mut samples = opts.samples;
    let mut e_max_bound = certified_max_on_circle(e, samples)?;
    while e_max_bound.certified_bound > c && e_max_bound.sampled_extremum <= c && samples < opts.max_samples {
        samples *= 2;
        e_max_bound = certified_max_on_circle(e, samples)?;
    }
    if e_max_bound.certified_bound > c {
        if e_max_bound.sampled_extremum <= c {
            diagnostics.push(format!("insufficient samples: max |e| bound straddles c at {samples} samples"));
        } else {
            diagnostics.push(format!("max |e| on the circle exceeds c ({})", e_max_bound.refined_extremum));
        }
    }

    // A root at distance t from the circle gives |h| <= L t there, so a
    // certified min m > 0 keeps every root at least m / L away from it.
    let h_max_root_modulus = if n == 0 { 0.0 } else { max_root_modulus(h)? };
    let gap = if h_min_bound.certified_bound > 0.0 {
        h_min_bound.certified_bound / h_min_bound.lipschitz.max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let h_roots_inside = gap > 0.0 && h_max_root_modulus <= 1.0 - gap / 2.0;
    if gap == 0.0 {
        diagnostics.push("boundary degeneracy: no positive lower bound for |h| on the circle".into());
    } else if !h_roots_inside {
        diagnostics.push(format!("h has a root of modulus {h_max_root_modulus} outside the open disk"));
    }

    let mut valid = h_min_bound.certified_bound >= c && e_max_bound.certified_bound <= c && h_roots_inside;

    let mut direct_check = None;
    if 2 * k <= opts.direct_check_max_degree {
        let assembled = assemble_lemma2(h, e, lambda, k)?;
        let (unimodular, dev) = unimodularity(&assembled, opts.tol)?;
        if valid && !unimodular {
            valid = false;
            diagnostics.push(format!("direct root check disagrees: max | |z| - 1 | = {dev:e}"));
        }
        direct_check = Some(DirectCheck {
            degree: 2 * k,
            unimodular,
            max_modulus_deviation: dev,
        });
    }

    Ok(Lemma2Certificate {
        h: h.clone(),
        e: e.clone(),
        lambda: lambda.clone(),
        k,
        c,
        h_min_bound,
        e_max_bound,
        h_max_root_modulus,
        h_roots_inside,
        direct_check,
        valid,
        diagnostics,
    })
}

/// Default tolerance for the direct root check in certificates.
pub fn certificate_tol(prec: u32) -> f64 {
    unimodularity_tol(prec)
}
