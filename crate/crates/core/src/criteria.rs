//! Sufficient conditions for all zeros of a self-inversive polynomial to lie
//! on the unit circle, plus Cohn's characterisation.
//!
//! Every `inf`-type condition is run as a witness search: any `mu` (or
//! `(c, mu)`) satisfying the inequality proves the conclusion, so the
//! reported values are upper bounds on the infimum, never claims about it.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::Float;
use serde::Serialize;

use crate::complex::Coefficient;
use crate::error::{invalid, Error, Result};
use crate::poly::{check_unit, construct_theorem1, default_tol, derivative, Polynomial, SelfInversiveForm};
use crate::roots::{max_root_modulus, unimodularity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    Cohn,
    Lakatos,
    LakatosLosoncziHalf,
    LakatosLosoncziAlpha,
    SmythInfMu,
    Schinzel,
}

impl CriterionId {
    pub const ALL: [CriterionId; 6] = [
        CriterionId::Cohn,
        CriterionId::Lakatos,
        CriterionId::LakatosLosoncziHalf,
        CriterionId::LakatosLosoncziAlpha,
        CriterionId::SmythInfMu,
        CriterionId::Schinzel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Cohn => "cohn",
            CriterionId::Lakatos => "lakatos",
            CriterionId::LakatosLosoncziHalf => "lakatos_losonczi_half",
            CriterionId::LakatosLosoncziAlpha => "lakatos_losonczi_alpha",
            CriterionId::SmythInfMu => "smyth_inf_mu",
            CriterionId::Schinzel => "schinzel",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown criterion {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub mu: Option<Coefficient>,
    pub c: Option<Coefficient>,
    pub alpha: Option<f64>,
    /// Left-hand side minus right-hand side at the witness.
    pub margin: f64,
}

impl Witness {
    fn margin(margin: f64) -> Self {
        Witness {
            mu: None,
            c: None,
            alpha: None,
            margin,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionVerdict {
    pub criterion_id: CriterionId,
    pub holds: bool,
    pub applicable: bool,
    pub is_iff: bool,
    /// Set by `lakatos` only: the inequality holds strictly.
    pub strict: Option<bool>,
    pub witness: Option<Witness>,
    /// Value of the minimised right-hand side at the witness.
    pub inf_upper_bound: Option<f64>,
    /// Lipschitz lower bound on the infimum over the `mu` grid.
    pub inf_lower_bound: Option<f64>,
    pub note: Option<String>,
}

impl CriterionVerdict {
    fn new(criterion_id: CriterionId, margin: f64, slack: f64) -> Self {
        CriterionVerdict {
            criterion_id,
            holds: margin >= -slack,
            applicable: true,
            is_iff: false,
            strict: None,
            witness: Some(Witness::margin(margin)),
            inf_upper_bound: None,
            inf_lower_bound: None,
            note: None,
        }
    }

    fn not_applicable(criterion_id: CriterionId, note: &str) -> Self {
        CriterionVerdict {
            criterion_id,
            holds: false,
            applicable: false,
            is_iff: false,
            strict: None,
            witness: None,
            inf_upper_bound: None,
            inf_lower_bound: None,
            note: Some(note.to_string()),
        }
    }

    pub fn margin(&self) -> Option<f64> {
        self.witness.as_ref().map(|w| w.margin)
    }
}

/// Search parameters shared by [`run`].
#[derive(Clone, Debug)]
pub struct CriteriaOptions {
    pub tol: f64,
    pub alpha_grid: usize,
    pub mu_grid: usize,
    pub schinzel_mu_grid: usize,
    pub c_iters: usize,
}

impl CriteriaOptions {
    pub fn for_precision(prec: u32) -> Self {
        CriteriaOptions {
            tol: crate::roots::unimodularity_tol(prec),
            alpha_grid: 64,
            mu_grid: 4096,
            schinzel_mu_grid: 1024,
            c_iters: 50,
        }
    }
}

pub fn run(form: &SelfInversiveForm, id: CriterionId, opts: &CriteriaOptions) -> Result<CriterionVerdict> {
    match id {
        CriterionId::Cohn => cohn(form, opts.tol),
        CriterionId::Lakatos => Ok(lakatos(form, opts.tol)),
        CriterionId::LakatosLosoncziHalf => Ok(lakatos_losonczi_half(form)),
        CriterionId::LakatosLosoncziAlpha => Ok(best_alpha(form, opts.alpha_grid)),
        CriterionId::SmythInfMu => Ok(smyth_inf_mu(form, opts.mu_grid)),
        CriterionId::Schinzel => Ok(schinzel(form, opts.schinzel_mu_grid, opts.c_iters)),
    }
}

/// Allowance for rounding in a margin: `(d + 2) 2^{4-prec} sum_j |A_j|`.
fn rounding_slack(p: &Polynomial) -> f64 {
    let d = p.formal_degree() as f64;
    let unit = 2f64.powi(4 - p.precision_bits() as i32);
    (d + 2.0) * unit * p.l1_norm().to_f64()
}

/// Slack for sums evaluated in double precision.
fn f64_slack(p: &Polynomial) -> f64 {
    let d = p.formal_degree() as f64;
    4.0 * (d + 2.0) * f64::EPSILON * p.l1_norm().to_f64()
}

fn lead_abs(p: &Polynomial) -> Float {
    p.coeffs()[p.formal_degree()].abs()
}

/// Cohn: self-inversive `P` has all zeros on the circle iff `P'` has all
/// zeros in the closed disk.
pub fn cohn(form: &SelfInversiveForm, tol: f64) -> Result<CriterionVerdict> {
    let p = form.poly();
    if form.degree() < 1 {
        return Err(invalid("cohn needs degree at least 1"));
    }
    let dp = derivative(p)?;
    let max_mod = if dp.degree() == Some(0) { 0.0 } else { max_root_modulus(&dp)? };
    let mut v = CriterionVerdict::new(CriterionId::Cohn, 1.0 - max_mod, tol);
    v.is_iff = true;
    v.note = Some(format!("max root modulus of derivative {max_mod}"));
    Ok(v)
}

/// `|A_d| >= sum_{j=0}^{d} |A_j - A_d|`, for real reciprocal input only.
pub fn lakatos(form: &SelfInversiveForm, tol: f64) -> CriterionVerdict {
    if !form.is_reciprocal() {
        return CriterionVerdict::not_applicable(
            CriterionId::Lakatos,
            "not applicable: needs real coefficients with epsilon = 1",
        );
    }
    let p = form.poly();
    let ad = &p.coeffs()[p.formal_degree()];
    let mut rhs = Float::new(p.precision_bits());
    for a in p.coeffs() {
        rhs += (a - ad).abs();
    }
    let margin = (lead_abs(p) - rhs).to_f64();
    let mut v = CriterionVerdict::new(CriterionId::Lakatos, margin, rounding_slack(p));
    // equality within `tol` (relative to |A_d|) is not counted as strict
    v.strict = Some(margin > tol * lead_abs(p).to_f64());
    v
}

/// `|A_d| >= (1/2) sum_{j=1}^{d-1} |A_j|`.
pub fn lakatos_losonczi_half(form: &SelfInversiveForm) -> CriterionVerdict {
    let p = form.poly();
    let d = p.formal_degree();
    let mut rhs = Float::new(p.precision_bits());
    for a in p.coeffs().iter().take(d).skip(1) {
        rhs += a.abs();
    }
    rhs /= 2;
    let margin = (lead_abs(p) - rhs).to_f64();
    CriterionVerdict::new(CriterionId::LakatosLosoncziHalf, margin, rounding_slack(p))
}

fn alpha_margin(p: &Polynomial, alpha: f64) -> Float {
    let prec = p.precision_bits();
    let d = p.formal_degree();
    let ad = &p.coeffs()[d];
    let shift = ad.scale(&Float::with_val(prec, 1.0 - alpha));
    let mut rhs = Float::new(prec);
    for a in p.coeffs().iter().take(d).skip(1) {
        rhs += (a - &shift).abs();
    }
    let mut lhs = lead_abs(p);
    lhs *= 1.0 + alpha;
    lhs - rhs
}

/// `|(1 + alpha) A_d| >= sum_{j=1}^{d-1} |A_j - (1 - alpha) A_d|` for
/// `0 <= alpha <= 1`, real reciprocal input only.
pub fn lakatos_losonczi_alpha(form: &SelfInversiveForm, alpha: f64) -> Result<CriterionVerdict> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if !form.is_reciprocal() {
        return Ok(CriterionVerdict::not_applicable(
            CriterionId::LakatosLosoncziAlpha,
            "not applicable: needs real coefficients with epsilon = 1",
        ));
    }
    let p = form.poly();
    let margin = alpha_margin(p, alpha).to_f64();
    let mut v = CriterionVerdict::new(CriterionId::LakatosLosoncziAlpha, margin, rounding_slack(p));
    if let Some(w) = v.witness.as_mut() {
        w.alpha = Some(alpha);
    }
    Ok(v)
}

/// Best `alpha` over a uniform grid, refined by ternary search; the margin
/// is concave in `alpha` (linear minus a sum of moduli of affine terms).
pub fn best_alpha(form: &SelfInversiveForm, grid_size: usize) -> CriterionVerdict {
    if !form.is_reciprocal() {
        return CriterionVerdict::not_applicable(
            CriterionId::LakatosLosoncziAlpha,
            "not applicable: needs real coefficients with epsilon = 1",
        );
    }
    let p = form.poly();
    let m = grid_size.max(2);
    let alpha_at = |i: usize| i as f64 / m as f64;
    let margin_at = |a: f64| alpha_margin(p, a).to_f64();
    let mut best = 0;
    let mut best_margin = f64::NEG_INFINITY;
    for i in 0..=m {
        let v = margin_at(alpha_at(i));
        if v > best_margin {
            best_margin = v;
            best = i;
        }
    }
    let (mut lo, mut hi) = (alpha_at(best.saturating_sub(1)), alpha_at((best + 1).min(m)));
    for _ in 0..80 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if margin_at(a) < margin_at(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let refined = 0.5 * (lo + hi);
    let alpha = if margin_at(refined) > best_margin { refined } else { alpha_at(best) };
    lakatos_losonczi_alpha(form, alpha).expect("alpha inside [0, 1]")
}

/// `(1/2) sum_{j=0}^{d-1} |A_j - mu A_{j+1}|`.
pub fn smyth_value(form: &SelfInversiveForm, mu: &Coefficient) -> Result<Float> {
    check_unit(mu, default_tol(form.poly().precision_bits().min(mu.prec())))?;
    Ok(smyth_sum(form.poly(), mu))
}

fn smyth_sum(p: &Polynomial, mu: &Coefficient) -> Float {
    let c = p.coeffs();
    let mut s = Float::new(p.precision_bits());
    for j in 0..p.formal_degree() {
        s += (&c[j] - &(mu * &c[j + 1])).abs();
    }
    s / 2u32
}

/// Coefficients divided by the largest modulus, in double precision.
fn normalized_c64(p: &Polynomial) -> (Vec<Complex64>, f64) {
    let scale = p.max_abs_coeff();
    let inv = Float::with_val(p.precision_bits(), 1 / &scale);
    let c = p.coeffs().iter().map(|a| a.scale(&inv).to_c64()).collect();
    (c, scale.to_f64())
}

fn smyth_f64(c: &[Complex64], theta: f64) -> f64 {
    let mu = Complex64::from_polar(1.0, theta);
    0.5 * c.windows(2).map(|w| (w[0] - mu * w[1]).norm()).sum::<f64>()
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
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

/// Witness search for `|A_d| >= (1/2) inf_mu sum |A_j - mu A_{j+1}|`.
///
/// `mu = e^{i theta}` is sampled on `grid_size` points and the best sample
/// refined by golden-section search. The grid also gives a lower bound on
/// the infimum through the Lipschitz constant `(1/2) sum_j |A_{j+1}|`.
pub fn smyth_inf_mu(form: &SelfInversiveForm, grid_size: usize) -> CriterionVerdict {
    let p = form.poly();
    let prec = p.precision_bits();
    let m = grid_size.max(8);
    let (c, scale) = normalized_c64(p);
    let step = 2.0 * PI / m as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..m {
        let v = smyth_f64(&c, i as f64 * step);
        if v < best.1 {
            best = (i, v);
        }
    }
    let centre = best.0 as f64 * step;
    let refined = golden_min(|t| smyth_f64(&c, t), centre - step, centre + step, 100);

    let (mu, value) = [refined, centre]
        .into_iter()
        .map(|t| {
            let mu = Coefficient::exp_i(&Float::with_val(prec, t));
            let v = smyth_sum(p, &mu);
            (mu, v)
        })
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite sums"))
        .expect("two candidates");

    let lipschitz = 0.5 * p.coeffs()[1..].iter().map(Coefficient::abs_f64).sum::<f64>();
    let lower = best.1 * scale - lipschitz * PI / m as f64 - f64_slack(p);
    let margin = (lead_abs(p) - &value).to_f64();
    let mut v = CriterionVerdict::new(CriterionId::SmythInfMu, margin, rounding_slack(p));
    v.inf_upper_bound = Some(value.to_f64());
    v.inf_lower_bound = Some(lower);
    if let Some(w) = v.witness.as_mut() {
        w.mu = Some(mu);
    }
    v
}

/// `sum_j |c A_j - mu^{d-j} A_d|`.
pub fn schinzel_sum(p: &Polynomial, c: &Coefficient, mu: &Coefficient) -> Float {
    let d = p.formal_degree();
    let ad = &p.coeffs()[d];
    let mut s = Float::new(p.precision_bits());
    let mut power = ad.clone();
    for j in (0..=d).rev() {
        s += (&(c * &p.coeffs()[j]) - &power).abs();
        power = &power * mu;
    }
    s
}

/// Weighted geometric median of `points` by Weiszfeld's iteration, seeded
/// at `start`; returns the best point seen and its objective value.
fn weiszfeld(points: &[Complex64], weights: &[f64], start: Complex64, iters: usize) -> (Complex64, f64) {
    let cost = |c: Complex64| points.iter().zip(weights).map(|(x, w)| w * (c - x).norm()).sum::<f64>();
    let mut c = start;
    let mut best = (c, cost(c));
    for _ in 0..iters {
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for (x, w) in points.iter().zip(weights) {
            let mut dist = (c - x).norm();
            if dist < f64::EPSILON * x.norm().max(1.0) {
                // sitting on a data point: step one ulp off it
                c += Complex64::new(f64::EPSILON * c.norm().max(1.0), 0.0);
                dist = (c - x).norm();
            }
            num += x * (w / dist);
            den += w / dist;
        }
        let next = num / den;
        let moved = (next - c).norm();
        c = next;
        let f = cost(c);
        if f < best.1 {
            best = (c, f);
        }
        if moved <= 1e-15 * c.norm().max(1.0) {
            break;
        }
    }
    best
}

/// Witness search for `|A_d| >= inf_{c, mu} sum_j |c A_j - mu^{d-j} A_d|`.
///
/// For fixed `mu` the sum is `sum_j |A_j| |c - mu^{d-j} A_d / A_j|` plus a
/// constant from vanishing `A_j`, a weighted geometric median problem in
/// `c`. Candidates per `mu` are the Weiszfeld limit, `c = 1` and the data
/// points themselves. `mu = 1` is always on the grid.
pub fn schinzel(form: &SelfInversiveForm, mu_grid: usize, c_iters: usize) -> CriterionVerdict {
    let p = form.poly();
    let prec = p.precision_bits();
    let d = p.formal_degree();
    let (a, _) = normalized_c64(p);
    let ad = a[d];
    let m = mu_grid.max(1);
    let mut best: Option<(f64, Complex64, f64)> = None;
    for i in 0..m {
        let theta = 2.0 * PI * i as f64 / m as f64;
        let mu = Complex64::from_polar(1.0, theta);
        let mut points = Vec::with_capacity(d + 1);
        let mut weights = Vec::with_capacity(d + 1);
        let mut constant = 0.0;
        for (j, aj) in a.iter().enumerate() {
            let target = mu.powu((d - j) as u32) * ad;
            if aj.norm() == 0.0 {
                constant += target.norm();
            } else {
                points.push(target / aj);
                weights.push(aj.norm());
            }
        }
        let cost = |c: Complex64| {
            constant + points.iter().zip(&weights).map(|(x, w)| w * (c - x).norm()).sum::<f64>()
        };
        let total: f64 = weights.iter().sum();
        let seed = points.iter().zip(&weights).map(|(x, w)| x * *w).sum::<Complex64>() / total;
        let (c_w, _) = weiszfeld(&points, &weights, seed, c_iters);
        let mut local = (Complex64::new(1.0, 0.0), cost(Complex64::new(1.0, 0.0)));
        for cand in points.iter().copied().chain([c_w]) {
            let f = cost(cand);
            if f < local.1 {
                local = (cand, f);
            }
        }
        if best.map_or(true, |b| local.1 < b.2) {
            best = Some((theta, local.0, local.1));
        }
    }
    let (theta, c, _) = best.expect("nonempty grid");
    let mu = Coefficient::exp_i(&Float::with_val(prec, theta));
    let c = Coefficient::from_c64(prec, c);
    let value = schinzel_sum(p, &c, &mu);
    let margin = (lead_abs(p) - &value).to_f64();
    let mut v = CriterionVerdict::new(CriterionId::Schinzel, margin, rounding_slack(p));
    v.inf_upper_bound = Some(value.to_f64());
    if let Some(w) = v.witness.as_mut() {
        w.mu = Some(mu);
        w.c = Some(c);
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservationRow {
    pub d: usize,
    pub unimodular: Option<bool>,
    pub max_modulus_deviation: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservationScan {
    pub first_failing_d: Option<usize>,
    pub rows: Vec<ObservationRow>,
}

/// Builds `z^{d-n} h + lambda h*` for `d = n+1 ..= d_max` and reports the
/// smallest `d` whose zeros leave the circle. Solver failures are recorded
/// per row and do not count as a failing `d`.
pub fn observation_scan(h: &Polynomial, lambda: &Coefficient, d_max: usize, tol: f64) -> Result<ObservationScan> {
    check_unit(lambda, default_tol(h.precision_bits().min(lambda.prec())))?;
    let n = h.formal_degree();
    let mut rows = Vec::new();
    let mut first_failing_d = None;
    for d in n + 1..=d_max {
        let p = construct_theorem1(h, d, lambda)?;
        let row = match unimodularity(&p, tol) {
            Ok((ok, dev)) => {
                if !ok && first_failing_d.is_none() {
                    first_failing_d = Some(d);
                }
                ObservationRow {
                    d,
                    unimodular: Some(ok),
                    max_modulus_deviation: Some(dev),
                    error: None,
                }
            }
            Err(e) => ObservationRow {
                d,
                unimodular: None,
                max_modulus_deviation: None,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    Ok(ObservationScan { first_failing_d, rows })
}
