//! The polynomial families `P_k`, `Q_k`, `W_k`, `Y_k`, `S_k`, their monic
//! companions `M_k`, `N_k`, `V_k`, and the `q_j` / `delta_j` sequences.
//!
//! Coefficients are assembled from zeta-type products at `prec + 32` bits
//! and rounded once to the requested precision.

mod decompose;
mod ramanujan;
mod scans;

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::complex::{pi, Coefficient};
use crate::error::{invalid, Error, Result};
use crate::poly::{multiply, Polynomial};
use crate::special::{
    bernoulli_rational, eta0, eta0_even_value, eta_even_value, l_chi4_value, zeta, zeta_even_value,
};

pub use decompose::{decompose, e_r_of, h_r_of, FamilyDecomposition};
pub use ramanujan::{ramanujan_residual, ramanujan_residual_report, RamanujanResidual};
pub use scans::{error_bound_scan, lemma3_scan, lemma5_scan, lemma6_scan, ScanReport, ScanRow};

/// Largest `k` accepted by the constructors.
pub const MAX_K: usize = 10_000;

pub(crate) const GUARD_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyId {
    P,
    Q,
    W,
    Y,
    S,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [FamilyId::P, FamilyId::Q, FamilyId::W, FamilyId::Y, FamilyId::S];

    /// `(r, c, first k)` of the standard certificate for the families that
    /// have one.
    pub fn certificate_defaults(self) -> Option<(usize, f64, usize)> {
        match self {
            FamilyId::P => Some((4, 0.020, 11)),
            FamilyId::Q => Some((2, 0.15, 8)),
            FamilyId::W => Some((3, 0.52, 6)),
            FamilyId::Y | FamilyId::S => None,
        }
    }

    /// Bound on `max |e_r|` over the circle used by the standard
    /// certificate.
    pub fn error_bound(self) -> Option<f64> {
        match self {
            FamilyId::P => Some(0.019),
            FamilyId::Q => Some(0.14),
            FamilyId::W => Some(0.5),
            FamilyId::Y | FamilyId::S => None,
        }
    }

    fn min_k(self) -> usize {
        match self {
            FamilyId::P => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::P => "P",
            FamilyId::Q => "Q",
            FamilyId::W => "W",
            FamilyId::Y => "Y",
            FamilyId::S => "S",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown family {s:?} (expected P, Q, W, Y or S)")))
    }
}

fn check_k(family: FamilyId, k: usize) -> Result<()> {
    if k < family.min_k() || k > MAX_K {
        return Err(invalid(format!(
            "family {family} needs {} <= k <= {MAX_K}, got {k}",
            family.min_k()
        )));
    }
    Ok(())
}

fn sign(k: usize) -> i32 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn zero_vec(prec: u32, len: usize) -> Vec<Float> {
    vec![Float::new(prec); len]
}

fn z2_plus_1(prec: u32) -> Polynomial {
    Polynomial::from_real(prec, &[1.0, 0.0, 1.0])
}

/// `(-1)^k (2/pi) sum_j (-z^2)^j zeta(2j) zeta(2k-2j) + zeta(2k-1)(z^{2k-1} + (-1)^k z)`.
///
/// For `k = 1` the last term is `0 * zeta(1)` and is dropped, leaving
/// `(pi/6)(1 - z^2)`.
pub fn build_p(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::P, k)?;
    let wp = prec + GUARD_BITS;
    Ok(Polynomial::from_floats(prec, p_coeffs(k, wp)))
}

fn p_coeffs(k: usize, wp: u32) -> Vec<Float> {
    let z: Vec<Float> = (0..=k).map(|j| zeta_even_value(2 * j as u32, wp)).collect();
    let two_over_pi = Float::with_val(wp, 2) / pi(wp);
    let mut c = zero_vec(wp, 2 * k + 1);
    for j in 0..=k {
        let mut v = Float::with_val(wp, &z[j] * &z[k - j]);
        v *= &two_over_pi;
        if sign(k + j) < 0 {
            v = -v;
        }
        c[2 * j] = v;
    }
    if k >= 2 {
        let odd = zeta((2 * k - 1) as f64, wp).expect("2k-1 > 1").value;
        c[2 * k - 1] += &odd;
        if sign(k) > 0 {
            c[1] += &odd;
        } else {
            c[1] -= &odd;
        }
    }
    c
}

/// The same polynomial through exact Bernoulli numbers:
/// `(2 pi)^{2k-1}/(2k)! sum_j (-1)^j B_{2j} B_{2k-2j} C(2k, 2j) z^{2j}`
/// plus the `zeta(2k-1)` term.
pub fn build_p_bernoulli(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::P, k)?;
    let wp = prec + GUARD_BITS + 2 * (64 - (k as u64).leading_zeros());
    let mut scale = Float::with_val(wp, pi(wp) * 2u32);
    scale = Float::with_val(wp, rug::ops::Pow::pow(&scale, (2 * k - 1) as u32));
    scale /= Integer::from(Integer::factorial(2 * k as u32));
    let mut c = zero_vec(wp, 2 * k + 1);
    for j in 0..=k {
        let binom = Integer::from(Integer::binomial_u(2 * k as u32, 2 * j as u32));
        let mut r: Rational = bernoulli_rational(2 * j) * bernoulli_rational(2 * k - 2 * j);
        r *= binom;
        if j % 2 == 1 {
            r = -r;
        }
        c[2 * j] = Float::with_val(wp, &scale * &r);
    }
    if k >= 2 {
        let odd = zeta((2 * k - 1) as f64, wp).expect("2k-1 > 1").value;
        c[2 * k - 1] += &odd;
        if sign(k) > 0 {
            c[1] += &odd;
        } else {
            c[1] -= &odd;
        }
    }
    Ok(Polynomial::from_floats(prec, c))
}

/// `M_k = -(pi / zeta(2k)) (z^2 + 1) P_k`, monic of degree `2k + 2`.
pub fn build_m(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::P, k)?;
    let wp = prec + GUARD_BITS;
    let p = Polynomial::from_floats(wp, p_coeffs(k, wp));
    let mut factor = -pi(wp);
    factor /= zeta_even_value(2 * k as u32, wp);
    let m = multiply(&p, &z2_plus_1(wp)).scale_real(&factor);
    Ok(m.with_precision(prec))
}

/// `Q_k` from `(-1)^k pi / 2^{2k+1} Q_k = sum_{j=1}^{k-1} eta0(2j) eta0(2k-2j) (-z^2)^j
/// + (-1)^k (pi/4) eta0(2k-1) (z^{2k-1} + (-1)^k z)`.
pub fn build_q(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::Q, k)?;
    let wp = prec + GUARD_BITS;
    Ok(Polynomial::from_floats(prec, q_coeffs(k, wp)))
}

/// The right-hand side of the defining display of `Q_k`.
fn q_display(k: usize, wp: u32) -> Vec<Float> {
    let e: Vec<Float> = (0..=k).map(|j| eta0_even_value(2 * j as u32, wp)).collect();
    let mut c = zero_vec(wp, 2 * k);
    for j in 1..k {
        let mut v = Float::with_val(wp, &e[j] * &e[k - j]);
        if j % 2 == 1 {
            v = -v;
        }
        c[2 * j] = v;
    }
    let mut odd = eta0((2 * k - 1) as f64, wp).expect("2k-1 > 1").value;
    odd *= pi(wp);
    odd /= 4;
    if sign(k) < 0 {
        odd = -odd;
    }
    c[2 * k - 1] += &odd;
    if sign(k) > 0 {
        c[1] += &odd;
    } else {
        c[1] -= &odd;
    }
    c
}

/// `(-1)^k 2^{2k+1} / pi`.
fn q_w_prefactor(k: usize, wp: u32) -> Float {
    let mut f = Float::with_val(wp, Float::i_exp(1, (2 * k + 1) as i32));
    f /= pi(wp);
    if sign(k) < 0 {
        f = -f;
    }
    f
}

fn q_coeffs(k: usize, wp: u32) -> Vec<Float> {
    let f = q_w_prefactor(k, wp);
    q_display(k, wp).into_iter().map(|v| v * &f).collect()
}

/// `N_k = Q_k (z^2 + 1) / (2^{2k-1} eta0(2k-1))`, monic of degree `2k + 1`.
pub fn build_n(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::Q, k)?;
    let wp = prec + GUARD_BITS;
    let q = Polynomial::from_floats(wp, q_coeffs(k, wp));
    let mut factor = Float::with_val(wp, Float::i_exp(1, 1 - 2 * k as i32));
    factor /= eta0((2 * k - 1) as f64, wp).expect("2k-1 > 1").value;
    Ok(multiply(&q, &z2_plus_1(wp)).scale_real(&factor).with_precision(prec))
}

/// `W_k` from `(-1)^k pi / 2^{2k+1} W_k = sum_{j=0}^{k} eta(2j) eta(2k-2j) (-z^2)^j`.
pub fn build_w(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::W, k)?;
    let wp = prec + GUARD_BITS;
    Ok(Polynomial::from_floats(prec, w_coeffs(k, wp)))
}

fn w_display(k: usize, wp: u32) -> Vec<Float> {
    let e: Vec<Float> = (0..=k).map(|j| eta_even_value(2 * j as u32, wp)).collect();
    let mut c = zero_vec(wp, 2 * k + 1);
    for j in 0..=k {
        let mut v = Float::with_val(wp, &e[j] * &e[k - j]);
        if j % 2 == 1 {
            v = -v;
        }
        c[2 * j] = v;
    }
    c
}

fn w_coeffs(k: usize, wp: u32) -> Vec<Float> {
    let f = q_w_prefactor(k, wp);
    w_display(k, wp).into_iter().map(|v| v * &f).collect()
}

/// `V_k = pi W_k (z^2 + 1) / (2^{2k} eta(2k))`, monic of degree `2k + 2`.
pub fn build_v(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::W, k)?;
    let wp = prec + GUARD_BITS;
    let w = Polynomial::from_floats(wp, w_coeffs(k, wp));
    let mut factor = pi(wp);
    factor >>= 2 * k as u32;
    factor /= eta_even_value(2 * k as u32, wp);
    Ok(multiply(&w, &z2_plus_1(wp)).scale_real(&factor).with_precision(prec))
}

/// `Y_k` from `(-1)^k / 4 Y_k = sum_{j=1}^{k-1} eta0(2j) eta0(2k-2j) z^j`.
///
/// The constant term vanishes, so `Y_k` itself is not self-inversive;
/// `Y_k / z` is, with palindromic coefficients.
pub fn build_y(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::Y, k)?;
    let wp = prec + GUARD_BITS;
    let e: Vec<Float> = (0..=k).map(|j| eta0_even_value(2 * j as u32, wp)).collect();
    let mut c = zero_vec(wp, k);
    for j in 1..k {
        let mut v = Float::with_val(wp, &e[j] * &e[k - j]);
        v *= 4 * sign(k);
        c[j] = v;
    }
    Ok(Polynomial::from_floats(prec, c))
}

/// `S_k` from `(-1)^k / ((2k)! 4) (pi/2)^{2k+2} S_k = sum_{j=0}^{k} L(2j+1) L(2k-2j+1) z^j`
/// with `L = L(., chi_4)`.
pub fn build_s(k: usize, prec: u32) -> Result<Polynomial> {
    check_k(FamilyId::S, k)?;
    let wp = prec + GUARD_BITS + 2 * (64 - (k as u64).leading_zeros());
    let l: Vec<Float> = (0..=k).map(|j| l_chi4_value(2 * j as u32 + 1, wp)).collect();
    let mut f = Float::with_val(wp, Float::i_exp(1, 1)) / pi(wp);
    f = Float::with_val(wp, rug::ops::Pow::pow(&f, (2 * k + 2) as u32));
    f *= Integer::from(Integer::factorial(2 * k as u32));
    f *= 4 * sign(k);
    let c = (0..=k).map(|j| Float::with_val(wp, &l[j] * &l[k - j]) * &f).collect();
    Ok(Polynomial::from_floats(prec, c))
}

/// Builds a family member by id.
pub fn build(family: FamilyId, k: usize, prec: u32) -> Result<Polynomial> {
    match family {
        FamilyId::P => build_p(k, prec),
        FamilyId::Q => build_q(k, prec),
        FamilyId::W => build_w(k, prec),
        FamilyId::Y => build_y(k, prec),
        FamilyId::S => build_s(k, prec),
    }
}

/// The monic companion `M_k`, `N_k` or `V_k`.
pub fn build_monic(family: FamilyId, k: usize, prec: u32) -> Result<Polynomial> {
    match family {
        FamilyId::P => build_m(k, prec),
        FamilyId::Q => build_n(k, prec),
        FamilyId::W => build_v(k, prec),
        _ => Err(invalid(format!("family {family} has no monic companion"))),
    }
}

/// The defining right-hand sides of `Q_k` and `W_k` (before dividing out
/// the prefactor), for consistency checks.
pub fn display_sum(family: FamilyId, k: usize, prec: u32) -> Result<Polynomial> {
    check_k(family, k)?;
    let wp = prec + GUARD_BITS;
    let c = match family {
        FamilyId::Q => q_display(k, wp),
        FamilyId::W => w_display(k, wp),
        _ => return Err(invalid(format!("no display sum for family {family}"))),
    };
    Ok(Polynomial::from_floats(prec, c))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySequences {
    pub family: FamilyId,
    pub k: usize,
    pub q: Vec<Float>,
    pub delta: Vec<Float>,
}

/// `q_j` and `delta_j` for `j = 0..=k`:
///
/// * P: `q_j = zeta(2j) zeta(2k-2j) / zeta(2k)`, `delta_j = q_j - zeta(2j)`
/// * Q: `q_j = eta0(2j) eta0(2k-2j) / eta0(2k-1)`, `delta_j = q_j - eta0(2j)`
/// * W: `q_j = eta(2j) eta(2k-2j) / eta(2k)`, `delta_j = eta(2j) - q_j`
pub fn sequences(family: FamilyId, k: usize, prec: u32) -> Result<FamilySequences> {
    check_k(family, k)?;
    let (values, denom): (Vec<Float>, Float) = match family {
        FamilyId::P => {
            let v: Vec<Float> = (0..=k).map(|j| zeta_even_value(2 * j as u32, prec)).collect();
            let d = v[k].clone();
            (v, d)
        }
        FamilyId::Q => {
            let v = (0..=k).map(|j| eta0_even_value(2 * j as u32, prec)).collect();
            (v, eta0((2 * k - 1) as f64, prec)?.value)
        }
        FamilyId::W => {
            let v: Vec<Float> = (0..=k).map(|j| eta_even_value(2 * j as u32, prec)).collect();
            let d = v[k].clone();
            (v, d)
        }
        _ => return Err(invalid(format!("no q/delta sequences for family {family}"))),
    };
    let q: Vec<Float> = (0..=k)
        .map(|j| Float::with_val(prec, &values[j] * &values[k - j]) / &denom)
        .collect();
    let delta = (0..=k)
        .map(|j| match family {
            FamilyId::W => Float::with_val(prec, &values[j] - &q[j]),
            _ => Float::with_val(prec, &q[j] - &values[j]),
        })
        .collect();
    Ok(FamilySequences { family, k, q, delta })
}

/// `z^k (z^3 - z - 1) + (z^3 + z^2 - 1)`.
pub fn counterexample_poly(k: usize, prec: u32) -> Polynomial {
    let h = Polynomial::from_real(prec, &[-1.0, -1.0, 0.0, 1.0]);
    let tail = Polynomial::from_real(prec, &[-1.0, 0.0, 1.0, 1.0]);
    h.shift(k).add(&tail)
}

/// `-1` or `1` as a coefficient, the `lambda = (-1)^k` of the families.
pub(crate) fn parity(k: usize, prec: u32) -> Coefficient {
    Coefficient::from_f64(prec, sign(k) as f64, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{default_tol, detect_self_inversive, evaluate};

    const P: u32 = 256;

    fn close(a: &Polynomial, b: &Polynomial, tol: f64) {
        let err = a.relative_distance(b);
        assert!(err <= tol, "relative distance {err:e}");
    }

    #[test]
    fn p2_expanded() {
        let pi = pi(P);
        let pi3 = Float::with_val(P, rug::ops::Pow::pow(&pi, 3u32));
        let z3 = zeta(3.0, P).unwrap().value;
        let want = Polynomial::from_floats(
            P,
            vec![
                -Float::with_val(P, &pi3 / 90u32),
                z3.clone(),
                -Float::with_val(P, &pi3 / 18u32),
                z3,
                -Float::with_val(P, &pi3 / 90u32),
            ],
        );
        close(&build_p(2, P).unwrap(), &want, 1e-70);
    }

    #[test]
    fn p1_is_quadratic() {
        let p = build_p(1, P).unwrap();
        assert_eq!(p.degree(), Some(2));
        assert!(p.coeff(1).is_zero());
        assert!((p.coeff(0).to_c64().re - std::f64::consts::PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_route_agrees() {
        for k in [1, 2, 5, 17, 40] {
            close(&build_p(k, P).unwrap(), &build_p_bernoulli(k, P).unwrap(), 1e-70);
        }
    }

    #[test]
    fn leading_coefficient_of_p() {
        for k in [1, 5, 30] {
            let p = build_p(k, P).unwrap();
            let lead = p.leading_coefficient().unwrap().to_c64().re;
            let want = -zeta_even_value(2 * k as u32, 64).to_f64() / std::f64::consts::PI;
            assert!((lead - want).abs() < 1e-15);
        }
    }

    #[test]
    fn p_is_self_inversive() {
        for k in 1..=12 {
            let form = detect_self_inversive(&build_p(k, P).unwrap(), default_tol(P)).unwrap();
            let eps = form.epsilon().to_c64();
            assert!((eps.re - sign(k) as f64).abs() < 1e-30 || k % 2 == 1 && (eps.re + 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn monic_companions() {
        let i = Coefficient::i(P);
        for k in 2..=12 {
            for (m, deg) in [
                (build_m(k, P).unwrap(), 2 * k + 2),
                (build_n(k, P).unwrap(), 2 * k + 1),
                (build_v(k, P).unwrap(), 2 * k + 2),
            ] {
                assert_eq!(m.degree(), Some(deg));
                let lead = m.leading_coefficient().unwrap().to_c64();
                assert!((lead.re - 1.0).abs() < 1e-60 && lead.im == 0.0);
                assert!(evaluate(&m, &i).abs_f64() < 1e-60);
                assert!(evaluate(&m, &-&i).abs_f64() < 1e-60);
            }
        }
    }

    #[test]
    fn y_over_z_is_palindromic() {
        for k in 3..=12 {
            let y = build_y(k, P).unwrap();
            assert_eq!(y.degree(), Some(k - 1));
            assert!(y.coeff(0).is_zero());
            let reduced = Polynomial::formal(P, y.coeffs()[1..].to_vec());
            let form = detect_self_inversive(&reduced, default_tol(P)).unwrap();
            assert!(form.is_reciprocal());
        }
    }

    #[test]
    fn s_is_reciprocal() {
        for k in 2..=10 {
            let s = build_s(k, P).unwrap();
            assert_eq!(s.degree(), Some(k));
            let form = detect_self_inversive(&s, default_tol(P)).unwrap();
            assert!(form.is_reciprocal());
        }
    }

    #[test]
    fn sequences_invariants() {
        for family in [FamilyId::P, FamilyId::Q, FamilyId::W] {
            for k in 2..=20 {
                let s = sequences(family, k, P).unwrap();
                assert!(s.delta[0].is_zero(), "{family} {k}");
                for j in 1..k {
                    assert!(s.delta[j] > 0, "{family} k={k} j={j}");
                }
                for j in 0..=k {
                    let gap = Float::with_val(P, &s.q[j] - &s.q[k - j]).abs();
                    assert!(gap < 1e-60);
                }
            }
        }
        let s = sequences(FamilyId::P, 7, P).unwrap();
        assert_eq!(s.q[0].to_f64(), -0.5);
    }

    #[test]
    fn counterexample_small_k() {
        assert_eq!(
            counterexample_poly(0, P),
            Polynomial::from_real(P, &[-2.0, -1.0, 1.0, 2.0])
        );
        let c3 = counterexample_poly(3, P);
        let form = detect_self_inversive(&c3, default_tol(P)).unwrap();
        assert_eq!(form.epsilon().to_c64().re, -1.0);
    }

    #[test]
    fn bad_k_is_rejected() {
        assert!(build_p(0, P).is_err());
        assert!(build_q(1, P).is_err());
        assert!(build_w(MAX_K + 1, P).is_err());
    }

    #[test]
    fn family_ids_parse() {
        assert_eq!("p".parse::<FamilyId>().unwrap(), FamilyId::P);
        assert!("X".parse::<FamilyId>().is_err());
    }
}
