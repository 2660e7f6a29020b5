use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::build_p;
use crate::complex::{pi, Coefficient};
use crate::error::{invalid, Error, Result};
use crate::poly::evaluate;

/// Largest truncation point the automatic term choice will accept.
const MAX_TERMS: usize = 10_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct RamanujanResidual {
    pub k: usize,
    pub residual: f64,
    /// Bound on the combined truncation error of both series.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Terms `N` such that `2 e^{-2 pi (N+1) a} / (1 - e^{-2 pi a}) * scale`
/// is below `2^{-target_bits}`.
fn terms_for(a: f64, log_scale: f64, target_bits: u32) -> Option<usize> {
    let step = 2.0 * std::f64::consts::PI * a;
    let head = (2.0 / -(-step).exp_m1()).ln() + log_scale + target_bits as f64 * std::f64::consts::LN_2;
    let n = (head / step).ceil().max(1.0);
    // The bound needs e^{2 pi n a} >= 2 from the first omitted term on.
    let n = n.max((std::f64::consts::LN_2 / step).ceil());
    (n.is_finite() && n <= MAX_TERMS as f64).then_some(n as usize)
}

fn tail_bound(a: f64, n: usize, log_scale: f64) -> f64 {
    let step = 2.0 * std::f64::consts::PI * a;
    if step * (n as f64 + 1.0) < std::f64::consts::LN_2 {
        return f64::INFINITY;
    }
    (-(step * (n as f64 + 1.0)) + log_scale).exp() * 2.0 / -(-step).exp_m1()
}

/// `sum_{n=1}^{terms} 1 / (n^{2k-1} (e^{2 pi n w} - 1))`.
fn lambert_sum(w: &Coefficient, k: usize, terms: usize, wp: u32) -> Coefficient {
    let two_pi_w = w.scale(&(pi(wp) * 2u32));
    let one = Coefficient::one(wp);
    let mut acc = Coefficient::zero(wp);
    for n in 1..=terms {
        let e = two_pi_w.scale_f64(n as f64).exp();
        let mut denom = (&e - &one).scale(&Float::with_val(wp, n).pow(2 * k as u32 - 1));
        if !denom.is_finite() {
            break;
        }
        denom = denom.recip();
        acc = &acc + &denom;
    }
    acc
}

/// Residual of the identity
/// `P_k(z) / (2 z^k) = (-z)^{-(k-1)} S(z) - z^{k-1} S(1/z)` with
/// `S(w) = sum_n 1 / (n^{2k-1} (e^{2 pi n w} - 1))` truncated after `terms`
/// terms (chosen automatically when `None`, so that the tail is below
/// `2^{8 - prec}`).
pub fn ramanujan_residual_report(
    k: usize,
    z: &Coefficient,
    terms: Option<usize>,
    prec: u32,
) -> Result<RamanujanResidual> {
    if k < 2 {
        return Err(invalid(format!("the series identity needs k >= 2, got {k}")));
    }
    if !(z.re().is_finite() && *z.re() > 0) {
        return Err(Error::IdentityHypothesis(format!(
            "Re z must be positive, got z = {:?}",
            z.to_c64()
        )));
    }
    let zc = z.to_c64();
    let a1 = zc.re;
    let a2 = zc.re / zc.norm_sqr();
    let log_r = zc.norm().ln() * (k - 1) as f64;
    let target = prec.saturating_sub(8);
    let auto = || -> Result<usize> {
        let n1 = terms_for(a1, -log_r, target);
        let n2 = terms_for(a2, log_r, target);
        match (n1, n2) {
            (Some(a), Some(b)) => Ok(a.max(b)),
            _ => Err(Error::IdentityHypothesis(format!(
                "z = {zc} is too close to the imaginary axis for {MAX_TERMS} terms"
            ))),
        }
    };
    let terms = match terms {
        Some(t) => t,
        None => auto()?,
    };

    let wp = prec + 64;
    let z = z.with_prec(wp);
    let p = build_p(k, wp)?;
    let zk = z.powu(k as u64);
    let lhs = &evaluate(&p, &z) / &zk.scale_f64(2.0);

    let zk1 = z.powu(k as u64 - 1);
    let mut neg_pow = zk1.recip();
    if (k - 1) % 2 == 1 {
        neg_pow = -neg_pow;
    }
    let s1 = lambert_sum(&z, k, terms, wp);
    let s2 = lambert_sum(&z.recip(), k, terms, wp);
    let rhs = &(&neg_pow * &s1) - &(&zk1 * &s2);

    let residual = (&lhs - &rhs).abs().to_f64();
    let tail = tail_bound(a1, terms, -log_r) + tail_bound(a2, terms, log_r);
    Ok(RamanujanResidual {
        k,
        residual,
        tail_bound: tail,
        terms,
    })
}

/// The residual alone, with at least `terms` terms of each series.
pub fn ramanujan_residual(k: usize, z: &Coefficient, terms: usize, prec: u32) -> Result<f64> {
    Ok(ramanujan_residual_report(k, z, Some(terms), prec)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Coefficient {
        Coefficient::from_f64(128, x, 0.0)
    }

    #[test]
    fn identity_holds_on_real_points() {
        for k in 2..=5 {
            for x in [1.0, 1.5, 2.0] {
                let r = ramanujan_residual_report(k, &real(x), None, 128).unwrap();
                assert!(r.residual < 1e-25, "k={k} z={x}: {r:?}");
                assert!(r.tail_bound < 1e-30);
            }
        }
    }

    #[test]
    fn identity_holds_off_axis() {
        let z = Coefficient::from_f64(128, 0.8, 0.6);
        let r = ramanujan_residual_report(3, &z, None, 128).unwrap();
        assert!(r.residual < 1e-25, "{r:?}");
    }

    #[test]
    fn imaginary_axis_is_rejected() {
        let z = Coefficient::from_f64(128, 0.0, 1.0);
        assert!(matches!(
            ramanujan_residual(2, &z, 50, 128),
            Err(Error::IdentityHypothesis(_))
        ));
    }

    #[test]
    fn more_terms_do_not_hurt() {
        let a = ramanujan_residual(2, &real(2.0), 50, 128).unwrap();
        let b = ramanujan_residual(2, &real(2.0), 100, 128).unwrap();
        assert!(b <= a.max(1e-36));
    }
}
