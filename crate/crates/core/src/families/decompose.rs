use rug::Float;
use serde::Serialize;

use super::{build_monic, check_k, parity, sequences, FamilyId, GUARD_BITS};
use crate::certify::{assemble_lemma2, lemma2_certificate_with, CertifyOptions, Lemma2Certificate};
use crate::complex::{pi, Coefficient};
use crate::error::{invalid, Error, Result};
use crate::poly::{default_tol, Polynomial};
use crate::special::{eta0_even_value, eta_even_value, zeta, zeta_even_value};

fn decomposable(family: FamilyId) -> Result<()> {
    match family {
        FamilyId::P | FamilyId::Q | FamilyId::W => Ok(()),
        _ => Err(invalid(format!("family {family} has no h_r / e_r decomposition"))),
    }
}

fn alternate(j: usize) -> i32 {
    if j % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The main polynomial `h_r`, of degree `2r` and independent of `k`.
///
/// * P (`r >= 2`): `z^{2r} - pi z^{2r-1} - pi z^{2r-3} + 2 sum_j (zeta(2j-2) - zeta(2j)) (-1)^j z^{2r-2j}`
/// * Q: `z^{2r} + z^{2r-2} + (4/pi) sum_j (eta0(2j-2) - eta0(2j)) (-1)^{j-1} z^{2r-2j+1}`
/// * W: `z^{2r} + 2 sum_j (eta(2j-2) - eta(2j)) (-1)^{j-1} z^{2r-2j}`
pub fn h_r_of(family: FamilyId, r: usize, prec: u32) -> Result<Polynomial> {
    decomposable(family)?;
    let min_r = if family == FamilyId::P { 2 } else { 1 };
    if r < min_r || r > super::MAX_K {
        return Err(invalid(format!("h_r for family {family} needs r >= {min_r}, got {r}")));
    }
    let wp = prec + GUARD_BITS;
    let mut c = vec![Float::new(wp); 2 * r + 1];
    c[2 * r] += 1;
    match family {
        FamilyId::P => {
            let z: Vec<Float> = (0..=r).map(|j| zeta_even_value(2 * j as u32, wp)).collect();
            let p = pi(wp);
            c[2 * r - 1] -= &p;
            c[2 * r - 3] -= &p;
            for j in 1..=r {
                let mut v = Float::with_val(wp, &z[j - 1] - &z[j]);
                v *= 2 * alternate(j);
                c[2 * r - 2 * j] += v;
            }
        }
        FamilyId::Q => {
            let e: Vec<Float> = (0..=r).map(|j| eta0_even_value(2 * j as u32, wp)).collect();
            let four_over_pi = Float::with_val(wp, 4) / pi(wp);
            c[2 * r - 2] += 1;
            for j in 1..=r {
                let mut v = Float::with_val(wp, &e[j - 1] - &e[j]);
                v *= &four_over_pi;
                v *= -alternate(j);
                c[2 * r - 2 * j + 1] += v;
            }
        }
        FamilyId::W => {
            let e: Vec<Float> = (0..=r).map(|j| eta_even_value(2 * j as u32, wp)).collect();
            for j in 1..=r {
                let mut v = Float::with_val(wp, &e[j - 1] - &e[j]);
                v *= -2 * alternate(j);
                c[2 * r - 2 * j] += v;
            }
        }
        _ => unreachable!(),
    }
    Ok(Polynomial::from_floats(prec, c))
}

/// The error polynomial `e_r`, kept at formal degree `k - 1`.
///
/// Needs `k > 2r` for Q and `k >= 2r` for P and W.
///
/// Its coefficients are differences of the `q_j` (for `j > r`) and
/// `delta_j` (for `j <= r`) sequences, plus for P the
/// `zeta(2k-1)/zeta(2k) - 1` term.
pub fn e_r_of(family: FamilyId, k: usize, r: usize, prec: u32) -> Result<Polynomial> {
    decomposable(family)?;
    check_k(family, k)?;
    // Certificate degree constraint: K > max(2r, deg e). K is k + 1 for P and W
    // and k for Q.
    let min_k = if family == FamilyId::Q { 2 * r + 1 } else { 2 * r };
    if r == 0 || k < min_k.max(3) {
        return Err(invalid(format!(
            "e_r for family {family} needs r >= 1 and k >= {}, got k = {k}, r = {r}",
            min_k.max(3)
        )));
    }
    let wp = prec + GUARD_BITS;
    let seq = sequences(family, k, wp)?;
    let diff = |v: &[Float], j: usize| Float::with_val(wp, &v[j - 1] - &v[j]);
    let mut c = vec![Float::new(wp); k];
    match family {
        FamilyId::P => {
            let mut t = zeta((2 * k - 1) as f64, wp)?.value;
            t /= zeta_even_value(2 * k as u32, wp);
            t -= 1;
            t *= pi(wp);
            c[k - 1] -= &t;
            c[k - 3] -= &t;
            for j in 1..=k / 2 {
                let mut v = if j <= r { diff(&seq.delta, j) } else { diff(&seq.q, j) };
                v *= 2 * alternate(j);
                c[k - 2 * j] += v;
            }
        }
        FamilyId::Q | FamilyId::W => {
            let scale = if family == FamilyId::Q {
                Float::with_val(wp, 4) / pi(wp)
            } else {
                Float::with_val(wp, 2)
            };
            for j in 1..=k / 2 {
                let mut v = if j <= r { diff(&seq.delta, j) } else { diff(&seq.q, j) };
                v *= &scale;
                let mut s = -alternate(j);
                if family == FamilyId::W && j <= r {
                    s = -s;
                }
                v *= s;
                c[k + 1 - 2 * j] += v;
            }
        }
        _ => unreachable!(),
    }
    Ok(Polynomial::from_floats(prec, c))
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDecomposition {
    pub family: FamilyId,
    pub k: usize,
    pub r: usize,
    pub h_r: Polynomial,
    pub e_r: Polynomial,
    pub lambda: Coefficient,
    /// `M_k`, `N_k` or `V_k`.
    pub monic_base: Polynomial,
    /// Relative coefficientwise distance between the reassembled
    /// polynomial and `monic_base`.
    pub reconstruction_error: f64,
}

impl FamilyDecomposition {
    /// `(h, e, K)` such that [`assemble_lemma2`]`(h, e, lambda, K)` is
    /// `M_k`, `N_k / z` or `V_k`.
    pub fn lemma2_parts(&self) -> (Polynomial, Polynomial, usize) {
        match self.family {
            FamilyId::P => (self.h_r.clone(), self.e_r.shift(1), self.k + 1),
            FamilyId::Q => (self.h_r.clone(), self.e_r.clone(), self.k),
            _ => (self.h_r.clone(), self.e_r.clone(), self.k + 1),
        }
    }

    /// The reassembled monic polynomial.
    pub fn reassembled(&self) -> Result<Polynomial> {
        let (h, e, big_k) = self.lemma2_parts();
        let a = assemble_lemma2(&h, &e, &self.lambda, big_k)?;
        Ok(if self.family == FamilyId::Q { a.shift(1) } else { a })
    }

    /// Decomposition certificate for `(h, e, K)` with bound `c`.
    pub fn certificate(&self, c: f64, opts: &CertifyOptions) -> Result<Lemma2Certificate> {
        let (h, e, big_k) = self.lemma2_parts();
        lemma2_certificate_with(&h, &e, &self.lambda, big_k, c, opts)
    }
}

/// Splits `M_k`, `N_k` or `V_k` into `h_r` and `e_r` and checks that they
/// reassemble to it.
///
/// A mismatch above `2^{-prec/2}` is a construction bug and is reported
/// as [`Error::ReconstructionMismatch`].
pub fn decompose(family: FamilyId, k: usize, r: usize, prec: u32) -> Result<FamilyDecomposition> {
    let h_r = h_r_of(family, r, prec)?;
    let e_r = e_r_of(family, k, r, prec)?;
    let monic_base = build_monic(family, k, prec)?;
    let mut d = FamilyDecomposition {
        family,
        k,
        r,
        h_r,
        e_r,
        lambda: parity(k, prec),
        monic_base,
        reconstruction_error: 0.0,
    };
    let err = d.reassembled()?.relative_distance(&d.monic_base);
    let tol = default_tol(prec);
    if !(err <= tol) {
        return Err(Error::ReconstructionMismatch {
            what: format!("{family}_{k} with r = {r}"),
            error: err,
            tol,
        });
    }
    d.reconstruction_error = err;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    const P: u32 = 256;

    fn pi_pow(n: u32) -> Float {
        Float::with_val(P, pi(P).pow(n))
    }

    #[test]
    fn h4_p_matches_expansion() {
        let p = pi(P);
        let one = Float::with_val(P, 1);
        let want = Polynomial::from_floats(
            P,
            vec![
                Float::with_val(P, &pi_pow(6) * 2u32) / 945u32 - pi_pow(8) / 4725u32,
                Float::new(P),
                Float::with_val(P, &pi_pow(6) * 2u32) / 945u32 - pi_pow(4) / 45u32,
                Float::new(P),
                pi_pow(2) / 3u32 - pi_pow(4) / 45u32,
                -p.clone(),
                one + pi_pow(2) / 3u32,
                -p,
                Float::with_val(P, 1),
            ],
        );
        let got = h_r_of(FamilyId::P, 4, P).unwrap();
        assert!(got.relative_distance(&want) < 1e-70);
    }

    #[test]
    fn h2_q_matches_expansion() {
        let half_pi = pi(P) / 2u32;
        let want = Polynomial::from_floats(
            P,
            vec![
                Float::new(P),
                pi_pow(3) / 24u32 - half_pi.clone(),
                Float::with_val(P, 1),
                -half_pi,
                Float::with_val(P, 1),
            ],
        );
        assert!(h_r_of(FamilyId::Q, 2, P).unwrap().relative_distance(&want) < 1e-70);
    }

    #[test]
    fn h3_w_matches_expansion() {
        let seven = Float::with_val(P, &pi_pow(4) * 7u32) / 360u32;
        let want = Polynomial::from_floats(
            P,
            vec![
                seven.clone() - Float::with_val(P, &pi_pow(6) * 31u32) / 15120u32,
                Float::new(P),
                seven - pi_pow(2) / 6u32,
                Float::new(P),
                Float::with_val(P, 1) - pi_pow(2) / 6u32,
                Float::new(P),
                Float::with_val(P, 1),
            ],
        );
        assert!(h_r_of(FamilyId::W, 3, P).unwrap().relative_distance(&want) < 1e-70);
    }

    #[test]
    fn reconstruction_on_small_grid() {
        for (family, r, ks) in [
            (FamilyId::P, 4, 8..=16),
            (FamilyId::Q, 2, 5..=12),
            (FamilyId::W, 3, 6..=14),
        ] {
            for k in ks {
                let d = decompose(family, k, r, P).unwrap();
                assert!(d.reconstruction_error < 1e-60, "{family} k={k}: {:e}", d.reconstruction_error);
            }
        }
    }

    #[test]
    fn e_r_needs_k_above_2r() {
        assert!(e_r_of(FamilyId::P, 7, 4, P).is_err());
        assert!(e_r_of(FamilyId::P, 8, 4, P).is_ok());
        assert!(e_r_of(FamilyId::Q, 4, 2, P).is_err());
        assert!(e_r_of(FamilyId::W, 6, 3, P).is_ok());
        assert!(h_r_of(FamilyId::P, 1, P).is_err());
        assert!(h_r_of(FamilyId::Y, 2, P).is_err());
    }

    #[test]
    fn odd_k_middle_difference_vanishes() {
        for k in [9usize, 11, 13] {
            let e = e_r_of(FamilyId::P, k, 4, P).unwrap();
            assert_eq!(e.formal_degree(), k - 1);
            let s = sequences(FamilyId::P, k, P).unwrap();
            let mid = k.div_ceil(2);
            let gap = Float::with_val(P, &s.q[mid - 1] - &s.q[mid]).abs();
            assert!(gap < 1e-70);
        }
    }
}
