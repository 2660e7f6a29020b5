//! Oracles and random generators shared by the integration tests.
//!
//! The oracles use constructions independent of the library: different
//! recurrences for Bernoulli and Euler numbers and a different series for
//! zeta(3).

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};
use unicircle::{Coefficient, Polynomial};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Akiyama-Tanigawa: yields B_n with B_1 = +1/2.
pub fn bernoulli_akiyama_tanigawa(n_max: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(n_max + 1);
    let mut out = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        a.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let d = Rational::from(&a[j - 1] - &a[j]);
            a[j - 1] = d * Integer::from(j);
        }
        out.push(a[0].clone());
    }
    out
}

/// Euler numbers E_n (E_0 = 1, E_2 = -1, E_4 = 5) from the Seidel
/// boustrophedon for the zigzag numbers: E_{2m} = (-1)^m zigzag(2m).
pub fn euler_seidel(n_max: usize) -> Vec<Integer> {
    let mut zigzag = vec![Integer::from(1)];
    let mut row = vec![Integer::from(1)];
    for n in 1..=n_max {
        let mut next = vec![Integer::new(); n + 1];
        for k in 1..=n {
            next[k] = Integer::from(&next[k - 1] + &row[n - k]);
        }
        zigzag.push(next[n].clone());
        row = next;
    }
    (0..=n_max)
        .map(|n| {
            if n % 2 == 1 {
                Integer::new()
            } else if (n / 2) % 2 == 0 {
                zigzag[n].clone()
            } else {
                -zigzag[n].clone()
            }
        })
        .collect()
}

/// zeta(3) from `(5/2) sum (-1)^{n+1} / (n^3 C(2n, n))`, summed until the
/// next term (which bounds the alternating tail) is below `2^{-prec-8}`.
/// Returns `(value, tail_bound)`.
pub fn zeta3_apery(prec: u32) -> (Float, Float) {
    let wp = prec + 32;
    let mut sum = Float::new(wp);
    let mut n = 1u32;
    loop {
        let mut term = Float::with_val(wp, Integer::from(Integer::binomial_u(2 * n, n)));
        term *= n * n;
        term *= n;
        term = term.recip();
        if term < Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8)) {
            let mut tail = term;
            tail *= 2.5;
            sum *= 2.5;
            return (sum, tail);
        }
        if n % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        n += 1;
    }
}

/// Direct summation of `n^{-s}` with the integral-test bracket
/// `(N+1)^{1-s}/(s-1) <= tail <= N^{1-s}/(s-1)`. Returns the bracket's
/// midpoint and half-width.
pub fn zeta_direct(s: u32, terms: u32, prec: u32) -> (Float, Float) {
    let mut sum = Float::new(prec);
    for n in 1..=terms {
        sum += Float::with_val(prec, n).pow(s).recip();
    }
    let tail = |m: u32| Float::with_val(prec, m).pow(s - 1).recip() / (s - 1);
    let lo = Float::with_val(prec, &sum + tail(terms + 1));
    let hi = Float::with_val(prec, &sum + tail(terms));
    let mid = Float::with_val(prec, &lo + &hi) / 2u32;
    let half = Float::with_val(prec, &hi - &lo) / 2u32;
    (mid, half)
}

pub fn random_unit(rng: &mut ChaCha8Rng, prec: u32) -> Coefficient {
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Coefficient::exp_i(&Float::with_val(prec, t))
}

/// A root of modulus in `[lo, hi)` with uniform angle.
pub fn random_root(rng: &mut ChaCha8Rng, lo: f64, hi: f64, prec: u32) -> Coefficient {
    let r: f64 = rng.gen_range(lo..hi);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Coefficient::from_f64(prec, r * t.cos(), r * t.sin())
}

pub fn random_coefficient(rng: &mut ChaCha8Rng, prec: u32) -> Coefficient {
    Coefficient::from_f64(prec, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `a * prod (z - root_i)` with `n` roots of modulus in `[lo, hi)` and a
/// random nonzero leading coefficient.
pub fn poly_with_roots(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64, prec: u32) -> Polynomial {
    let roots: Vec<Coefficient> = (0..n).map(|_| random_root(rng, lo, hi, prec)).collect();
    let lead = random_root(rng, 0.5, 2.0, prec);
    Polynomial::from_roots(prec, &roots).scale(&lead)
}

/// Polynomial of degree `n` with roots strictly inside the unit disk.
pub fn inside_poly(rng: &mut ChaCha8Rng, n: usize, prec: u32) -> Polynomial {
    poly_with_roots(rng, n, 0.0, 0.95, prec)
}

/// Polynomial of degree `n` with at least one root outside the closed disk.
pub fn mixed_poly(rng: &mut ChaCha8Rng, n: usize, prec: u32) -> Polynomial {
    let outside = rng.gen_range(1..=n);
    let mut roots: Vec<Coefficient> = (0..outside).map(|_| random_root(rng, 1.05, 3.0, prec)).collect();
    roots.extend((outside..n).map(|_| random_root(rng, 0.0, 0.95, prec)));
    let lead = random_root(rng, 0.5, 2.0, prec);
    Polynomial::from_roots(prec, &roots).scale(&lead)
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize, prec: u32) -> Polynomial {
    let mut coeffs: Vec<Coefficient> = (0..degree).map(|_| random_coefficient(rng, prec)).collect();
    coeffs.push(random_root(rng, 0.5, 1.0, prec));
    Polynomial::new(prec, coeffs)
}

/// zeta(s) for integer `s >= 2` by direct summation of the first `n - 1`
/// terms plus the Euler-Maclaurin tail at `n` with `m` correction terms.
/// The tail bound is twice the first omitted correction. Bernoulli numbers
/// come from [`bernoulli_akiyama_tanigawa`].
pub fn zeta_euler_maclaurin(s: u32, n: u32, m: usize, prec: u32) -> (Float, Float) {
    let wp = prec + 32;
    let b = bernoulli_akiyama_tanigawa(2 * m + 2);
    let mut sum = Float::new(wp);
    for i in 1..n {
        sum += Float::with_val(wp, i).pow(s).recip();
    }
    let big_n = Float::with_val(wp, n);
    // integral and half end term
    sum += Float::with_val(wp, (&big_n).pow(s - 1)).recip() / (s - 1);
    sum += Float::with_val(wp, (&big_n).pow(s)).recip() / 2u32;
    // -B_{2i}/(2i)! f^{(2i-1)}(N) with f^{(p)}(x) = (-1)^p (s)_p x^{-s-p}
    let correction = |i: usize| -> Float {
        let p = 2 * i as u32 - 1;
        let mut rising = Integer::from(1);
        for t in 0..p {
            rising *= s + t;
        }
        let mut v = Float::with_val(wp, Float::with_val(wp, (&big_n).pow(s + p)).recip() * &rising);
        v *= &b[2 * i];
        v /= Integer::from(Integer::factorial(2 * i as u32));
        v
    };
    for i in 1..=m {
        sum += correction(i);
    }
    let bound = Float::with_val(wp, correction(m + 1).abs() * 2u32);
    (sum, bound)
}
