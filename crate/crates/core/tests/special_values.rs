mod common;

use rug::{Float, Integer, Rational};
use unicircle::special::{
    bernoulli, eta, eta0, eta0_even, eta_even, euler_number, l_chi4, zeta, zeta_even,
};

#[test]
fn bernoulli_matches_akiyama_tanigawa() {
    let oracle = common::bernoulli_akiyama_tanigawa(80);
    for (n, want) in oracle.iter().enumerate() {
        let got = bernoulli(n as i64).unwrap();
        let want = if n == 1 { -want.clone() } else { want.clone() };
        assert_eq!(got.as_rational(), &want, "B_{n}");
    }
}

#[test]
fn euler_matches_boustrophedon() {
    let oracle = common::euler_seidel(80);
    for (n, want) in oracle.iter().enumerate() {
        let got = euler_number(n as i64).unwrap();
        assert_eq!(got.as_rational(), &Rational::from(want.clone()), "E_{n}");
    }
}

#[test]
fn negative_indices_are_rejected() {
    assert!(bernoulli(-1).is_err());
    assert!(euler_number(-2).is_err());
}

#[test]
fn zeta3_matches_apery_series() {
    for prec in [128, 256] {
        let (want, tail) = common::zeta3_apery(prec);
        let got = zeta(3.0, prec).unwrap();
        let gap = Float::with_val(prec + 32, &got.value - &want).abs();
        let allowed = Float::with_val(prec + 32, &got.error_bound + &tail) + Float::with_val(64, Float::i_exp(1, 4 - prec as i32));
        assert!(gap <= allowed, "prec {prec}: gap {gap}");
    }
}

#[test]
fn zeta4_matches_direct_summation() {
    let (mid, half) = common::zeta_direct(4, 20_000, 128);
    let got = zeta(4.0, 128).unwrap().value;
    let gap = Float::with_val(128, &got - &mid).abs();
    assert!(gap <= half, "gap {gap}, bracket {half}");
}

#[test]
fn bernoulli_zeta_identity() {
    let prec = 192;
    for j in 1..=30u32 {
        let b = bernoulli(2 * j as i64).unwrap().to_float(prec);
        let mut lhs = b;
        lhs /= Integer::from(Integer::factorial(2 * j));
        let z = zeta(2.0 * j as f64, prec).unwrap().value;
        let mut two_pi = Float::with_val(prec, rug::float::Constant::Pi);
        two_pi *= 2;
        let mut rhs = z * 2u32;
        rhs /= Float::with_val(prec, rug::ops::Pow::pow(&two_pi, 2 * j));
        if j % 2 == 0 {
            rhs = -rhs;
        }
        let rel = Float::with_val(prec, &lhs - &rhs).abs() / rhs.abs();
        assert!(rel < Float::with_val(64, Float::i_exp(1, -120)), "j = {j}: {rel}");
    }
}

#[test]
fn zeta_routes_agree_at_even_arguments() {
    for two_k in (2..=40).step_by(2) {
        let a = zeta(two_k as f64, 192).unwrap();
        let b = zeta_even(two_k, 192).unwrap();
        let gap = Float::with_val(192, &a.value - &b.value).abs();
        let budget = Float::with_val(192, &a.error_bound + &b.error_bound);
        assert!(gap <= budget, "zeta({two_k}): {gap} > {budget}");
    }
}

#[test]
fn zeta_and_eta_windows() {
    let prec = 256;
    for n in 2..=64u32 {
        let s = n as f64;
        let one = Float::with_val(prec, 1);
        let tiny = Float::with_val(prec, Float::i_exp(1, -(n as i32)));
        let z = zeta(s, prec).unwrap().value;
        let mut z_hi = Float::with_val(prec, (n + 1) as f64 / (n - 1) as f64);
        z_hi *= &tiny;
        z_hi += 1;
        assert!(z > one && z < z_hi, "zeta({n})");
        let e0 = eta0(s, prec).unwrap().value;
        assert!(e0 > one && e0 < Float::with_val(prec, &one + &tiny), "eta0({n})");
        let e = eta(s, prec).unwrap().value;
        let e_lo = Float::with_val(prec, &one - Float::with_val(prec, &tiny * 2u32));
        assert!(e > e_lo && e < one, "eta({n})");
    }
}

#[test]
fn eta_routes_agree_at_even_arguments() {
    for two_k in (2..=30).step_by(2) {
        let s = two_k as f64;
        for (a, b) in [
            (eta(s, 160).unwrap(), eta_even(two_k, 160).unwrap()),
            (eta0(s, 160).unwrap(), eta0_even(two_k, 160).unwrap()),
        ] {
            let gap = Float::with_val(160, &a.value - &b.value).abs();
            assert!(gap <= Float::with_val(160, &a.error_bound + &b.error_bound));
        }
    }
    assert_eq!(eta_even(0, 64).unwrap().to_f64(), 0.5);
    assert_eq!(eta0_even(0, 64).unwrap().to_f64(), 0.0);
}

#[test]
fn l_chi4_closed_forms() {
    let prec = 160;
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let l1 = l_chi4(1, prec).unwrap();
    let gap = Float::with_val(prec, &l1.value - Float::with_val(prec, &pi / 4u32)).abs();
    assert!(gap < 1e-45);
    let l3 = l_chi4(3, prec).unwrap();
    let want = Float::with_val(prec, rug::ops::Pow::pow(&pi, 3u32)) / 32u32;
    assert!(Float::with_val(prec, &l3.value - &want).abs() < 1e-45);
    // Leibniz partial sums bracket L(1) from both sides.
    let mut partial = 0.0;
    for n in 0..1000 {
        partial += if n % 2 == 0 { 1.0 } else { -1.0 } / (2 * n + 1) as f64;
    }
    assert!((partial - l1.to_f64()).abs() < 1.0 / 2001.0);
    assert!(l_chi4(2, prec).is_err());
}

#[test]
fn error_bounds_shrink_with_precision() {
    for s in [3.0, 5.0, 7.5, 21.0] {
        let mut last: Option<Float> = None;
        for prec in [64, 128, 256, 512] {
            let v = zeta(s, prec).unwrap();
            assert!(v.error_bound.is_finite() && v.error_bound >= 0);
            assert!(v.error_bound <= Float::with_val(64, Float::i_exp(1, 4 - prec as i32)));
            if let Some(prev) = &last {
                assert!(v.error_bound <= *prev, "zeta({s}) at {prec}");
            }
            last = Some(v.error_bound);
        }
    }
}

#[test]
fn invalid_arguments_are_errors() {
    assert!(zeta(1.0, 64).is_err());
    assert!(zeta(0.5, 64).is_err());
    assert!(zeta_even(3, 64).is_err());
    assert!(eta0(1.0, 64).is_err());
}
