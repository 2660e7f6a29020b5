mod common;

use proptest::prelude::*;
use unicircle::poly::{
    construct_theorem1, default_tol, derivative_decomposition, detect_self_inversive, evaluate, star,
};
use unicircle::roots::{roots_of, unimodularity_tol};
use unicircle::{Coefficient, Polynomial};

const PREC: u32 = 192;

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 1..=max_len)
}

fn nonzero_ends(c: &[(f64, f64)]) -> bool {
    let first = c[0];
    let last = c[c.len() - 1];
    first.0.hypot(first.1) > 1e-3 && last.0.hypot(last.1) > 1e-3
}

fn unit(theta: f64) -> Coefficient {
    Coefficient::exp_i(&rug::Float::with_val(PREC, theta))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_an_involution(c in coeffs(10)) {
        prop_assume!(nonzero_ends(&c));
        let h = Polynomial::from_complex(PREC, &c);
        prop_assert_eq!(star(&star(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn star_evaluates_as_reflection(c in coeffs(9), zr in -2.0f64..2.0, zi in -2.0f64..2.0) {
        prop_assume!(zr.hypot(zi) > 0.1);
        let h = Polynomial::from_complex(PREC, &c);
        let n = h.formal_degree() as u64;
        let z = Coefficient::from_f64(PREC, zr, zi);
        let lhs = evaluate(&star(&h).unwrap(), &z);
        let rhs = &z.powu(n) * &evaluate(&h, &z.recip().conj()).conj();
        let scale = 1.0 + rhs.abs_f64();
        prop_assert!((&lhs - &rhs).abs_f64() <= scale * default_tol(PREC));
    }

    #[test]
    fn theorem1_output_is_self_inversive(c in coeffs(8), extra in 1usize..6, theta in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(nonzero_ends(&c));
        let h = Polynomial::from_complex(PREC, &c);
        let d = h.formal_degree() + extra;
        let lambda = unit(theta);
        let p = construct_theorem1(&h, d, &lambda).unwrap();
        let form = detect_self_inversive(&p, default_tol(PREC));
        prop_assert!(form.is_ok(), "{:?}", form.err());
        prop_assert!((form.unwrap().epsilon().abs_f64() - 1.0).abs() <= default_tol(PREC));
    }

    #[test]
    fn derivative_decomposition_round_trips(c in coeffs(8), extra in 1usize..6, theta in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(nonzero_ends(&c));
        let h = Polynomial::from_complex(PREC, &c);
        let p = construct_theorem1(&h, h.formal_degree() + extra, &unit(theta)).unwrap();
        let form = detect_self_inversive(&p, default_tol(PREC)).unwrap();
        let (h2, eps) = derivative_decomposition(&form).unwrap();
        let back = construct_theorem1(&h2, form.degree(), &eps).unwrap();
        prop_assert!(back.relative_distance(form.poly()) <= default_tol(PREC));
    }

    #[test]
    fn json_round_trip_is_exact(c in coeffs(12)) {
        let p = Polynomial::from_complex(PREC, &c);
        let text = serde_json::to_string(&p).unwrap();
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn roots_reconstruct_the_polynomial(c in coeffs(11)) {
        prop_assume!(nonzero_ends(&c) && c.len() >= 2);
        let p = Polynomial::from_complex(PREC, &c);
        let report = roots_of(&p).unwrap();
        prop_assert!(report.converged);
        let lead = p.leading_coefficient().unwrap().clone();
        let rebuilt = Polynomial::from_roots(PREC, &report.roots).scale(&lead);
        let d = p.formal_degree() as f64;
        let tol = d * 2f64.powi(-(PREC as i32) / 2 + 8);
        prop_assert!(rebuilt.relative_distance(&p) <= tol, "{}", rebuilt.relative_distance(&p));
    }

    #[test]
    fn real_polynomials_have_conjugate_closed_roots(c in prop::collection::vec(-4.0f64..4.0, 2..=11)) {
        prop_assume!(c[0].abs() > 1e-3 && c[c.len() - 1].abs() > 1e-3);
        let p = Polynomial::from_real(PREC, &c);
        let roots = roots_of(&p).unwrap().roots;
        for z in &roots {
            let best = roots.iter().map(|w| (w - &z.conj()).abs_f64()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-20, "{best:e}");
        }
    }

    #[test]
    fn self_inversive_roots_are_closed_under_reflection(c in coeffs(6), theta in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(nonzero_ends(&c));
        let h = Polynomial::from_complex(PREC, &c);
        let p = construct_theorem1(&h, h.formal_degree() + 2, &unit(theta)).unwrap();
        let roots = roots_of(&p).unwrap().roots;
        for z in &roots {
            let image = z.recip().conj();
            let best = roots.iter().map(|w| (w - &image).abs_f64()).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= 1e-15 * (1.0 + image.abs_f64()), "{best:e}");
        }
    }
}

#[test]
fn root_finding_is_deterministic() {
    let mut rng = common::rng(7);
    for n in [3, 8, 15] {
        let p = common::random_poly(&mut rng, n, PREC);
        let a = roots_of(&p).unwrap();
        let b = roots_of(&p).unwrap();
        assert_eq!(a.roots, b.roots);
        assert_eq!(a.iterations, b.iterations);
    }
}

#[test]
fn theorem1_with_inside_roots_is_unimodular() {
    let mut rng = common::rng(11);
    for n in 1..=6 {
        let h = common::inside_poly(&mut rng, n, PREC);
        let lambda = common::random_unit(&mut rng, PREC);
        for d in [n + 1, n + 4] {
            let p = construct_theorem1(&h, d, &lambda).unwrap();
            let (ok, dev) = unicircle::roots::unimodularity(&p, unimodularity_tol(PREC)).unwrap();
            assert!(ok, "n={n} d={d} dev={dev:e}");
        }
    }
}
