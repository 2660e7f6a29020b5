mod common;

use rand::Rng;
use unicircle::criteria::{
    cohn, lakatos, lakatos_losonczi_alpha, lakatos_losonczi_half, run, schinzel, schinzel_sum, smyth_inf_mu,
    smyth_value, CriteriaOptions,
};
use unicircle::families::build_p;
use unicircle::poly::{construct_theorem1, default_tol, detect_self_inversive};
use unicircle::roots::{unimodularity, unimodularity_tol};
use unicircle::{Coefficient, CriterionId, Polynomial, SelfInversiveForm};

const PREC: u32 = 192;

fn form(p: &Polynomial) -> SelfInversiveForm {
    detect_self_inversive(p, default_tol(PREC)).unwrap()
}

/// Self-inversive test corpus: random constructions (complex and real
/// reciprocal, roots of h inside or mixed), a few family members and
/// small hand-picked cases.
fn corpus() -> Vec<SelfInversiveForm> {
    let mut rng = common::rng(2024);
    let mut out = Vec::new();
    for i in 0..120 {
        let n = rng.gen_range(1..=6);
        let h = if i % 2 == 0 {
            common::inside_poly(&mut rng, n, PREC)
        } else {
            common::mixed_poly(&mut rng, n, PREC)
        };
        let d = n + rng.gen_range(1..=4);
        let lambda = common::random_unit(&mut rng, PREC);
        out.push(form(&construct_theorem1(&h, d, &lambda).unwrap()));
    }
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let c: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = Polynomial::from_real(PREC, &c);
        let d = n + rng.gen_range(1..=4);
        out.push(form(&construct_theorem1(&h, d, &Coefficient::one(PREC)).unwrap()));
    }
    for k in 2..=6 {
        out.push(form(&build_p(k, PREC).unwrap()));
    }
    for c in [
        &[1.0, 1.0, 1.0][..],
        &[1.0, 0.0, 1.0],
        &[1.0, -2.5, 1.0],
        &[1.0, 0.5, 0.5, 1.0],
        &[2.0, -1.0, 0.3, -1.0, 2.0],
    ] {
        out.push(form(&Polynomial::from_real(PREC, c)));
    }
    out
}

#[test]
fn sufficient_conditions_never_lie() {
    let opts = CriteriaOptions {
        mu_grid: 512,
        schinzel_mu_grid: 128,
        ..CriteriaOptions::for_precision(PREC)
    };
    let mut held = [0usize; 6];
    for f in corpus() {
        let (unimodular, dev) = unimodularity(f.poly(), unimodularity_tol(PREC)).unwrap();
        for (i, id) in CriterionId::ALL.into_iter().enumerate() {
            let v = run(&f, id, &opts).unwrap();
            if v.holds {
                held[i] += 1;
                assert!(unimodular, "{id} holds but max | |z| - 1 | = {dev:e} for {:?}", f.poly());
            }
            if id == CriterionId::Cohn {
                assert_eq!(v.holds, unimodular);
            }
        }
    }
    // every criterion fires somewhere in the corpus
    assert!(held.iter().all(|&n| n > 0), "{held:?}");
}

#[test]
fn lakatos_implies_schinzel_at_one_one() {
    let one = Coefficient::one(PREC);
    for f in corpus() {
        let v = lakatos(&f, f.tol());
        if !v.holds {
            continue;
        }
        let lead = f.poly().leading_coefficient().unwrap().abs_f64();
        let s = schinzel_sum(f.poly(), &one, &one).to_f64();
        assert!(s <= lead * (1.0 + 1e-30));
        assert!(schinzel(&f, 16, 20).holds);
    }
}

#[test]
fn alpha_one_matches_half_rule() {
    for f in corpus() {
        if !f.is_reciprocal() {
            continue;
        }
        let a = lakatos_losonczi_alpha(&f, 1.0).unwrap();
        let h = lakatos_losonczi_half(&f);
        assert_eq!(a.holds, h.holds);
        let scale = f.poly().l1_norm().to_f64();
        assert!((a.margin().unwrap() - 2.0 * h.margin().unwrap()).abs() <= 1e-40 * scale);
    }
}

#[test]
fn smyth_is_rotation_covariant() {
    let mut rng = common::rng(5);
    for f in corpus().into_iter().step_by(7) {
        let nu = common::random_unit(&mut rng, PREC);
        let rotated = form(&f.poly().compose_scale(&nu));
        let a = smyth_inf_mu(&f, 2048);
        let b = smyth_inf_mu(&rotated, 2048);
        let (ia, ib) = (a.inf_upper_bound.unwrap(), b.inf_upper_bound.unwrap());
        assert!((ia - ib).abs() <= 1e-9 * (1.0 + ia), "{ia} vs {ib}");
        let margin = a.margin().unwrap().abs();
        if margin > 1e-6 {
            assert_eq!(a.holds, b.holds);
        }
        // the rotated witness mu' = mu conj(nu) reproduces the value
        let mu = a.witness.unwrap().mu.unwrap();
        let moved = &mu * &nu.conj();
        let v = smyth_value(&rotated, &moved).unwrap().to_f64();
        assert!((v - ia).abs() <= 1e-30 * (1.0 + ia));
    }
}

#[test]
fn schinzel_witness_certifies_smyth() {
    for f in corpus() {
        let v = schinzel(&f, 64, 50);
        if !v.holds {
            continue;
        }
        let mu = v.witness.as_ref().unwrap().mu.clone().unwrap();
        let lead = f.poly().leading_coefficient().unwrap().abs_f64();
        let s = smyth_value(&f, &mu).unwrap().to_f64();
        assert!(s <= lead * (1.0 + 1e-30), "smyth {s} > |A_d| {lead}");
    }
}

#[test]
fn cohn_agrees_with_root_finding_on_mixed_inputs() {
    let mut rng = common::rng(99);
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let h = if i % 2 == 0 {
            common::inside_poly(&mut rng, n, PREC)
        } else {
            common::mixed_poly(&mut rng, n, PREC)
        };
        let d = n + rng.gen_range(1..=3);
        let lambda = common::random_unit(&mut rng, PREC);
        let f = form(&construct_theorem1(&h, d, &lambda).unwrap());
        let tol = unimodularity_tol(PREC);
        assert_eq!(cohn(&f, tol).unwrap().holds, unimodularity(f.poly(), tol).unwrap().0);
    }
}
