use super::sampling;
use super::*;
use crate::linalg::RandomStream;
use crate::measures::{
    c_max, ckw_residual, pair_concurrences, pairwise_report, pairwise_report_mixed,
    pairwise_report_pure, QuantumState,
};

fn generic_concurrences(psi: &PureState) -> Vec<f64> {
    pair_concurrences(psi).unwrap()
}

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn w_state_amplitudes_and_pairs() {
    let w = w_state(3).unwrap();
    let s = 1.0 / 3f64.sqrt();
    for (i, a) in w.amplitudes().iter().enumerate() {
        let want = if [1, 2, 4].contains(&i) { s } else { 0.0 };
        assert_close(a.re, want, 1e-15);
        assert_eq!(a.im, 0.0);
    }
    assert_close(generic_concurrences(&w_state(2).unwrap())[0], 1.0, 1e-10);
    let c4 = generic_concurrences(&w_state(4).unwrap());
    assert_eq!(c4.len(), 6);
    for c in &c4 {
        assert_close(*c, 0.5, 1e-10);
    }
    assert_close(c4.iter().sum(), 3.0, 1e-9);
    assert!(matches!(w_state(1), Err(Error::QubitCount(1))));
    assert!(w_state(6).is_err());
}

#[test]
fn ghz_state_pairs_vanish() {
    let r = pairwise_report_pure(&ghz_state(3).unwrap()).unwrap();
    assert_close(r.s_c, 0.0, 1e-12);
    assert_close(r.s_e, 0.0, 1e-12);
    assert_close(generic_concurrences(&ghz_state(2).unwrap())[0], 1.0, 1e-10);
    for c in generic_concurrences(&ghz_state(4).unwrap()) {
        assert_close(c, 0.0, 1e-12);
    }
    assert!(ghz_state(0).is_err());
}

#[test]
fn wclass_examples() {
    let s = 1.0 / 3f64.sqrt();
    let p = WClassParams::new([0.0, s, s, s]).unwrap();
    for c in wclass_closed_form(&p) {
        assert_close(c, 2.0 / 3.0, 1e-12);
    }
    let r = pairwise_report_pure(&wclass_state(&p).unwrap()).unwrap();
    assert_close(r.s_c, 2.0, 1e-9);

    let p = WClassParams::new([1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(wclass_closed_form(&p), [0.0; 3]);
    assert_eq!(wclass_state(&p).unwrap().amplitudes()[0].re, 1.0);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let p = WClassParams::new([0.0, 0.0, h, h]).unwrap();
    let closed = wclass_closed_form(&p);
    assert_eq!(closed.iter().filter(|c| **c > 1e-12).count(), 1);
    let generic = generic_concurrences(&wclass_state(&p).unwrap());
    for (a, b) in closed.iter().zip(&generic) {
        assert_close(*a, *b, 1e-8);
    }

    let p = WClassParams::new([0.2, 0.4, 0.6, 0.44f64.sqrt()]).unwrap();
    let generic = generic_concurrences(&wclass_state(&p).unwrap());
    for (a, b) in wclass_closed_form(&p).iter().zip(&generic) {
        assert_close(*a, *b, 1e-8);
    }
}

#[test]
fn wclass_rejects_bad_params() {
    assert!(WClassParams::new([0.5, 0.5, 0.5, 0.4]).is_err());
    assert!(WClassParams::new([-0.5, 0.5, 0.5, 0.5]).is_err());
    assert!(WClassParams::new([f64::NAN, 0.0, 0.0, 1.0]).is_err());
}

#[test]
fn wclass_oracle_agreement() {
    for k in 0..1000 {
        let p = sampling::wclass(&mut RandomStream::new(21, k));
        let generic = generic_concurrences(&wclass_state(&p).unwrap());
        for (a, b) in wclass_closed_form(&p).iter().zip(&generic) {
            assert_close(*a, *b, 1e-8);
        }
    }
}

#[test]
fn wclass_max_is_symmetric_point() {
    // coarse grid over the positive octant of (r1, r2, r3) with r0 = 0
    let steps = 60;
    let mut best = (f64::NEG_INFINITY, [0.0; 4]);
    for i in 0..=steps {
        for j in 0..=steps {
            let a = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
            let b = std::f64::consts::FRAC_PI_2 * j as f64 / steps as f64;
            let r = [0.0, a.sin() * b.cos(), a.sin() * b.sin(), a.cos()];
            let p = WClassParams::project(&r).unwrap();
            let sc: f64 = wclass_closed_form(&p).iter().sum();
            if sc > best.0 {
                best = (sc, p.r);
            }
        }
    }
    // refine with random perturbations
    let mut s = RandomStream::new(3, 0);
    let mut scale = 0.05;
    for _ in 0..20_000 {
        let trial: Vec<f64> = best.1.iter().map(|r| r + scale * s.normal()).collect();
        let p = WClassParams::project(&trial).unwrap();
        let sc: f64 = wclass_closed_form(&p).iter().sum();
        if sc > best.0 {
            best = (sc, p.r);
        } else {
            scale = (scale * 0.9995).max(1e-6);
        }
    }
    let s3 = 1.0 / 3f64.sqrt();
    assert_close(best.0, 2.0, 1e-6);
    for r in &best.1[1..] {
        assert_close(*r, s3, 1e-3);
    }
}

#[test]
fn acin_examples() {
    let w = AcinParams::w_point();
    for c2 in acin_closed_form(&w) {
        assert_close(c2, 4.0 / 9.0, 1e-12);
    }
    let r = pairwise_report_pure(&acin_state(&w).unwrap()).unwrap();
    assert_close(r.s_e, c_max(), 1e-9);

    let g = AcinParams::ghz_point();
    assert_eq!(acin_closed_form(&g), [0.0; 3]);
    let overlap = acin_state(&g).unwrap().inner(&ghz_state(3).unwrap());
    assert_close(overlap.norm(), 1.0, 1e-12);

    let prod = AcinParams::new([0.0, 0.0, 0.0, 0.0, 1.0], 0.0).unwrap();
    let psi = acin_state(&prod).unwrap();
    assert_eq!(psi.amplitudes()[7].re, 1.0);
    assert_close(pairwise_report_pure(&psi).unwrap().s_c, 0.0, 1e-12);
}

#[test]
fn acin_validation() {
    let s = 1.0 / 3f64.sqrt();
    assert!(AcinParams::new([s, 0.0, s, s, 0.0], std::f64::consts::PI).is_err());
    assert!(AcinParams::new([s, 0.0, s, s, 0.0], -0.1).is_err());
    assert!(AcinParams::new([s, 0.1, s, s, 0.0], 0.0).is_err());
    let p = AcinParams::project(&[1.0, -1.0, 1.0, 1.0, 0.0, 4.0]).unwrap();
    assert!(AcinParams::new(p.l, p.theta).is_ok());
    assert_close(p.theta, 4.0 - std::f64::consts::PI, 1e-15);
}

#[test]
fn acin_oracle_agreement() {
    for k in 0..1000 {
        let p = sampling::acin(&mut RandomStream::new(22, k));
        let generic = generic_concurrences(&acin_state(&p).unwrap());
        for (c2, c) in acin_closed_form(&p).iter().zip(&generic) {
            assert_close(c2.sqrt(), *c, 1e-6);
            assert_close(*c2, c * c, 1e-8);
        }
    }
}

#[test]
fn ghzclass_identity_is_ghz() {
    let p = GhzClassParams::identity();
    assert_close(p.r(), 1.0, 1e-15);
    let psi = ghzclass_state(&p).unwrap();
    assert_close(psi.inner(&ghz_state(3).unwrap()).norm(), 1.0, 1e-12);
    assert_close(ghzclass_sc_closed_form(&p).unwrap(), 0.0, 1e-15);
}

#[test]
fn ghzclass_symmetric_example() {
    let f = 2.0 * std::f64::consts::PI / 3.0;
    let p = GhzClassParams::new([1.0; 3], [1.0; 3], [0.0; 3], [f; 3]).unwrap();
    let closed = ghzclass_sc_closed_form(&p).unwrap();
    assert_close(closed, 9.0 / 7.0, 1e-12);
    let generic = pairwise_report_pure(&ghzclass_state(&p).unwrap())
        .unwrap()
        .s_c;
    assert_close(closed, generic, 1e-8);
}

#[test]
fn ghzclass_oracle_agreement_and_positive_tangle() {
    for k in 0..1000 {
        let p = sampling::ghzclass(&mut RandomStream::new(23, k));
        let psi = ghzclass_state(&p).unwrap();
        let generic = pairwise_report_pure(&psi).unwrap().s_c;
        assert_close(ghzclass_sc_closed_form(&p).unwrap(), generic, 1e-6);
        if k < 100 {
            assert!(ckw_residual(&psi, 0).unwrap() > 0.0);
        }
    }
}

#[test]
fn ghzclass_stays_below_two() {
    let mut worst: f64 = 0.0;
    for i in 1..400 {
        let f = std::f64::consts::PI * i as f64 / 400.0;
        for j in 1..40 {
            let g = std::f64::consts::PI * j as f64 / 40.0;
            let p = GhzClassParams::new([1.0; 3], [1.0; 3], [0.0; 3], [f, f, g]).unwrap();
            let sc = ghzclass_sc_closed_form(&p).unwrap();
            assert!(sc < 2.0, "sC = {sc} at φ = ({f}, {f}, {g})");
            worst = worst.max(sc);
        }
    }
    // approaching the singular corner φ → π pushes sC toward 2
    let near = std::f64::consts::PI - 1e-3;
    let p = GhzClassParams::new([1.0; 3], [1.0; 3], [0.0; 3], [near; 3]).unwrap();
    let sc = ghzclass_sc_closed_form(&p).unwrap();
    assert!(sc > 1.99 && sc < 2.0, "{sc}");
    assert!(worst > 1.9);
}

#[test]
fn ghzclass_rejects_singular_factor() {
    let r = GhzClassParams::new([1.0; 3], [1.0; 3], [0.0; 3], [0.0, 1.0, 1.0]);
    assert!(matches!(r, Err(Error::InvalidParameter(_))));
    assert!(GhzClassParams::new([0.0, 1.0, 1.0], [1.0; 3], [0.0; 3], [1.0; 3]).is_err());
}

#[test]
fn generalized_w_examples() {
    for n in 2..=5 {
        let a = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
        let p = GeneralizedWParams::new(1.0, a).unwrap();
        let psi = generalized_w_state(&p).unwrap();
        assert_close(psi.inner(&w_state(n).unwrap()).norm(), 1.0, 1e-12);
        assert_close(generalized_w_sc_closed_form(&p), (n - 1) as f64, 1e-12);
    }
    let a3 = vec![Complex64::new(1.0 / 3f64.sqrt(), 0.0); 3];
    let p0 = GeneralizedWParams::new(0.0, a3.clone()).unwrap();
    assert_eq!(generalized_w_state(&p0).unwrap().amplitudes()[0].re, 1.0);
    assert_eq!(generalized_w_sc_closed_form(&p0), 0.0);

    let half = GeneralizedWParams::new(0.5, a3).unwrap();
    assert_close(generalized_w_sc_closed_form(&half), 1.0, 1e-12);
    let generic: f64 = generic_concurrences(&generalized_w_state(&half).unwrap())
        .iter()
        .sum();
    assert_close(generic, 1.0, 1e-8);

    let a = vec![0.8, 0.6, 0.0]
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let p = GeneralizedWParams::new(0.7, a).unwrap();
    assert_close(generalized_w_sc_closed_form(&p), 0.672, 1e-12);
    let pairs: f64 = generalized_w_pair_closed_form(&p).iter().sum();
    assert_close(pairs, 0.672, 1e-12);
}

#[test]
fn generalized_w_validation() {
    let a = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    assert!(GeneralizedWParams::new(1.1, a.clone()).is_err());
    assert!(GeneralizedWParams::new(0.5, a[..1].to_vec()).is_err());
    assert!(GeneralizedWParams::new(0.5, vec![a[0]; 6]).is_err());
    assert!(GeneralizedWParams::new(0.5, vec![a[0]; 3]).is_err());
    assert!(GeneralizedWParams::new(0.5, a).is_ok());
}

#[test]
fn generalized_w_oracle_agreement() {
    for n in [3, 4] {
        for k in 0..500 {
            let p = sampling::generalized_w(&mut RandomStream::new(24 + n as u64, k), n).unwrap();
            let closed = generalized_w_pair_closed_form(&p);
            let generic = generic_concurrences(&generalized_w_state(&p).unwrap());
            for (a, b) in closed.iter().zip(&generic) {
                assert_close(*a, *b, 1e-8);
            }
            let sum: f64 = closed.iter().sum();
            assert_close(sum, generalized_w_sc_closed_form(&p), 1e-12);
        }
    }
}

#[test]
fn wbar_mixture_pairs() {
    for p1 in [0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
        let rho = wbar_mixture(p1).unwrap();
        let r = pairwise_report_mixed(&rho).unwrap();
        let want = wbar_mixture_closed_form(p1);
        for pair in r.pairs.as_array() {
            assert_close(pair.concurrence, want, 1e-8);
        }
    }
    let r = pairwise_report_mixed(&wbar_mixture(0.5).unwrap()).unwrap();
    assert_close(r.s_c, 1.0, 1e-8);
    assert!(wbar_mixture(1.5).is_err());
    assert_close(w_bar_state().inner(&w_state(3).unwrap()).norm(), 0.0, 1e-15);
}

#[test]
fn liu_state_sums() {
    let r = pairwise_report_pure(&liu_state()).unwrap();
    assert_close(r.eof_pair_sum(), 1.20175, 1e-4);
    assert_close(r.conc_pair_sum(), std::f64::consts::SQRT_2, 1e-6);
    assert_close(liu_state().norm_sq(), 1.0, 1e-15);
}

#[test]
fn named_families_build_with_defaults() {
    for f in FamilyName::ALL {
        let state = build_named(f, None).unwrap();
        assert_eq!(state.n_qubits(), Some(3), "{f}");
        assert_eq!(f.as_str().parse::<FamilyName>().unwrap(), f);
        pairwise_report(&state).unwrap();
    }
    let w = build_named(FamilyName::W, None).unwrap();
    assert_close(pairwise_report(&w).unwrap().s_c, 2.0, 1e-9);
    assert!(matches!(
        build_named(FamilyName::WBarMix, None).unwrap(),
        QuantumState::Mixed(_)
    ));
}

#[test]
fn named_family_params() {
    let v = serde_json::json!({ "p": 0.5, "a": [[0.6, 0.0], [0.0, 0.8]] });
    let s = build_named(FamilyName::GenW, Some(v)).unwrap();
    assert_eq!(s.n_qubits(), Some(2));
    let v = serde_json::json!({ "n": 4 });
    assert_eq!(
        build_named(FamilyName::Ghz, Some(v)).unwrap().n_qubits(),
        Some(4)
    );
    let bad = serde_json::json!({ "r": [1.0, 1.0, 0.0, 0.0] });
    assert!(build_named(FamilyName::WClass, Some(bad)).is_err());
    let unknown = serde_json::json!({ "q": 1 });
    assert!(build_named(FamilyName::Liu, Some(unknown)).is_err());
    let err = "xyz".parse::<FamilyName>().unwrap_err().to_string();
    assert!(err.contains("wbar-mix") && err.contains("ghzclass"));
}
