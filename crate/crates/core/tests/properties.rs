use monogamy_lab::linalg::{
    apply_local_unitaries, haar_random_pure, hermitian_eigenvalues, partial_trace,
    random_local_unitary, DensityMatrix, PureState, RandomStream,
};
use monogamy_lab::measures::{
    c_max, ckw_residual, eof_from_concurrence, pairwise_report_mixed, pairwise_report_pure,
    MeasureReport,
};
use monogamy_lab::search::{monte_carlo_max, Objective, ObjectiveName};
use proptest::prelude::*;

fn haar(n: usize, seed: u64) -> PureState {
    haar_random_pure(n, &mut RandomStream::new(seed, 0)).unwrap()
}

fn fields(r: &MeasureReport) -> Vec<f64> {
    let mut v: Vec<f64> = r
        .pairs
        .as_array()
        .iter()
        .flat_map(|p| [p.concurrence, p.eof])
        .collect();
    v.extend([r.s_c, r.s_e]);
    let t = r.tangle_residuals.as_ref().unwrap();
    v.extend([t.a, t.b, t.c]);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_keeps_unit_trace(seed in any::<u64>(), n in 2usize..=5, mask in 1u32..31) {
        let psi = haar(n, seed);
        let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let rho = psi.reduced(&keep).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_composes(seed in any::<u64>()) {
        // tracing out B and then C equals tracing out {B, C}
        let rho = haar(3, seed).projector();
        let ac = partial_trace(&rho, 3, &[0, 2]).unwrap();
        let a_stepwise = partial_trace(&ac, 2, &[0]).unwrap();
        let a_direct = partial_trace(&rho, 3, &[0]).unwrap();
        let diff = (a_stepwise.matrix() - a_direct.matrix()).norm();
        prop_assert!(diff < 1e-12, "diff {diff}");
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), n in 1usize..=3) {
        let psi = haar(4, seed);
        let keep: Vec<usize> = (0..n).collect();
        let rho = psi.reduced(&keep).unwrap();
        let vals = hermitian_eigenvalues(rho.matrix()).unwrap();
        prop_assert!((vals.iter().sum::<f64>() - rho.trace()).abs() < 1e-12);
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn report_is_local_unitary_invariant(seed in any::<u64>()) {
        let psi = haar(3, seed);
        let mut s = RandomStream::new(seed, 1);
        let us = [random_local_unitary(&mut s), random_local_unitary(&mut s), random_local_unitary(&mut s)];
        let phi = apply_local_unitaries(&psi, &us).unwrap();
        let a = fields(&pairwise_report_pure(&psi).unwrap());
        let b = fields(&pairwise_report_pure(&phi).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn report_sums_are_consistent(seed in any::<u64>()) {
        let r = pairwise_report_pure(&haar(3, seed)).unwrap();
        let pairs = r.pairs.as_array();
        let s_c: f64 = pairs.iter().map(|p| p.concurrence).sum();
        prop_assert!((r.s_c - s_c).abs() < 1e-12);
        prop_assert!((r.discord_sum.unwrap() - 2.0 * r.s_e).abs() < 1e-12);
        for p in pairs {
            prop_assert!((p.eof - eof_from_concurrence(p.concurrence)).abs() < 1e-12);
        }
        prop_assert!(r.s_e <= c_max() + 1e-6);
        prop_assert!(r.s_c <= 2.0 + 1e-9);
    }

    #[test]
    fn ckw_residual_is_nonnegative(seed in any::<u64>(), pivot in 0usize..3) {
        let r = ckw_residual(&haar(3, seed), pivot).unwrap();
        prop_assert!(r >= -1e-8, "residual {r}");
    }

    #[test]
    fn mixed_states_respect_c_max(seed in any::<u64>(), rank in 1usize..=4, w in prop::array::uniform4(0.01f64..1.0)) {
        let states: Vec<PureState> = (0..rank as u64)
            .map(|k| haar_random_pure(3, &mut RandomStream::new(seed, k)).unwrap())
            .collect();
        let total: f64 = w[..rank].iter().sum();
        let components: Vec<(f64, &PureState)> =
            states.iter().zip(&w[..rank]).map(|(s, x)| (x / total, s)).collect();
        let rho = DensityMatrix::mixture(&components).unwrap();
        let r = pairwise_report_mixed(&rho).unwrap();
        prop_assert!(r.s_e <= c_max() + 1e-6, "sE {}", r.s_e);
        prop_assert!(r.s_c <= 2.0 + 1e-9, "sC {}", r.s_c);
    }
}

#[test]
fn monte_carlo_se_stays_below_c_max() {
    let res = monte_carlo_max(Objective::three(ObjectiveName::SE), 100_000, 0, false).unwrap();
    eprintln!("Monte Carlo max sE over 1e5 samples: {}", res.best_value);
    assert!(res.best_value <= 1.650143 + 1e-6);
    assert!(res.best_value >= 1.55, "best {}", res.best_value);
}
