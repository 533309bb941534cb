//! Property tests of the numerical kernels and model invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use infoengine::instruments::{coarse_grain, groenewold_majorizes, refine_to_pure};
use infoengine::linalg::{eig_herm, from_coords, hs_inner, kron, to_coords, HermMat};
use infoengine::lp::{solve, LinearProgram};
use infoengine::models::make_classical;
use infoengine::random::{probability_vector, stochastic_matrix};
use infoengine::suites::{random_classical_instrument, random_classical_state};
use infoengine::thermo::{concavity_check, shannon_entropy, QuantumEntropy};
use infoengine::{ConditionalKernel, Instrument, State};

fn herm(dim: usize) -> impl Strategy<Value = HermMat> {
    prop::collection::vec(-1.0f64..1.0, dim * dim).prop_map(move |x| from_coords(dim, &x).unwrap())
}

fn qubit_state() -> impl Strategy<Value = HermMat> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y, z)| {
        let r = (x * x + y * y + z * z).sqrt().max(1.0);
        HermMat::qubit(x / r, y / r, z / r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coords_round_trip(a in herm(3)) {
        let back = from_coords(3, &to_coords(&a)).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-12);
    }

    #[test]
    fn hs_inner_is_symmetric_and_matches_coords(a in herm(3), b in herm(3)) {
        let ab = hs_inner(&a, &b).unwrap();
        prop_assert!((ab - hs_inner(&b, &a).unwrap()).abs() <= 1e-12);
        let dot: f64 = to_coords(&a).iter().zip(to_coords(&b)).map(|(x, y)| x * y).sum();
        prop_assert!((ab - dot).abs() <= 1e-12);
    }

    #[test]
    fn kron_factorizes_inner_products(a in herm(2), b in herm(2), c in herm(2), d in herm(2)) {
        let lhs = hs_inner(&kron(&a, &b), &kron(&c, &d)).unwrap();
        let rhs = hs_inner(&a, &c).unwrap() * hs_inner(&b, &d).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn eigen_reconstructs(a in herm(4)) {
        let e = eig_herm(&a).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&a) <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((e.values.iter().sum::<f64>() - a.trace()).abs() <= 1e-10);
    }

    #[test]
    fn shannon_bounded_by_log_n(seed in any::<u64>(), n in 1usize..8) {
        let p = probability_vector(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let h = shannon_entropy(&p).unwrap();
        prop_assert!(h >= 0.0 && h <= (n as f64).ln() + 1e-12);
    }

    #[test]
    fn qubit_entropy_is_concave(a in qubit_state(), b in qubit_state(), p in 0.0f64..1.0) {
        let oracle = QuantumEntropy { dim: 2 };
        let (sa, sb) = (State::from_coords_unchecked(to_coords(&a)), State::from_coords_unchecked(to_coords(&b)));
        prop_assert!(concavity_check(&sa, &sb, p, &oracle).unwrap().slack >= -1e-9);
    }

    #[test]
    fn lp_transport_is_feasible_and_consistent(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let supply = probability_vector(&mut rng, n);
        let demand = probability_vector(&mut rng, n);
        let mut lp = LinearProgram::new(n * n);
        lp.set_objective(probability_vector(&mut rng, n * n));
        for (i, s) in supply.iter().enumerate() {
            let row: Vec<(usize, f64)> = (0..n).map(|j| (i * n + j, 1.0)).collect();
            lp.add_eq_sparse(&row, *s);
        }
        for (j, d) in demand.iter().enumerate() {
            let col: Vec<(usize, f64)> = (0..n).map(|i| (i * n + j, 1.0)).collect();
            lp.add_eq_sparse(&col, *d);
        }
        let res = solve(&lp).unwrap();
        let x = res.point().expect("balanced transport is feasible");
        prop_assert!(lp.residual(x) <= 1e-9);
        prop_assert!(lp.bound_violation(x) <= 1e-9);
    }

    #[test]
    fn lp_detects_infeasibility(a in 0.1f64..1.0, b in 1.1f64..2.0) {
        let mut lp = LinearProgram::new(2);
        lp.add_eq(vec![1.0, 1.0], a);
        lp.add_eq(vec![1.0, 1.0], b);
        prop_assert!(!solve(&lp).unwrap().is_feasible());
    }

    #[test]
    fn coarse_grained_instruments_are_majorized(seed in any::<u64>(), n in 2usize..5, k in 2usize..4, m in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = make_classical(n).unwrap();
        let t = random_classical_instrument(&mut rng, n, k);
        let kernel = ConditionalKernel::new(stochastic_matrix(&mut rng, m, t.num_outcomes())).unwrap();
        let s: Instrument = coarse_grain(&space, &t, &kernel).unwrap().into();
        let rho = random_classical_state(&mut rng, n);
        prop_assert!(groenewold_majorizes(&space, &t, &s, &rho).unwrap().is_some());
        let pt = t.probabilities(&space, rho.coords()).unwrap();
        let ps = s.probabilities(&space, rho.coords()).unwrap();
        prop_assert!((ps.iter().sum::<f64>() - pt.iter().sum::<f64>()).abs() <= 1e-12);
    }

    #[test]
    fn refinement_preserves_outcome_statistics(seed in any::<u64>(), n in 2usize..5, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = make_classical(n).unwrap();
        let s = random_classical_instrument(&mut rng, n, k);
        let rho = random_classical_state(&mut rng, n);
        let t: Instrument = refine_to_pure(&space, &s, &rho).unwrap().into();
        prop_assert!(groenewold_majorizes(&space, &t, &s, &rho).unwrap().is_some());
        let total: f64 = t.probabilities(&space, rho.coords()).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}
