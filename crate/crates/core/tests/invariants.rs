use entloc::channels::{amplitude_damping, NoiseKind};
use entloc::entanglement::concurrence;
use entloc::linalg::{hermitian_eigs, partial_trace, psd_sqrt, Complex, ComplexMatrix};
use entloc::measurements::{apply_postselected, reversal_meas, weak_meas};
use entloc::states::DensityMatrix;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        ComplexMatrix::from_vec(n, n, v.into_iter().map(|(re, im)| Complex::new(re, im)).collect()).unwrap()
    })
}

/// `G G† / tr` for a random `G`: a generic full-rank density matrix.
fn density(n_qubits: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(1 << n_qubits).prop_map(|g| {
        let rho = g.matmul(&g.adjoint()).unwrap();
        let tr = rho.trace().re;
        rho.scale(1.0 / tr)
    })
}

fn unitary_2x2() -> impl Strategy<Value = ComplexMatrix> {
    (0.0f64..std::f64::consts::PI, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(t, a, b, c)| {
        let (ct, st) = ((t / 2.0).cos(), (t / 2.0).sin());
        let e = |x: f64| Complex::from_polar(1.0, x);
        ComplexMatrix::from_vec(2, 2, vec![e(a) * ct, -e(a + c) * st, e(a + b) * st, e(a + b + c) * ct]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(a in density(3), b in density(3), w in 0.0f64..1.0) {
        let mix = a.scale(w).add(&b.scale(1.0 - w)).unwrap();
        for traced in [[1usize], [2], [3]] {
            let lhs = partial_trace(&mix, 3, &traced).unwrap();
            let rhs = partial_trace(&a, 3, &traced).unwrap().scale(w)
                .add(&partial_trace(&b, 3, &traced).unwrap().scale(1.0 - w)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            prop_assert!((lhs.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace_and_reconstruct(rho in density(3)) {
        let eig = hermitian_eigs(&rho).unwrap();
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - rho.trace().re).abs() < 1e-12);
        prop_assert!(eig.reconstruct().max_abs_diff(&rho) < 1e-12);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn psd_sqrt_squares_back(rho in density(2)) {
        let s = psd_sqrt(&rho).unwrap();
        prop_assert!(s.matmul(&s).unwrap().max_abs_diff(&rho) < 1e-12);
        prop_assert!(s.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn channels_keep_states_physical(rho in density(3), d in 0.0f64..=1.0, q in 1usize..=3) {
        let state = DensityMatrix::new(rho, 1.0).unwrap();
        for kind in [NoiseKind::AmplitudeDamping, NoiseKind::Depolarizing, NoiseKind::PhaseDamping] {
            let ch = kind.channel(d).unwrap().unwrap();
            prop_assert!(ch.completeness_residual() < 1e-12);
            let out = ch.apply_on_qubit(&state, q).unwrap();
            let report = out.validate();
            prop_assert!(report.is_valid(), "{kind:?} {report:?}");
        }
    }

    #[test]
    fn channels_on_different_qubits_commute(rho in density(3), d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
        let state = DensityMatrix::new(rho, 1.0).unwrap();
        let a = NoiseKind::AmplitudeDamping.channel(d1).unwrap().unwrap();
        let b = NoiseKind::Depolarizing.channel(d2).unwrap().unwrap();
        let ab = b.apply_on_qubit(&a.apply_on_qubit(&state, 1).unwrap(), 2).unwrap();
        let ba = a.apply_on_qubit(&b.apply_on_qubit(&state, 2).unwrap(), 1).unwrap();
        prop_assert!(ab.matrix().max_abs_diff(ba.matrix()) < 1e-12);
    }

    #[test]
    fn amplitude_damping_composes(rho in density(1), d1 in 0.0f64..1.0, d2 in 0.0f64..1.0) {
        let twice = amplitude_damping(d2).unwrap()
            .apply_single(&amplitude_damping(d1).unwrap().apply_single(&rho).unwrap()).unwrap();
        let once = amplitude_damping(1.0 - (1.0 - d1) * (1.0 - d2)).unwrap().apply_single(&rho).unwrap();
        prop_assert!(twice.max_abs_diff(&once) < 1e-12);
    }

    #[test]
    fn postselection_chain_rule(rho in density(3), p in 0.0f64..0.99, q in 0.0f64..0.99) {
        let state = DensityMatrix::new(rho, 1.0).unwrap();
        let w = weak_meas(p).unwrap();
        let r = reversal_meas(q).unwrap();
        let first = apply_postselected(&w, &state, 1).unwrap();
        let second = apply_postselected(&r, &first.state, 2).unwrap();
        prop_assert!((second.state.weight() - first.success_prob * second.success_prob).abs() < 1e-12);

        // Postselections on different qubits commute, state and weight alike.
        let other = apply_postselected(&w, &apply_postselected(&r, &state, 2).unwrap().state, 1).unwrap();
        prop_assert!(other.state.matrix().max_abs_diff(second.state.matrix()) < 1e-12);
        prop_assert!((other.state.weight() - second.state.weight()).abs() < 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in density(2), u in unitary_2x2(), v in unitary_2x2()) {
        let uv = u.kron(&v);
        let rotated = uv.matmul(&rho).unwrap().matmul(&uv.adjoint()).unwrap();
        let a = concurrence(&rho).unwrap().value;
        let b = concurrence(&rotated).unwrap().value;
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
