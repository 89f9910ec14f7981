mod common;

use common::{c, local_unitary, random_two_qubit_state, unitary2, werner};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use pulse_tangle::linalg::{kron, ComplexMatrix};
use pulse_tangle::measures::min_partial_transpose_eigenvalue;
use pulse_tangle::{partial_trace, ppt_separable, pure_tangle, wootters_tangle, DensityOperator, PureState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn werner_tangle_matches_closed_form() {
    for p in [0.2, 0.5, 0.9] {
        let t = wootters_tangle(&werner(p)).unwrap().value();
        let expected = ((3.0 * p - 1.0) / 2.0f64).max(0.0).powi(2);
        assert!((t - expected).abs() < 1e-10, "p={p}: {t} vs {expected}");
    }
    assert!((wootters_tangle(&werner(0.9)).unwrap().value() - 0.7225).abs() < 1e-10);
}

#[test]
fn wootters_agrees_with_pure_tangle_on_pure_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let amps: Vec<C64> = (0..4).map(|_| common::random_complex(&mut rng)).collect();
        let psi = PureState::new(amps, vec![2, 2]).unwrap().normalized().unwrap();
        let mixed = wootters_tangle(&DensityOperator::from_pure(&psi)).unwrap().value();
        let pure = pure_tangle(&psi).unwrap().value();
        assert!((mixed - pure).abs() < 1e-9, "{mixed} vs {pure}");
    }
}

#[test]
fn ppt_agrees_with_concurrence_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut separable, mut entangled) = (0, 0);
    for k in 0..1000 {
        let rho = random_two_qubit_state(&mut rng, 1 + k % 4);
        let t = wootters_tangle(&rho).unwrap().value();
        if ppt_separable(&rho).unwrap() {
            assert!(t < 1e-9, "PPT state with tangle {t}");
            separable += 1;
        } else {
            assert!(t > 0.0, "NPT state with zero tangle");
            entangled += 1;
        }
    }
    assert!(separable > 50 && entangled > 50, "{separable} separable, {entangled} entangled");
}

/// (1−ε)|ψ⟩⟨ψ| + ε(|e1⟩⟨e1| + |g0⟩⟨g0|)/2 with |ψ⟩ ∝ (1−ξ/2)|g1⟩ + √ξ|e0⟩.
fn jump_mixture(xi: f64, eps: f64) -> DensityOperator {
    let psi = PureState::new(vec![c(xi.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 - xi / 2.0, 0.0)], vec![2, 2])
        .unwrap()
        .normalized()
        .unwrap();
    let mut m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()).scale(c(1.0 - eps, 0.0));
    m[(1, 1)] += c(eps / 2.0, 0.0);
    m[(2, 2)] += c(eps / 2.0, 0.0);
    DensityOperator::new(m, vec![2, 2]).unwrap()
}

#[test]
fn jump_mixture_separability_boundary() {
    let sep = jump_mixture(0.01, 0.2);
    assert!(ppt_separable(&sep).unwrap());
    assert_eq!(wootters_tangle(&sep).unwrap().value(), 0.0);

    let ent = jump_mixture(0.04, 0.05);
    assert!(!ppt_separable(&ent).unwrap());
    assert!(min_partial_transpose_eigenvalue(&ent).unwrap() < -1e-3);
    assert!(wootters_tangle(&ent).unwrap().value() > 0.0);
}

#[test]
fn bell_and_product_states() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let bells = [
        [c(h, 0.0), z, z, c(h, 0.0)],
        [c(h, 0.0), z, z, c(-h, 0.0)],
        [z, c(h, 0.0), c(h, 0.0), z],
        [z, c(h, 0.0), c(0.0, -h), z],
    ];
    for b in bells {
        let psi = PureState::new(b.to_vec(), vec![2, 2]).unwrap();
        assert!((wootters_tangle(&DensityOperator::from_pure(&psi)).unwrap().value() - 1.0).abs() < 1e-10);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = partial_trace(&random_two_qubit_state(&mut rng, 2), 0).unwrap();
        let b = partial_trace(&random_two_qubit_state(&mut rng, 3), 1).unwrap();
        let product = DensityOperator::new(kron(a.matrix(), b.matrix()), vec![2, 2]).unwrap();
        assert!(wootters_tangle(&product).unwrap().value() < 1e-10);
        assert!(ppt_separable(&product).unwrap());
    }
}

fn rotation() -> impl Strategy<Value = ComplexMatrix> {
    (0.0..std::f64::consts::PI, 0.0..6.3f64, 0.0..6.3f64, 0.0..6.3f64).prop_map(|(a, b, c, d)| unitary2(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tangle_is_invariant_under_local_unitaries(seed in any::<u64>(), rank in 1usize..=4, u in rotation(), v in rotation()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_two_qubit_state(&mut rng, rank);
        let w = local_unitary(&u, &v);
        let mut rotated = &(&w * rho.matrix()) * &w.dagger();
        rotated.hermitize();
        let rotated = DensityOperator::new(rotated, vec![2, 2]).unwrap();
        let before = wootters_tangle(&rho).unwrap().value();
        let after = wootters_tangle(&rotated).unwrap().value();
        prop_assert!((before - after).abs() < 1e-9, "{} vs {}", before, after);
    }

    #[test]
    fn partial_trace_recovers_product_factors(
        a in proptest::collection::vec(-1.0..1.0f64, 8),
        b in proptest::collection::vec(-1.0..1.0f64, 18),
    ) {
        let factor = |x: &[f64], n: usize| {
            let m = ComplexMatrix::from_vec(n, n, x.chunks(2).map(|p| c(p[0], p[1])).collect()).unwrap();
            let mut rho = &m * &m.dagger();
            let tr = rho.trace().re;
            rho = rho.scale(c(1.0 / tr, 0.0));
            rho.hermitize();
            rho
        };
        let (ra, rb) = (factor(&a, 2), factor(&b, 3));
        let joint = DensityOperator::new(kron(&ra, &rb), vec![2, 3]).unwrap();
        prop_assert!(partial_trace(&joint, 0).unwrap().matrix().max_abs_diff(&ra) < 1e-12);
        prop_assert!(partial_trace(&joint, 1).unwrap().matrix().max_abs_diff(&rb) < 1e-12);
    }

    #[test]
    fn tangle_lies_in_unit_interval(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = wootters_tangle(&random_two_qubit_state(&mut rng, rank)).unwrap().value();
        prop_assert!((0.0..=1.0).contains(&t));
    }
}
