mod common;

use common::*;
use proptest::prelude::*;
use qkit_core::hilbert::{eig_hermitian, expectation, inner, outer};
use qkit_core::{Ket, Operator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn inner_product_is_conjugate_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let dim = rng.gen_range(2..=16);
        let a = random_ket(&mut rng, dim);
        let b = random_ket(&mut rng, dim);
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() <= 1e-14 * (1.0 + ab.norm()));
    }
}

#[test]
fn pure_projectors_are_idempotent_hermitian_unit_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let dim = rng.gen_range(2..=16);
        let a = random_unit_ket(&mut rng, dim);
        let p = outer(&a, &a).unwrap();
        assert!(max_abs_diff(&(&p * &p), &p) <= 1e-12);
        assert!(p.hermiticity_defect() <= 1e-12);
        assert!((p.trace() - c(1.0, 0.0)).norm() <= 1e-12);
    }
}

#[test]
fn eigendecomposition_reconstructs_random_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let dim = rng.gen_range(2..=16);
        let a = random_hermitian(&mut rng, dim);
        let eig = eig_hermitian(&a, 1e-12).unwrap();
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let mut sum = Operator::zeros(dim);
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            sum = &sum + &outer(v, v).unwrap().scale_real(*lambda);
        }
        assert!(max_abs_diff(&sum, &a) <= 1e-10 * a.max_abs().max(1.0));
        for (i, vi) in eig.vectors.iter().enumerate() {
            for (j, vj) in eig.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((inner(vi, vj).unwrap() - c(target, 0.0)).norm() <= 1e-10);
            }
        }
    }
}

#[test]
fn eigensolver_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let a = random_hermitian(&mut rng, 12);
    let first = eig_hermitian(&a, 1e-12).unwrap();
    let second = eig_hermitian(&a, 1e-12).unwrap();
    assert_eq!(first.values, second.values);
    for (x, y) in first.vectors.iter().zip(&second.vectors) {
        assert_eq!(x.components(), y.components());
    }
}

#[test]
fn expectation_of_pure_state_matches_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let dim = rng.gen_range(2..=10);
        let phi = random_unit_ket(&mut rng, dim);
        let a = random_operator(&mut rng, dim);
        let state = outer(&phi, &phi).unwrap();
        let via_trace = expectation(&state, &a).unwrap();
        let via_ket = inner(&phi, &a.apply(&phi).unwrap()).unwrap();
        assert!((via_trace - via_ket).norm() <= 1e-12);
    }
}

proptest! {
    #[test]
    fn commutator_is_antisymmetric(seed in any::<u64>(), dim in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, dim);
        let b = random_operator(&mut rng, dim);
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!((&ab + &ba).max_abs() <= 1e-13);
        prop_assert!(ab.trace().norm() <= 1e-12);
    }

    #[test]
    fn trace_product_is_cyclic(seed in any::<u64>(), dim in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_operator(&mut rng, dim);
        let b = random_operator(&mut rng, dim);
        let ab = a.trace_product(&b).unwrap();
        let ba = b.trace_product(&a).unwrap();
        prop_assert!((ab - ba).norm() <= 1e-12);
        prop_assert!((ab - (&a * &b).trace()).norm() <= 1e-12);
    }

    #[test]
    fn normalized_kets_are_unit(re in prop::collection::vec(-5.0f64..5.0, 2..10)) {
        prop_assume!(re.iter().any(|x| x.abs() > 1e-3));
        let k = Ket::from_real(&re).unwrap().normalized().unwrap();
        prop_assert!(k.is_unit());
    }
}
