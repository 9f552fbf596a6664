mod common;

use nalgebra::DMatrix;
use qkit_core::symplectic::{
    classify, is_canonical, symplectic_complement, symplectic_frame, Subspace, SubspaceClass,
    SymplecticForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vectors(rng: &mut ChaCha8Rng, ambient: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..ambient).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

/// A subspace of random dimension, sometimes spanned with redundant vectors.
fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize) -> Subspace {
    let k = rng.gen_range(0..=ambient);
    let mut vectors = random_vectors(rng, ambient, k);
    if k > 0 && rng.gen_bool(0.3) {
        let combo: Vec<f64> = (0..ambient)
            .map(|i| vectors.iter().map(|v| v[i]).sum())
            .collect();
        vectors.push(combo);
    }
    Subspace::span(ambient, &vectors).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> SymplecticForm {
    loop {
        let m = DMatrix::from_fn(2 * n, 2 * n, |_, _| rng.gen_range(-1.0..1.0));
        let omega = m.transpose() * SymplecticForm::standard(n).matrix() * &m;
        if let Ok(form) = SymplecticForm::new(omega) {
            return form;
        }
    }
}

#[test]
fn complement_dimensions_add_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let form = random_form(&mut rng, n);
        let f = random_subspace(&mut rng, 2 * n);
        let perp = symplectic_complement(&form, &f).unwrap();
        assert_eq!(f.dim() + perp.dim(), 2 * n);
        let back = symplectic_complement(&form, &perp).unwrap();
        assert!(back.same_span(&f).unwrap());
    }
}

#[test]
fn complement_reverses_inclusion_and_swaps_sum_and_intersection() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let form = random_form(&mut rng, n);
        let f = random_subspace(&mut rng, 2 * n);
        let g = random_subspace(&mut rng, 2 * n);
        let fp = symplectic_complement(&form, &f).unwrap();
        let gp = symplectic_complement(&form, &g).unwrap();

        let sum = f.sum(&g).unwrap();
        let lhs = symplectic_complement(&form, &sum).unwrap();
        assert!(lhs.same_span(&fp.intersection(&gp).unwrap()).unwrap());

        let meet = f.intersection(&g).unwrap();
        let lhs = symplectic_complement(&form, &meet).unwrap();
        assert!(lhs.same_span(&fp.sum(&gp).unwrap()).unwrap());

        // F subset of F + G, so (F + G)^perp subset of F^perp
        let sp = symplectic_complement(&form, &sum).unwrap();
        assert!(f.is_subset_of(&sum).unwrap());
        assert!(sp.is_subset_of(&fp).unwrap());
    }
}

#[test]
fn symplectic_frames_satisfy_darboux_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let form = random_form(&mut rng, n);
        let frame = symplectic_frame(&form).unwrap();
        assert_eq!(frame.u.len(), n);
        assert!(frame.defect(&form).unwrap() <= 1e-10);
    }
}

#[test]
fn lagrangian_halves_of_darboux_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let form = random_form(&mut rng, n);
        let frame = symplectic_frame(&form).unwrap();
        let l = Subspace::new(2 * n, &frame.u).unwrap();
        assert_eq!(
            classify(&form, &l).unwrap().class(),
            SubspaceClass::Lagrangian
        );
        let pair = Subspace::new(2 * n, &[frame.u[0].clone(), frame.v[0].clone()]).unwrap();
        let c = classify(&form, &pair).unwrap();
        assert!(c.symplectic);
        if n == 1 {
            assert_eq!(c.class(), SubspaceClass::Coisotropic);
        } else {
            assert_eq!(c.class(), SubspaceClass::Symplectic);
        }
    }
}

fn shear(rng: &mut ChaCha8Rng, n: usize, upper: bool) -> DMatrix<f64> {
    let s = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let s = (&s + s.transpose()) * 0.5;
    let mut m = DMatrix::identity(2 * n, 2 * n);
    if upper {
        m.view_mut((0, n), (n, n)).copy_from(&s);
    } else {
        m.view_mut((n, 0), (n, n)).copy_from(&s);
    }
    m
}

#[test]
fn canonical_maps_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let form = SymplecticForm::standard(n);
        let s1 = shear(&mut rng, n, true) * shear(&mut rng, n, false);
        let s2 = shear(&mut rng, n, false) * shear(&mut rng, n, true);
        let c1 = is_canonical(&form, &s1, 1e-10).unwrap();
        let c2 = is_canonical(&form, &s2, 1e-10).unwrap();
        assert!(c1.canonical && c2.canonical);
        let c12 = is_canonical(&form, &(&s1 * &s2), 1e-8).unwrap();
        assert!(c12.canonical, "defect {:e}", c12.defect);
    }
}

#[test]
fn scaling_is_not_canonical() {
    let form = SymplecticForm::standard(2);
    let s = DMatrix::identity(4, 4) * 2.0;
    let c = is_canonical(&form, &s, 1e-10).unwrap();
    assert!(!c.canonical);
    assert!((c.defect - 3.0).abs() <= 1e-15);
}
