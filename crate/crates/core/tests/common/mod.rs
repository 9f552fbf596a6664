#![allow(dead_code)]

use qkit_core::frames::{cs_frame, DiscreteMeasureSpace, FrameFamily};
use qkit_core::{Ket, Operator, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    Ket::new((0..dim).map(|_| random_c64(rng)).collect()).unwrap()
}

pub fn random_unit_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    loop {
        let k = random_ket(rng, dim);
        if k.norm() > 1e-3 {
            return k.normalized().unwrap();
        }
    }
}

pub fn random_operator(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    Operator::from_entries((0..dim * dim).map(|_| random_c64(rng)).collect()).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    random_operator(rng, dim).hermitian_part()
}

/// `n x d` complex matrix with orthonormal columns, as rows.
pub fn random_isometry(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<C64>> {
    assert!(n >= d);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    (0..n)
        .map(|i| (0..d).map(|k| cols[k][i]).collect())
        .collect()
}

/// A random rank-one density frame with `n` points in dimension `d`:
/// weights `|r_i|^2`, states `r_i / |r_i|` for the rows `r_i` of an isometry.
pub fn random_density_frame(rng: &mut ChaCha8Rng, n: usize, d: usize) -> FrameFamily {
    let rows = random_isometry(rng, n, d);
    let weights: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let functions: Vec<Vec<C64>> = (0..d)
        .map(|k| (0..n).map(|i| rows[i][k] / weights[i].sqrt()).collect())
        .collect();
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let space = DiscreteMeasureSpace::new(labels, weights).unwrap();
    cs_frame("random", space, &functions).unwrap()
}

pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    (a - b).max_abs()
}
