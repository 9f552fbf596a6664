mod common;

use common::*;
use qkit_core::frames::{
    overlap_probability, polygon_family_unchecked, polygon_frame, resolution_residual,
};
use qkit_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn polygon_frames_resolve_identity() {
    for n in 3..=100 {
        let frame = polygon_frame(n).unwrap();
        let r = resolution_residual(&frame);
        assert!(r <= 1e-12, "N = {n}: residual {r:e}");
    }
}

#[test]
fn two_point_polygon_fails() {
    assert_eq!(polygon_frame(2).unwrap_err(), Error::PolygonTooSmall(2));
    let bad = polygon_family_unchecked(2).unwrap();
    assert_eq!(resolution_residual(&bad), 1.0);
}

#[test]
fn polygon_overlap_depends_on_index_difference() {
    for n in [3usize, 5, 7, 12] {
        let frame = polygon_frame(n).unwrap();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|n0| overlap_probability(&frame, n0).unwrap().values().to_vec())
            .collect();
        for n0 in 0..n {
            for m in 0..n {
                let shifted = rows[(n0 + 1) % n][(m + 1) % n];
                assert!((rows[n0][m] - shifted).abs() <= 1e-12);
                let angle = 2.0 * PI * (n0 as f64 - m as f64) / n as f64;
                assert!((rows[n0][m] - angle.cos().powi(2)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn weighted_traces_sum_to_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let d = rng.gen_range(1..=5);
        let n = rng.gen_range(d..=d + 8);
        let frame = random_density_frame(&mut rng, n, d);
        assert!(frame.is_density());
        assert!(resolution_residual(&frame) <= 1e-12);
        let total: f64 = frame
            .operators()
            .iter()
            .zip(frame.space().weights())
            .map(|(m, w)| w * m.trace().re)
            .sum();
        assert!((total - d as f64).abs() <= 1e-10);
    }
}

#[test]
fn removing_a_point_breaks_resolution() {
    let frame = polygon_frame(5).unwrap();
    let sub = frame.without_point(0).unwrap();
    assert_eq!(sub.len(), 4);
    // the missing term is (2/5)|0><0|, largest entry 2/5
    assert!((resolution_residual(&sub) - 0.4).abs() <= 1e-15);
}
