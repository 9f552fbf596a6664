use qkit_core::grid::{
    averaging_matrix, commutator_closed_form, commutator_residual, gaussian_profile,
    momentum_operator, position_operator, Boundary, Grid,
};
use qkit_core::C64;

fn fitted_order(ns: &[usize], residuals: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    -num / den
}

#[test]
fn smooth_profiles_converge_at_second_order() {
    let ns = [64usize, 128, 256, 512];
    for boundary in [Boundary::Periodic, Boundary::Dirichlet] {
        let residuals: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let g = Grid::new(n, -8.0, 8.0, boundary, 1.0).unwrap();
                let psi = gaussian_profile(&g, 0.0, 1.0).unwrap();
                commutator_residual(&g, &psi).unwrap()
            })
            .collect();
        let order = fitted_order(&ns, &residuals);
        assert!((order - 2.0).abs() <= 0.2, "{boundary}: order {order}");
    }
}

#[test]
fn dirichlet_commutator_is_scaled_average() {
    for n in [8usize, 17, 64] {
        let g = Grid::new(n, -3.0, 5.0, Boundary::Dirichlet, 0.7).unwrap();
        let comm = position_operator(&g)
            .commutator(&momentum_operator(&g))
            .unwrap();
        let expected = averaging_matrix(&g).scale(C64::new(0.0, 0.7));
        assert!((&comm - &expected).max_abs() <= 1e-14);
    }
}

#[test]
fn periodic_commutator_matches_closed_form() {
    for n in [8usize, 33, 128] {
        let g = Grid::new(n, -8.0, 8.0, Boundary::Periodic, 1.0).unwrap();
        let comm = position_operator(&g)
            .commutator(&momentum_operator(&g))
            .unwrap();
        let scale = comm.max_abs().max(1.0);
        assert!((&comm - &commutator_closed_form(&g)).max_abs() <= 1e-14 * scale);
    }
}

#[test]
fn operators_are_exactly_hermitian() {
    for boundary in [Boundary::Periodic, Boundary::Dirichlet] {
        let g = Grid::new(50, -2.0, 3.0, boundary, 1.3).unwrap();
        assert_eq!(position_operator(&g).hermiticity_defect(), 0.0);
        assert_eq!(momentum_operator(&g).hermiticity_defect(), 0.0);
    }
}
