//! Canonical quantization on a uniform 1-D grid: `q = x`, `p = -i hbar d/dx`
//! with centered differences.
//!
//! For any diagonal `q` and the centered stencil,
//! `([q, p] psi)_j = -i hbar / (2h) [(x_j - x_{j+1}) psi_{j+1} + (x_{j-1} - x_j) psi_{j-1}]`.
//! Between neighbouring nodes `x_{j+1} - x_j = h`, which gives the averaging
//! identity `[q, p] = i hbar Avg`. On a periodic grid the two wrap-around
//! couplings join `x_0` and `x_{m-1}`, whose separation is `(m-1) h`, so
//! those two entries read `-i hbar (m-1)/2` instead of `i hbar / 2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{Ket, Operator, C64};

/// Boundary treatment of the difference stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Periodic => "periodic",
            Self::Dirichlet => "dirichlet",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `n_points` cells of width `h = (b - a)/n_points` with nodes at the
/// midpoints `x_j = a + (j + 1/2) h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_points: usize,
    a: f64,
    b: f64,
    boundary: Boundary,
    hbar: f64,
}

impl Grid {
    pub fn new(n_points: usize, a: f64, b: f64, boundary: Boundary, hbar: f64) -> Result<Self> {
        if n_points < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 points, got {n_points}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if !(hbar >= 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidGrid(format!("hbar must be >= 0, got {hbar}")));
        }
        Ok(Self {
            n_points,
            a,
            b,
            boundary,
            hbar,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / self.n_points as f64
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points)
            .map(|j| self.a + (j as f64 + 0.5) * h)
            .collect()
    }

    /// `(j, k, value)` entries of the real antisymmetric first-difference matrix `D`.
    fn stencil(&self) -> Vec<(usize, usize, f64)> {
        let m = self.n_points;
        let c = 1.0 / (2.0 * self.spacing());
        let mut out = Vec::with_capacity(2 * m);
        for j in 0..m {
            match (j + 1 < m, self.boundary) {
                (true, _) => out.push((j, j + 1, c)),
                (false, Boundary::Periodic) => out.push((j, 0, c)),
                (false, Boundary::Dirichlet) => {}
            }
            match (j > 0, self.boundary) {
                (true, _) => out.push((j, j - 1, -c)),
                (false, Boundary::Periodic) => out.push((j, m - 1, -c)),
                (false, Boundary::Dirichlet) => {}
            }
        }
        out
    }
}

/// `diag(x_j)`.
pub fn position_operator(g: &Grid) -> Operator {
    Operator::diagonal_real(&g.nodes())
}

/// `-i hbar D` with the centered stencil; exactly Hermitian.
pub fn momentum_operator(g: &Grid) -> Operator {
    let m = g.n_points;
    let mut entries = vec![C64::new(0.0, 0.0); m * m];
    for (j, k, d) in g.stencil() {
        entries[j * m + k] = C64::new(0.0, -g.hbar * d);
    }
    Operator::from_entries(entries).expect("square by construction")
}

/// Nearest-neighbour averaging `(psi_{j+1} + psi_{j-1}) / 2` with the grid's
/// boundary rule.
pub fn averaging_matrix(g: &Grid) -> Operator {
    let m = g.n_points;
    let mut entries = vec![C64::new(0.0, 0.0); m * m];
    for (j, k, _) in g.stencil() {
        entries[j * m + k] = C64::new(0.5, 0.0);
    }
    Operator::from_entries(entries).expect("square by construction")
}

/// `[q, p]` in closed form: `i hbar Avg`, with the wrap-around entries of a
/// periodic grid replaced by `-i hbar (m-1)/2`.
pub fn commutator_closed_form(g: &Grid) -> Operator {
    let m = g.n_points;
    let mut out = averaging_matrix(g).scale(C64::new(0.0, g.hbar));
    if g.boundary == Boundary::Periodic {
        let seam = C64::new(0.0, -g.hbar * (m as f64 - 1.0) / 2.0);
        let mut entries = out.entries().to_vec();
        entries[(m - 1) * m] = seam;
        entries[m - 1] = seam;
        out = Operator::from_entries(entries).expect("square");
    }
    out
}

/// `||([q, p] - i hbar I) psi|| / ||psi||`.
///
/// `psi` must be normalized; on Dirichlet grids it must vanish on the outer
/// two cells at each end.
pub fn commutator_residual(g: &Grid, psi: &Ket) -> Result<f64> {
    let m = g.n_points;
    if psi.dim() != m {
        return Err(Error::DimensionMismatch {
            context: "state vs grid",
            left: psi.dim(),
            right: m,
        });
    }
    let norm = psi.norm();
    if !((norm - 1.0).abs() <= 1e-10) {
        return Err(Error::NotNormalized(norm));
    }
    if g.boundary == Boundary::Dirichlet {
        let edge = [0, 1, m - 2, m - 1]
            .iter()
            .map(|&j| psi.components()[j].norm())
            .fold(0.0, f64::max);
        if edge > 0.0 {
            return Err(Error::BoundaryContact(edge));
        }
    }
    let q = position_operator(g);
    let p = momentum_operator(g);
    let qp_psi = q.apply(&p.apply(psi)?)?;
    let pq_psi = p.apply(&q.apply(psi)?)?;
    let ihbar = C64::new(0.0, g.hbar);
    let r2: f64 = qp_psi
        .components()
        .iter()
        .zip(pq_psi.components())
        .zip(psi.components())
        .map(|((a, b), x)| (a - b - ihbar * x).norm_sqr())
        .sum();
    Ok(r2.sqrt() / norm)
}

/// Unit-norm samples of `exp(-(x - center)^2 / (2 width^2))`. On Dirichlet
/// grids the outer two cells at each end are zeroed.
pub fn gaussian_profile(g: &Grid, center: f64, width: f64) -> Result<Ket> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "profile width must be positive, got {width}"
        )));
    }
    let m = g.n_points;
    let samples: Vec<f64> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let interior = j >= 2 && j + 2 < m;
            if g.boundary == Boundary::Dirichlet && !interior {
                0.0
            } else {
                (-(x - center).powi(2) / (2.0 * width * width)).exp()
            }
        })
        .collect();
    Ket::from_real(&samples)?.normalized()
}

/// Unit-norm `(-1)^j`; on Dirichlet grids the outer two cells at each end
/// are zeroed.
pub fn checkerboard_profile(g: &Grid) -> Result<Ket> {
    let m = g.n_points;
    let samples: Vec<f64> = (0..m)
        .map(|j| {
            let interior = j >= 2 && j + 2 < m;
            if g.boundary == Boundary::Dirichlet && !interior {
                0.0
            } else if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    Ket::from_real(&samples)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_nodes() {
        let g = Grid::new(8, -1.0, 1.0, Boundary::Periodic, 1.0).unwrap();
        let q = position_operator(&g);
        // oracle: -1 + (0 + 1/2) * 0.25
        assert_eq!(q.get(0, 0).re, -0.875);
        assert_eq!(q.get(7, 7).re, 0.875);
        assert_eq!(q.trace().re, 0.0);
        assert_eq!(q.hermiticity_defect(), 0.0);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(7, 0.0, 1.0, Boundary::Periodic, 1.0).is_err());
        assert!(Grid::new(8, 1.0, 1.0, Boundary::Periodic, 1.0).is_err());
        assert!(Grid::new(8, 0.0, 1.0, Boundary::Periodic, -1.0).is_err());
    }

    #[test]
    fn momentum_is_hermitian_and_kills_constants() {
        for boundary in [Boundary::Periodic, Boundary::Dirichlet] {
            let g = Grid::new(16, -2.0, 3.0, boundary, 0.7).unwrap();
            assert_eq!(momentum_operator(&g).hermiticity_defect(), 0.0);
        }
        let g = Grid::new(16, -2.0, 3.0, Boundary::Periodic, 1.0).unwrap();
        let ones = Ket::from_real(&[1.0; 16]).unwrap();
        let out = momentum_operator(&g).apply(&ones).unwrap();
        assert!(out.components().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn plane_wave_dispersion() {
        let (m, a, b, hbar) = (32, 0.0, 2.0 * std::f64::consts::PI, 1.3);
        let g = Grid::new(m, a, b, Boundary::Periodic, hbar).unwrap();
        let h = g.spacing();
        let k = 3.0; // three periods fit the window
        let psi = Ket::new(
            g.nodes()
                .iter()
                .map(|x| C64::from_polar(1.0, k * x))
                .collect(),
        )
        .unwrap();
        let out = momentum_operator(&g).apply(&psi).unwrap();
        // oracle: -i hbar (e^{ikh} - e^{-ikh}) / (2h) = hbar sin(kh)/h
        let lambda = hbar * (k * h).sin() / h;
        for (o, x) in out.components().iter().zip(psi.components()) {
            assert!((o - x * lambda).norm() < 1e-12);
        }
        assert!((lambda - hbar * k).abs() < hbar * k * (k * h).powi(2));
    }

    #[test]
    fn commutator_identity() {
        for boundary in [Boundary::Periodic, Boundary::Dirichlet] {
            let g = Grid::new(12, -3.0, 5.0, boundary, 0.9).unwrap();
            let c = position_operator(&g)
                .commutator(&momentum_operator(&g))
                .unwrap();
            assert!((&c - &commutator_closed_form(&g)).max_abs() <= 1e-14);
        }
    }

    #[test]
    fn zero_hbar_gives_zero_residual() {
        let g = Grid::new(64, -8.0, 8.0, Boundary::Periodic, 0.0).unwrap();
        let psi = gaussian_profile(&g, 0.0, 1.0).unwrap();
        assert_eq!(commutator_residual(&g, &psi).unwrap(), 0.0);
    }

    #[test]
    fn dirichlet_checkerboard_closed_form() {
        for m in [16, 64, 256] {
            let g = Grid::new(m, -8.0, 8.0, Boundary::Dirichlet, 1.0).unwrap();
            let psi = checkerboard_profile(&g).unwrap();
            let r = commutator_residual(&g, &psi).unwrap();
            // oracle: interior rows give |2 psi_j|, edge rows 1.5 and 0.5
            let oracle = ((4.0 * m as f64 - 19.0) / (m as f64 - 4.0)).sqrt();
            assert!((r - oracle).abs() < 1e-12, "{m}: {r} vs {oracle}");
        }
    }

    #[test]
    fn residual_preconditions() {
        let g = Grid::new(16, -1.0, 1.0, Boundary::Dirichlet, 1.0).unwrap();
        let mut v = vec![0.0; 16];
        v[0] = 1.0;
        let edge = Ket::from_real(&v).unwrap();
        assert!(matches!(
            commutator_residual(&g, &edge),
            Err(Error::BoundaryContact(_))
        ));
        let unnormalized = Ket::from_real(&[1.0; 16]).unwrap();
        let gp = Grid::new(16, -1.0, 1.0, Boundary::Periodic, 1.0).unwrap();
        assert!(matches!(
            commutator_residual(&gp, &unnormalized),
            Err(Error::NotNormalized(_))
        ));
    }
}
