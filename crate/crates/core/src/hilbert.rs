//! Finite-dimensional complex Hilbert space: kets, operators, projectors,
//! traces and a Jacobi eigensolver for Hermitian matrices.
//!
//! Operators are stored densely in row-major order. Every sum runs in index
//! order so traces and products are bit-reproducible.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A vector of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct Ket {
    components: Vec<C64>,
}

impl Ket {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty("ket needs at least one component"));
        }
        Ok(Self { components })
    }

    pub fn from_real(components: &[f64]) -> Result<Self> {
        Self::new(components.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `|theta> = cos(theta)|0> + sin(theta)|pi/2>` in the plane.
    pub fn angle(theta: f64) -> Self {
        Self {
            components: vec![C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0)],
        }
    }

    /// The `k`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                context: "basis index",
                left: k,
                right: dim,
            });
        }
        let mut components = vec![ZERO; dim];
        components[k] = ONE;
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[C64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// True when `|<psi|psi> - 1| <= 1e-12`.
    pub fn is_unit(&self) -> bool {
        (self.components.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() <= 1e-12
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized(n));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            components: self.components.iter().map(|&z| z * s).collect(),
        }
    }
}

impl fmt::Debug for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Ket").field(&self.components).finish()
    }
}

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &Ket, b: &Ket) -> Result<C64> {
    check_dims("inner product", a.dim(), b.dim())?;
    Ok(a.components
        .iter()
        .zip(&b.components)
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y))
}

/// `|a><b|`.
pub fn outer(a: &Ket, b: &Ket) -> Result<Operator> {
    check_dims("outer product", a.dim(), b.dim())?;
    let d = a.dim();
    let mut entries = Vec::with_capacity(d * d);
    for ai in &a.components {
        for bj in &b.components {
            entries.push(ai * bj.conj());
        }
    }
    Ok(Operator { dim: d, entries })
}

fn check_dims(context: &'static str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch {
            context,
            left,
            right,
        });
    }
    Ok(())
}

/// A square complex matrix acting on kets.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = ONE;
        }
        op
    }

    /// Builds an operator from row-major entries; `entries.len()` must be a
    /// nonzero perfect square.
    pub fn from_entries(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 {
            return Err(Error::Empty("operator needs at least one entry"));
        }
        if dim * dim != entries.len() {
            return Err(Error::NotSquare {
                rows: dim,
                row: 0,
                cols: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty("operator needs at least one row"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: r,
                    cols: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut op = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            op.entries[i * values.len() + i] = v;
        }
        op
    }

    pub fn diagonal_real(values: &[f64]) -> Self {
        Self::diagonal(&values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Orthogonal projector `P_theta = |theta><theta|` in the plane.
    pub fn projector(theta: f64) -> Self {
        let k = Ket::angle(theta);
        outer(&k, &k).expect("same dimension")
    }

    /// Rotation `R(theta)` in SO(2).
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_real_rows(&[vec![c, -s], vec![s, c]]).expect("2x2")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.entries.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.entries[j * d + i].conj());
            }
        }
        Self { dim: d, entries }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims("operator sum", self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dims("operator difference", self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims("operator product", self.dim, other.dim)?;
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        check_dims("operator application", self.dim, ket.dim())?;
        Ok(Ket {
            components: self
                .rows()
                .map(|row| {
                    row.iter()
                        .zip(ket.components())
                        .fold(ZERO, |acc, (a, x)| acc + a * x)
                })
                .collect(),
        })
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).fold(ZERO, |acc, i| acc + self.entries[i * self.dim + i])
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        check_dims("trace of product", self.dim, other.dim)?;
        let d = self.dim;
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += self.entries[i * d + j] * other.entries[j * d + i];
            }
        }
        Ok(acc)
    }

    /// Largest entry modulus, `||A||_max`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `||A - A^dagger||_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut defect: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let diff = self.entries[i * d + j] - self.entries[j * d + i].conj();
                defect = defect.max(diff.norm());
            }
        }
        defect
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.entries[i * d + j] =
                    (self.entries[i * d + j] + self.entries[j * d + i].conj()) * 0.5;
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator dimensions must match")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator dimensions must match")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator dimensions must match")
    }
}

/// Eigenpairs of a Hermitian operator, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Ket>,
}

const MAX_SWEEPS: usize = 64;

/// Diagonalizes a Hermitian operator with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real Givens rotation, so the pair `(p, q)` is annihilated exactly.
/// Eigenvalues come back in descending order; the stable sort keeps the
/// sweep order for ties. Each eigenvector is rephased so that its first
/// component of modulus above `1e-12` is real and positive.
pub fn eig_hermitian(a: &Operator, tol: f64) -> Result<Eigen> {
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    let d = a.dim;
    let mut m = a.hermitian_part();
    let mut v = Operator::identity(d);

    let frob = m.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob;
    let mut off = off_diagonal_norm(&m);
    let mut sweeps = 0;
    while off > target && off > f64::MIN_POSITIVE {
        if sweeps == MAX_SWEEPS {
            // Rounding can stall the last few ulps; accept anything far below
            // the accuracy promised to callers.
            if off <= 1e-13 * frob {
                break;
            }
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&m);
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| m.entries[i * d + i].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = order
        .iter()
        .map(|&col| {
            let mut comps: Vec<C64> = (0..d).map(|r| v.entries[r * d + col]).collect();
            if let Some(lead) = comps.iter().find(|z| z.norm() > 1e-12).copied() {
                let phase = lead.conj() / lead.norm();
                for z in &mut comps {
                    *z *= phase;
                }
            }
            Ket { components: comps }
        })
        .collect();
    Ok(Eigen { values, vectors })
}

fn off_diagonal_norm(m: &Operator) -> f64 {
    let d = m.dim;
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m.entries[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `m <- U^dagger m U`, `v <- v U` with `U` chosen to zero `m[p][q]`.
fn rotate(m: &mut Operator, v: &mut Operator, p: usize, q: usize) {
    let d = m.dim;
    let apq = m.entries[p * d + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m.entries[p * d + p].re;
    let aqq = m.entries[q * d + q].re;
    // phase e^{-i phi} with a_pq = r e^{i phi}
    let phase = apq.conj() / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    for k in 0..d {
        let akp = m.entries[k * d + p];
        let akq = m.entries[k * d + q];
        m.entries[k * d + p] = akp * u_pp + akq * u_qp;
        m.entries[k * d + q] = akp * u_pq + akq * u_qq;
    }
    for k in 0..d {
        let apk = m.entries[p * d + k];
        let aqk = m.entries[q * d + k];
        m.entries[p * d + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        m.entries[q * d + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    m.entries[p * d + q] = ZERO;
    m.entries[q * d + p] = ZERO;
    m.entries[p * d + p].im = 0.0;
    m.entries[q * d + q].im = 0.0;

    for k in 0..d {
        let vkp = v.entries[k * d + p];
        let vkq = v.entries[k * d + q];
        v.entries[k * d + p] = vkp * u_pp + vkq * u_qp;
        v.entries[k * d + q] = vkp * u_pq + vkq * u_qq;
    }
}

/// `tr(state * a)`, the value of the observable `a` in a (possibly mixed) state.
pub fn expectation(state: &Operator, a: &Operator) -> Result<C64> {
    check_dims("expectation", state.dim, a.dim)?;
    let report = frames::density_check(state, frames::DENSITY_TOL);
    if !report.passed {
        return Err(Error::NotDensity {
            hermitian_defect: report.hermitian_defect,
            min_eigenvalue: report.min_eigenvalue,
            trace_defect: report.trace_defect,
        });
    }
    state.trace_product(a)
}
