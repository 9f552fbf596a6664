//! Linear symplectic geometry on `R^{2n}` with a constant form.
//!
//! Rank, subset and null-space questions are answered with an SVD and a
//! relative singular-value cutoff of [`RANK_TOL`].

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// A constant antisymmetric nonsingular bilinear form `W(a, b) = a^T w b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    omega: DMatrix<f64>,
    n: usize,
}

impl SymplecticForm {
    /// Antisymmetrizes `omega` after checking `max |w + w^T| <= 1e-12`, then
    /// requires `sigma_min > 1e-10 sigma_max`.
    pub fn new(omega: DMatrix<f64>) -> Result<Self> {
        let (r, c) = omega.shape();
        if r != c {
            return Err(Error::NotSquare {
                rows: r,
                row: 0,
                cols: c,
            });
        }
        if r == 0 || r % 2 != 0 {
            return Err(Error::OddDimension(r));
        }
        let defect = (&omega + omega.transpose()).amax();
        if !(defect <= 1e-12) {
            return Err(Error::NotAntisymmetric(defect));
        }
        let omega = (&omega - omega.transpose()) * 0.5;
        let sv = omega.singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if !(hi > 0.0 && lo > 1e-10 * hi) {
            return Err(Error::SingularForm(if hi > 0.0 { lo / hi } else { 0.0 }));
        }
        Ok(Self { omega, n: r / 2 })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                row,
                cols: r.len(),
            });
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// `[[0, I], [-I, 0]]`: the standard Darboux form, `W(e_i, e_{n+i}) = 1`.
    pub fn standard(n: usize) -> Self {
        let mut omega = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            omega[(i, n + i)] = 1.0;
            omega[(n + i, i)] = -1.0;
        }
        Self { omega, n }
    }

    /// `dp_k ^ dq^k` written in `(q, p)` coordinate order, i.e. `[[0, -I], [I, 0]]`.
    ///
    /// With this form `X_f -| w = -df` and `w(X_f, X_g) = {f, g}` for the
    /// bracket `{f, g} = df/dp dg/dq - df/dq dg/dp`. It is the negative of
    /// [`SymplecticForm::standard`].
    pub fn phase_space(n: usize) -> Self {
        let s = Self::standard(n);
        Self { omega: -s.omega, n }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.omega
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector length vs form dimension",
                left: len,
                right: self.dim(),
            });
        }
        Ok(())
    }

    fn pair(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.omega * b))
    }
}

/// `W(a, b) = sum_ij a^i w_ij b^j`.
pub fn eval_form(form: &SymplecticForm, a: &[f64], b: &[f64]) -> Result<f64> {
    form.check_len(a.len())?;
    form.check_len(b.len())?;
    Ok(form.pair(
        &DVector::from_column_slice(a),
        &DVector::from_column_slice(b),
    ))
}

/// A linear subspace of `R^d`, held as an orthonormal basis (columns).
#[derive(Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient_dim())
            .field("dim", &self.dim())
            .finish()
    }
}

impl Subspace {
    /// Span of linearly independent vectors; dependent input is rejected.
    pub fn new(ambient: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        let m = columns(ambient, vectors)?;
        let r = rank(&m);
        if r != vectors.len() {
            return Err(Error::RankDeficient {
                rank: r,
                count: vectors.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let q = m.qr().q();
        Ok(Self { basis: q })
    }

    /// Span of arbitrary vectors; dependent directions are dropped.
    pub fn span(ambient: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        Ok(Self::column_space(&columns(ambient, vectors)?))
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Self {
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    fn column_space(m: &DMatrix<f64>) -> Self {
        let ambient = m.nrows();
        if m.ncols() == 0 {
            return Self::zero(ambient);
        }
        let svd = m.clone().svd(true, false);
        let u = svd.u.expect("requested U");
        let order = descending(&svd.singular_values);
        let cutoff = RANK_TOL * svd.singular_values.max();
        let keep: Vec<usize> = order
            .into_iter()
            .filter(|&i| svd.singular_values[i] > cutoff && svd.singular_values[i] > 0.0)
            .collect();
        Self {
            basis: DMatrix::from_fn(ambient, keep.len(), |r, c| u[(r, keep[c])]),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthonormal basis as columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<f64>> {
        self.basis
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "subspace ambient dimension",
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `self` is contained in `other`: appending `self` does not raise the
    /// rank of `other`.
    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() == 0 {
            return Ok(true);
        }
        let joined = hstack(&other.basis, &self.basis);
        Ok(rank(&joined) == other.dim())
    }

    pub fn same_span(&self, other: &Self) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.is_subset_of(other)?)
    }

    /// `F + G`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::column_space(&hstack(&self.basis, &other.basis)))
    }

    /// Euclidean orthogonal complement.
    pub fn orthogonal_complement(&self) -> Self {
        let d = self.ambient_dim();
        Self {
            basis: null_space(&self.basis.transpose(), d - self.dim()),
        }
    }

    /// `F n G = (F^perp_e + G^perp_e)^perp_e` with Euclidean complements.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let outer = self
            .orthogonal_complement()
            .sum(&other.orthogonal_complement())?;
        Ok(outer.orthogonal_complement())
    }
}

fn columns(ambient: usize, vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
        return Err(Error::DimensionMismatch {
            context: "vector length vs ambient dimension",
            left: v.len(),
            right: ambient,
        });
    }
    Ok(DMatrix::from_fn(ambient, vectors.len(), |r, c| {
        vectors[c][r]
    }))
}

fn hstack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, ca) = a.shape();
    DMatrix::from_fn(rows, ca + b.ncols(), |r, c| {
        if c < ca {
            a[(r, c)]
        } else {
            b[(r, c - ca)]
        }
    })
}

fn descending(values: &DVector<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    order
}

/// Numerical rank with the relative cutoff [`RANK_TOL`].
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let hi = sv.max();
    if hi == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * hi).count()
}

/// Orthonormal basis (columns) for the `dim`-dimensional subspace of input
/// space that `a` maps closest to zero: the right singular vectors of the
/// `dim` smallest singular values.
fn null_space(a: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let cols = a.ncols();
    if dim == 0 {
        return DMatrix::zeros(cols, 0);
    }
    // Pad to at least square so the SVD returns a full set of right vectors.
    let rows = a.nrows().max(cols);
    let padded = DMatrix::from_fn(
        rows,
        cols,
        |r, c| if r < a.nrows() { a[(r, c)] } else { 0.0 },
    );
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let order = descending(&svd.singular_values);
    let picked = &order[cols - dim..];
    DMatrix::from_fn(cols, dim, |r, c| v_t[(picked[c], r)])
}

/// `F^perp = { a : W(a, b) = 0 for all b in F }`, of dimension `2n - dim F`.
pub fn symplectic_complement(form: &SymplecticForm, f: &Subspace) -> Result<Subspace> {
    form.check_len(f.ambient_dim())?;
    // W(a, b) = a^T w b = 0 for all columns b  <=>  (w B)^T a = 0
    let constraints = (form.matrix() * f.basis()).transpose();
    let k = form.dim() - f.dim();
    Ok(Subspace {
        basis: null_space(&constraints, k),
    })
}

/// Position of a subspace relative to its symplectic complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceClass {
    Lagrangian,
    Isotropic,
    Coisotropic,
    Symplectic,
    Generic,
}

impl SubspaceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lagrangian => "lagrangian",
            Self::Isotropic => "isotropic",
            Self::Coisotropic => "coisotropic",
            Self::Symplectic => "symplectic",
            Self::Generic => "generic",
        }
    }
}

impl fmt::Display for SubspaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All four membership tests, plus the single reported tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub symplectic: bool,
    pub lagrangian: bool,
    pub dim: usize,
    pub complement_dim: usize,
}

impl Classification {
    /// Tag precedence: lagrangian, isotropic, coisotropic, symplectic.
    /// The zero subspace reports isotropic, the whole space coisotropic.
    pub fn class(&self) -> SubspaceClass {
        if self.lagrangian {
            SubspaceClass::Lagrangian
        } else if self.isotropic {
            SubspaceClass::Isotropic
        } else if self.coisotropic {
            SubspaceClass::Coisotropic
        } else if self.symplectic {
            SubspaceClass::Symplectic
        } else {
            SubspaceClass::Generic
        }
    }
}

pub fn classify(form: &SymplecticForm, f: &Subspace) -> Result<Classification> {
    let perp = symplectic_complement(form, f)?;
    let isotropic = f.is_subset_of(&perp)?;
    let coisotropic = perp.is_subset_of(f)?;
    let symplectic = f.intersection(&perp)?.dim() == 0;
    Ok(Classification {
        isotropic,
        coisotropic,
        symplectic,
        lagrangian: isotropic && coisotropic,
        dim: f.dim(),
        complement_dim: perp.dim(),
    })
}

/// A basis `{u_i, v_i}` with `W(u_i, v_j) = delta_ij` and
/// `W(u_i, u_j) = W(v_i, v_j) = 0`.
#[derive(Debug, Clone)]
pub struct SymplecticFrame {
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

impl SymplecticFrame {
    /// Largest deviation from the Darboux relations.
    pub fn defect(&self, form: &SymplecticForm) -> Result<f64> {
        let n = self.u.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((eval_form(form, &self.u[i], &self.v[j])? - target).abs());
                worst = worst.max(eval_form(form, &self.u[i], &self.u[j])?.abs());
                worst = worst.max(eval_form(form, &self.v[i], &self.v[j])?.abs());
            }
        }
        Ok(worst)
    }

    /// Columns `u_1..u_n, v_1..v_n`; symplectic from `standard(n)` to the form.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.u.len();
        DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if c < n {
                self.u[c][r]
            } else {
                self.v[c - n][r]
            }
        })
    }
}

/// Symplectic Gram-Schmidt starting from the standard basis.
///
/// Each step takes the remaining candidate of largest norm as `u` (unit
/// length), the candidate maximizing `|W(u, .)|` as the partner `v`
/// (rescaled so `W(u, v) = 1`), and projects every other candidate onto
/// the symplectic complement of `span{u, v}`.
pub fn symplectic_frame(form: &SymplecticForm) -> Result<SymplecticFrame> {
    let d = form.dim();
    let scale = form.matrix().amax();
    let mut candidates: Vec<DVector<f64>> = (0..d)
        .map(|i| DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    let mut u_out = Vec::with_capacity(form.n());
    let mut v_out = Vec::with_capacity(form.n());

    for step in 0..form.n() {
        let pivot = argmax(candidates.iter().map(|c| c.norm()));
        let u = candidates.remove(pivot);
        let u = &u / u.norm();

        let pairings: Vec<f64> = candidates.iter().map(|w| form.pair(&u, w)).collect();
        let partner = argmax(pairings.iter().map(|p| p.abs()));
        let pairing = pairings[partner];
        if !(pairing.abs() > 1e-10 * scale) {
            return Err(Error::NoPartner {
                step,
                pairing: pairing.abs(),
            });
        }
        let v = candidates.remove(partner) / pairing;

        for w in candidates.iter_mut() {
            // two passes of w <- w - W(w, v) u - W(u, w) v
            for _ in 0..2 {
                let a = form.pair(w, &v);
                let b = form.pair(&u, w);
                *w -= &u * a + &v * b;
            }
        }
        u_out.push(u.iter().copied().collect());
        v_out.push(v.iter().copied().collect());
    }
    Ok(SymplecticFrame { u: u_out, v: v_out })
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, x) in values.enumerate() {
        if x > best.1 {
            best = (i, x);
        }
    }
    best.0
}

/// Result of [`is_canonical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalCheck {
    pub canonical: bool,
    /// `max |S^T w S - w|`.
    pub defect: f64,
}

/// Whether `S` preserves the form: `S^T w S = w` within `tol`.
pub fn is_canonical(form: &SymplecticForm, s: &DMatrix<f64>, tol: f64) -> Result<CanonicalCheck> {
    if s.shape() != (form.dim(), form.dim()) {
        return Err(Error::DimensionMismatch {
            context: "transformation vs form dimension",
            left: s.nrows().max(s.ncols()),
            right: form.dim(),
        });
    }
    let defect = (s.transpose() * form.matrix() * s - form.matrix()).amax();
    Ok(CanonicalCheck {
        canonical: defect <= tol,
        defect,
    })
}
