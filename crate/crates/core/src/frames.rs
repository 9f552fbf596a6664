//! Finite measure spaces and operator-valued frames over them.
//!
//! A frame is a family `x -> M(x)` of operators on a common Hilbert space,
//! weighted by a discrete measure `nu`. It is useful for quantization when
//! it resolves the identity, `sum_i nu_i M_i = I`.
//!
//! The regular N-gon frame `(2/N) sum_n |2 pi n/N><2 pi n/N|` resolves the
//! identity only for `N >= 3`: its off-identity part is
//! `(1/N) sum_n [[cos(4 pi n/N), sin(4 pi n/N)], [sin(4 pi n/N), -cos(4 pi n/N)]]`,
//! and `sum_n exp(4 pi i n/N)` vanishes unless `N` divides 2.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hilbert::{eig_hermitian, outer, Ket, Operator, C64};
use crate::Tolerances;

/// Default tolerance for [`density_check`].
pub const DENSITY_TOL: f64 = 1e-10;

/// Weighted finite point set `(X, nu)`. Labels are opaque; all math uses
/// the index order fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasureSpace {
    labels: Vec<String>,
    weights: Vec<f64>,
    index: HashMap<String, usize>,
}

impl DiscreteMeasureSpace {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("measure space needs at least one point"));
        }
        if labels.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                context: "points vs weights",
                left: labels.len(),
                right: weights.len(),
            });
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::InvalidWeight { index, weight });
            }
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self {
            labels,
            weights,
            index,
        })
    }

    /// Points labelled `"0"`, ..., `"m-1"`, each with weight `weight`.
    pub fn uniform(m: usize, weight: f64) -> Result<Self> {
        Self::new((0..m).map(|i| i.to_string()).collect(), vec![weight; m])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// `integrate(1)`; the sea-star measure has total mass 2.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `sum_i nu_i f(x_i)` in index order.
pub fn integrate(space: &DiscreteMeasureSpace, values: &[C64]) -> Result<C64> {
    if values.len() < space.len() {
        return Err(Error::InvalidArgument(format!(
            "function has no value at point {:?}",
            space.labels[values.len()]
        )));
    }
    if values.len() > space.len() {
        return Err(Error::DimensionMismatch {
            context: "function values vs points",
            left: values.len(),
            right: space.len(),
        });
    }
    Ok(space
        .weights
        .iter()
        .zip(values)
        .fold(C64::new(0.0, 0.0), |acc, (&w, &f)| acc + f * w))
}

/// Outcome of [`density_check`]; all three defects are always filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub passed: bool,
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub trace_defect: f64,
}

/// Hermitian within `tol`, spectrum bounded below by `-tol`, trace within
/// `tol` of one.
pub fn density_check(m: &Operator, tol: f64) -> DensityReport {
    let hermitian_defect = m.hermiticity_defect();
    let tr = m.trace();
    let trace_defect = (tr - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = eig_hermitian(&m.hermitian_part(), f64::INFINITY)
        .map(|e| e.values.last().copied().unwrap_or(f64::NAN))
        .unwrap_or(f64::NAN);
    let passed = hermitian_defect <= tol && min_eigenvalue >= -tol && trace_defect <= tol;
    DensityReport {
        passed,
        hermitian_defect,
        min_eigenvalue,
        trace_defect,
    }
}

/// An X-labelled operator family `M_i` with its measure.
#[derive(Debug, Clone)]
pub struct FrameFamily {
    label: String,
    space: DiscreteMeasureSpace,
    operators: Vec<Operator>,
    is_density: bool,
}

impl FrameFamily {
    /// Validates shapes and, when `is_density` is claimed, every operator.
    /// Resolution of the identity is *not* required here; see
    /// [`resolution_residual`].
    pub fn new(
        label: impl Into<String>,
        space: DiscreteMeasureSpace,
        operators: Vec<Operator>,
        is_density: bool,
    ) -> Result<Self> {
        Self::with_tolerances(label, space, operators, is_density, &Tolerances::default())
    }

    pub fn with_tolerances(
        label: impl Into<String>,
        space: DiscreteMeasureSpace,
        operators: Vec<Operator>,
        is_density: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        if operators.len() != space.len() {
            return Err(Error::DimensionMismatch {
                context: "frame operators vs points",
                left: operators.len(),
                right: space.len(),
            });
        }
        let d = operators[0].dim();
        for op in &operators {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "frame operator dimension",
                    left: d,
                    right: op.dim(),
                });
            }
        }
        if is_density {
            for (index, op) in operators.iter().enumerate() {
                let r = density_check(op, tol.density);
                if !r.passed {
                    return Err(Error::FrameNotDensity {
                        index,
                        detail: format!(
                            "hermiticity defect {:e}, min eigenvalue {:e}, trace defect {:e}",
                            r.hermitian_defect, r.min_eigenvalue, r.trace_defect
                        ),
                    });
                }
            }
        }
        Ok(Self {
            label: label.into(),
            space,
            operators,
            is_density,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &DiscreteMeasureSpace {
        &self.space
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn is_density(&self) -> bool {
        self.is_density
    }

    /// Dimension of the Hilbert space the frame acts on.
    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `sum_i nu_i M_i` in index order.
    pub fn weighted_sum(&self) -> Operator {
        let mut acc = Operator::zeros(self.dim());
        for (op, &w) in self.operators.iter().zip(self.space.weights()) {
            acc = &acc + &op.scale_real(w);
        }
        acc
    }

    /// Drops point `index` together with its operator.
    pub fn without_point(&self, index: usize) -> Result<Self> {
        if index >= self.len() || self.len() == 1 {
            return Err(Error::InvalidArgument(format!(
                "cannot remove point {index} from a frame of {} points",
                self.len()
            )));
        }
        let mut labels = self.space.labels().to_vec();
        let mut weights = self.space.weights().to_vec();
        let mut operators = self.operators.clone();
        labels.remove(index);
        weights.remove(index);
        operators.remove(index);
        Ok(Self {
            label: format!("{}-without-{}", self.label, index),
            space: DiscreteMeasureSpace::new(labels, weights)?,
            operators,
            is_density: self.is_density,
        })
    }
}

/// Coherent-state frame `M_i = |x_i><x_i|` with `|x_i> = sum_k phi_k(x_i) |e_k>`.
///
/// `functions[k][i]` is `phi_k(x_i)`. The family must be orthonormal in
/// `L2(X, nu)`, which is exactly the condition for the frame to resolve the
/// identity.
pub fn cs_frame(
    label: impl Into<String>,
    space: DiscreteMeasureSpace,
    functions: &[Vec<C64>],
) -> Result<FrameFamily> {
    cs_frame_with_tolerances(label, space, functions, &Tolerances::default())
}

pub fn cs_frame_with_tolerances(
    label: impl Into<String>,
    space: DiscreteMeasureSpace,
    functions: &[Vec<C64>],
    tol: &Tolerances,
) -> Result<FrameFamily> {
    if functions.is_empty() {
        return Err(Error::Empty(
            "coherent-state frame needs at least one function",
        ));
    }
    for phi in functions {
        if phi.len() != space.len() {
            return Err(Error::DimensionMismatch {
                context: "function values vs points",
                left: phi.len(),
                right: space.len(),
            });
        }
    }
    let gram_defect = gram_defect(&space, functions);
    if !(gram_defect <= tol.orthonormality) {
        return Err(Error::NotOrthonormal(gram_defect));
    }
    let mut operators = Vec::with_capacity(space.len());
    let mut unit_trace = true;
    for i in 0..space.len() {
        let ket = Ket::new(functions.iter().map(|phi| phi[i]).collect())?;
        let m = outer(&ket, &ket)?;
        unit_trace &= (m.trace().re - 1.0).abs() <= tol.density;
        operators.push(m);
    }
    FrameFamily::with_tolerances(label, space, operators, unit_trace, tol)
}

/// `max |G - I|` for the Gram matrix `G_jk = sum_i nu_i phi_j(x_i) conj(phi_k(x_i))`.
fn gram_defect(space: &DiscreteMeasureSpace, functions: &[Vec<C64>]) -> f64 {
    let mut defect: f64 = 0.0;
    for (j, phi_j) in functions.iter().enumerate() {
        for (k, phi_k) in functions.iter().enumerate() {
            let g = space
                .weights()
                .iter()
                .zip(phi_j.iter().zip(phi_k))
                .fold(C64::new(0.0, 0.0), |acc, (&w, (a, b))| {
                    acc + a * b.conj() * w
                });
            let target = if j == k { 1.0 } else { 0.0 };
            defect = defect.max((g - target).norm());
        }
    }
    defect
}

/// The regular N-gon frame: points `0..N`, weights `2/N`, operators
/// `|2 pi n/N><2 pi n/N|`. `N = 5` is the sea-star frame.
pub fn polygon_frame(n: usize) -> Result<FrameFamily> {
    if n < 3 {
        return Err(Error::PolygonTooSmall(n));
    }
    let (space, functions) = polygon_data(n)?;
    cs_frame(format!("polygon:{n}"), space, &functions)
}

/// The N-gon family without the `N >= 3` guard or the orthonormality check.
/// Only useful to exhibit the failure for `N <= 2`.
pub fn polygon_family_unchecked(n: usize) -> Result<FrameFamily> {
    let (space, functions) = polygon_data(n)?;
    let operators = (0..n)
        .map(|i| {
            let ket = Ket::new(vec![functions[0][i], functions[1][i]])?;
            outer(&ket, &ket)
        })
        .collect::<Result<Vec<_>>>()?;
    FrameFamily::new(format!("polygon:{n}"), space, operators, true)
}

fn polygon_data(n: usize) -> Result<(DiscreteMeasureSpace, Vec<Vec<C64>>)> {
    let space = DiscreteMeasureSpace::uniform(n, 2.0 / n as f64)?;
    let angle = |i: usize| 2.0 * PI * i as f64 / n as f64;
    let cos = (0..n).map(|i| C64::new(angle(i).cos(), 0.0)).collect();
    let sin = (0..n).map(|i| C64::new(angle(i).sin(), 0.0)).collect();
    Ok((space, vec![cos, sin]))
}

/// `||sum_i nu_i M_i - I||_max`.
pub fn resolution_residual(frame: &FrameFamily) -> f64 {
    (&frame.weighted_sum() - &Operator::identity(frame.dim())).max_abs()
}

/// Nonnegative values on the points of a measure space, normalized against
/// the measure: `sum_i nu_i v_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    values: Vec<f64>,
    mass: f64,
}

impl ProbabilityDistribution {
    pub fn new(space: &DiscreteMeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                context: "distribution values vs points",
                left: values.len(),
                right: space.len(),
            });
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| !(v >= -1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "probability at point {i} is negative ({v:e})"
            )));
        }
        let mass: f64 = space
            .weights()
            .iter()
            .zip(&values)
            .map(|(w, v)| w * v)
            .sum();
        if !((mass - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidArgument(format!(
                "distribution has total probability {mass}, expected 1"
            )));
        }
        Ok(Self { values, mass })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `sum_i nu_i v_i` as computed at construction.
    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// `v_n = tr(M_{n0} M_n)`; for polygon frames `cos^2(2 pi (n0 - n)/N)`.
pub fn overlap_probability(frame: &FrameFamily, n0: usize) -> Result<ProbabilityDistribution> {
    if !frame.is_density() {
        return Err(Error::NotDensityFrame);
    }
    let reference = frame.operators.get(n0).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "point index {n0} out of range ({} points)",
            frame.len()
        ))
    })?;
    let values = frame
        .operators
        .iter()
        .map(|m| reference.trace_product(m).map(|z| z.re))
        .collect::<Result<Vec<_>>>()?;
    ProbabilityDistribution::new(frame.space(), values)
}
