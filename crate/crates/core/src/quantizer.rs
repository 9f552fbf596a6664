//! Integral quantization `f -> A_f = sum_i nu_i f(x_i) M_i` over a finite
//! frame, its lower symbols and spectra.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::{resolution_residual, DiscreteMeasureSpace, FrameFamily};
use crate::hilbert::{eig_hermitian, Ket, Operator, C64};
use crate::Tolerances;

/// A complex-valued function on the points of a measure space, stored by
/// point index.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFunction {
    label: String,
    values: Vec<C64>,
}

impl ClassicalFunction {
    pub fn new(label: impl Into<String>, values: Vec<C64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }

    pub fn from_real(label: impl Into<String>, values: &[f64]) -> Self {
        Self::new(label, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Resolves a named function against `space`:
    ///
    /// * `one`: constant 1
    /// * `delta:k`: indicator of the point labelled `k`
    /// * `index`: the point index `i`
    /// * `cos`, `sin`: `cos(2 pi i/m)`, `sin(2 pi i/m)` for `m` points
    pub fn builtin(name: &str, space: &DiscreteMeasureSpace) -> Result<Self> {
        let m = space.len();
        let real = |f: &dyn Fn(usize) -> f64| -> Vec<C64> {
            (0..m).map(|i| C64::new(f(i), 0.0)).collect()
        };
        let angle = |i: usize| 2.0 * PI * i as f64 / m as f64;
        let values = match name {
            "one" => real(&|_| 1.0),
            "index" => real(&|i| i as f64),
            "cos" => real(&|i| angle(i).cos()),
            "sin" => real(&|i| angle(i).sin()),
            _ => match name.strip_prefix("delta:") {
                Some(label) => {
                    let k = space.index_of(label)?;
                    real(&|i| if i == k { 1.0 } else { 0.0 })
                }
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown function {name:?} (expected one, delta:<point>, index, cos, sin)"
                    )))
                }
            },
        };
        Ok(Self::new(name, values))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// `alpha * self + beta * other`, pointwise.
    pub fn combine(&self, alpha: C64, other: &Self, beta: C64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: "linear combination",
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self::new(
            format!("({alpha})*{} + ({beta})*{}", self.label, other.label),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * alpha + b * beta)
                .collect(),
        ))
    }
}

/// `A_f` together with where it came from.
#[derive(Debug, Clone)]
pub struct QuantizationResult {
    pub operator: Operator,
    pub frame_id: String,
    pub function_id: String,
    pub hermitian: bool,
    pub resolution_residual_at_build: f64,
    pub warnings: Vec<String>,
}

/// Quantizes `f` with the default tolerances.
pub fn quantize(frame: &FrameFamily, f: &ClassicalFunction) -> Result<QuantizationResult> {
    quantize_with(frame, f, &Tolerances::default())
}

/// `A_f = sum_i nu_i f(x_i) M_i`, summed in point order.
///
/// Frames whose resolution residual exceeds `tol.resolution_reject` are
/// refused; above `tol.resolution_warn` the result carries a warning.
pub fn quantize_with(
    frame: &FrameFamily,
    f: &ClassicalFunction,
    tol: &Tolerances,
) -> Result<QuantizationResult> {
    check_domain(frame, f)?;
    let residual = resolution_residual(frame);
    if !(residual <= tol.resolution_reject) {
        return Err(Error::ResolutionResidual {
            residual,
            limit: tol.resolution_reject,
        });
    }
    let mut warnings = Vec::new();
    if residual > tol.resolution_warn {
        warnings.push(format!(
            "frame {} resolves the identity only to {residual:e} (warning threshold {:e})",
            frame.label(),
            tol.resolution_warn
        ));
    }

    let mut a = Operator::zeros(frame.dim());
    for ((m, &w), &fx) in frame
        .operators()
        .iter()
        .zip(frame.space().weights())
        .zip(f.values())
    {
        a = &a + &m.scale(fx * w);
    }
    let hermitian = f.is_real()
        && frame
            .operators()
            .iter()
            .all(|m| m.hermiticity_defect() <= tol.hermitian);

    Ok(QuantizationResult {
        operator: a,
        frame_id: frame.label().to_string(),
        function_id: f.label().to_string(),
        hermitian,
        resolution_residual_at_build: residual,
        warnings,
    })
}

fn check_domain(frame: &FrameFamily, f: &ClassicalFunction) -> Result<()> {
    if f.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            context: "function values vs frame points",
            left: f.len(),
            right: frame.len(),
        });
    }
    Ok(())
}

/// CS mean values `f(x_i) = tr(M_i A)`, taken pointwise without measure
/// weights.
pub fn lower_symbol(frame: &FrameFamily, a: &Operator) -> Result<ClassicalFunction> {
    if !frame.is_density() {
        return Err(Error::NotDensityFrame);
    }
    if a.dim() != frame.dim() {
        return Err(Error::DimensionMismatch {
            context: "operator vs frame",
            left: a.dim(),
            right: frame.dim(),
        });
    }
    let values = frame
        .operators()
        .iter()
        .map(|m| m.trace_product(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassicalFunction::new(
        format!("lower-symbol[{}]", frame.label()),
        values,
    ))
}

/// `B_f(psi1, psi2) = sum_i nu_i <psi1|M_i|psi2> f(x_i)`.
pub fn weak_matrix_element(
    frame: &FrameFamily,
    f: &ClassicalFunction,
    psi1: &Ket,
    psi2: &Ket,
) -> Result<C64> {
    check_domain(frame, f)?;
    for psi in [psi1, psi2] {
        if psi.dim() != frame.dim() {
            return Err(Error::DimensionMismatch {
                context: "ket vs frame",
                left: psi.dim(),
                right: frame.dim(),
            });
        }
    }
    let mut acc = C64::new(0.0, 0.0);
    for ((m, &w), &fx) in frame
        .operators()
        .iter()
        .zip(frame.space().weights())
        .zip(f.values())
    {
        let m_psi2 = m.apply(psi2)?;
        acc += crate::hilbert::inner(psi1, &m_psi2)? * fx * w;
    }
    Ok(acc)
}

/// Eigenvalues of a Hermitian `A_f`, descending.
pub fn spectrum(result: &QuantizationResult) -> Result<Vec<f64>> {
    if !result.hermitian {
        return Err(Error::NonHermitianSpectrum);
    }
    let tol = 1e-12 * result.operator.max_abs().max(1.0);
    Ok(eig_hermitian(&result.operator, tol)?.values)
}
