//! Hamiltonian mechanics on phase space `R^{2n}`.
//!
//! Points are ordered `(q^1..q^n, p_1..p_n)`. The bracket follows
//!
//! ```text
//! {f, g} = sum_k df/dp_k dg/dq^k - df/dq^k dg/dp_k
//! ```
//!
//! so `{p_k, q^l} = delta_kl` and `df/dt = {H, f}`. This is the negative of
//! the other common convention `{q, p} = 1`. The matching two-form is
//! [`SymplecticForm::phase_space`](crate::symplectic::SymplecticForm::phase_space).

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradientFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Phase space with `n` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseSpace {
    n: usize,
}

impl PhaseSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("phase space needs n >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Index of `q^k` (0-based `k`).
    pub fn q(&self, k: usize) -> usize {
        k
    }

    /// Index of `p_k` (0-based `k`).
    pub fn p(&self, k: usize) -> usize {
        self.n + k
    }
}

#[derive(Clone)]
enum Kind {
    Function {
        eval: Arc<ScalarFn>,
        gradient: Option<Arc<GradientFn>>,
    },
    Bracket(Box<Observable>, Box<Observable>),
}

/// A real function on phase space, optionally with an analytic gradient.
#[derive(Clone)]
pub struct Observable {
    label: String,
    space: PhaseSpace,
    kind: Kind,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("label", &self.label)
            .field("n", &self.space.n)
            .field("analytic_gradient", &self.has_analytic_gradient())
            .finish()
    }
}

const GRADIENT_CHECK_POINTS: usize = 100;
const GRADIENT_CHECK_TOL: f64 = 1e-6;

impl Observable {
    /// An observable differentiated by finite differences.
    pub fn new(
        label: impl Into<String>,
        space: PhaseSpace,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            space,
            kind: Kind::Function {
                eval: Arc::new(eval),
                gradient: None,
            },
        }
    }

    /// An observable with an analytic gradient, checked against central
    /// differences at 100 seeded random points in `[-2, 2]^{2n}`.
    pub fn with_gradient(
        label: impl Into<String>,
        space: PhaseSpace,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let eval: Arc<ScalarFn> = Arc::new(eval);
        let gradient: Arc<GradientFn> = Arc::new(gradient);
        let label = label.into();
        let unchecked = Self {
            label: label.clone(),
            space,
            kind: Kind::Function {
                eval: eval.clone(),
                gradient: None,
            },
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_7ab1e);
        for _ in 0..GRADIENT_CHECK_POINTS {
            let x: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let analytic = gradient(&x);
            if analytic.len() != space.dim() {
                return Err(Error::Observable {
                    label,
                    reason: format!(
                        "gradient has {} components, expected {}",
                        analytic.len(),
                        space.dim()
                    ),
                });
            }
            let numeric = unchecked.gradient(&x)?;
            for (a, b) in analytic.iter().zip(&numeric) {
                let error = (a - b).abs() / a.abs().max(1.0);
                if !(error <= GRADIENT_CHECK_TOL) {
                    return Err(Error::GradientMismatch { label, error });
                }
            }
        }
        Ok(Self {
            label,
            space,
            kind: Kind::Function {
                eval,
                gradient: Some(gradient),
            },
        })
    }

    /// `q^k` with its exact gradient.
    pub fn position(space: PhaseSpace, k: usize) -> Self {
        Self::coordinate(space, space.q(k), format!("q{}", k + 1))
    }

    /// `p_k` with its exact gradient.
    pub fn momentum(space: PhaseSpace, k: usize) -> Self {
        Self::coordinate(space, space.p(k), format!("p{}", k + 1))
    }

    fn coordinate(space: PhaseSpace, index: usize, label: String) -> Self {
        let dim = space.dim();
        Self {
            label,
            space,
            kind: Kind::Function {
                eval: Arc::new(move |x: &[f64]| x[index]),
                gradient: Some(Arc::new(move |_: &[f64]| {
                    let mut g = vec![0.0; dim];
                    g[index] = 1.0;
                    g
                })),
            },
        }
    }

    pub fn constant(space: PhaseSpace, value: f64) -> Self {
        let dim = space.dim();
        Self {
            label: format!("const({value})"),
            space,
            kind: Kind::Function {
                eval: Arc::new(move |_: &[f64]| value),
                gradient: Some(Arc::new(move |_: &[f64]| vec![0.0; dim])),
            },
        }
    }

    /// `{f, g}` as an observable; its gradient comes from finite differences.
    pub fn bracket(f: &Observable, g: &Observable) -> Self {
        Self {
            label: format!("{{{}, {}}}", f.label, g.label),
            space: f.space,
            kind: Kind::Bracket(Box::new(f.clone()), Box::new(g.clone())),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn has_analytic_gradient(&self) -> bool {
        matches!(
            self.kind,
            Kind::Function {
                gradient: Some(_),
                ..
            }
        )
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.space.dim() {
            return Err(Error::Observable {
                label: self.label.clone(),
                reason: format!(
                    "point has {} coordinates, expected {}",
                    x.len(),
                    self.space.dim()
                ),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let v = match &self.kind {
            Kind::Function { eval, .. } => eval(x),
            Kind::Bracket(f, g) => poisson(f, g, x)?,
        };
        if !v.is_finite() {
            return Err(Error::Observable {
                label: self.label.clone(),
                reason: format!("non-finite value {v} at {x:?}"),
            });
        }
        Ok(v)
    }

    /// Analytic gradient when available, otherwise 4th-order central
    /// differences with `h = eps^(1/3) max(1, |x_i|)`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let g = match &self.kind {
            Kind::Function {
                gradient: Some(grad),
                ..
            } => grad(x),
            _ => {
                let mut g = Vec::with_capacity(x.len());
                let mut probe = x.to_vec();
                for i in 0..x.len() {
                    let h = fd_step(x[i]);
                    let mut at = |offset: f64| -> Result<f64> {
                        probe[i] = x[i] + offset;
                        let v = self.value(&probe);
                        probe[i] = x[i];
                        v
                    };
                    let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
                    g.push((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h));
                }
                g
            }
        };
        if let Some(bad) = g.iter().find(|v| !v.is_finite()) {
            return Err(Error::Observable {
                label: self.label.clone(),
                reason: format!("non-finite gradient component {bad} at {x:?}"),
            });
        }
        Ok(g)
    }
}

fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// `{f, g}(x) = sum_k df/dp_k dg/dq^k - df/dq^k dg/dp_k`.
pub fn poisson(f: &Observable, g: &Observable, x: &[f64]) -> Result<f64> {
    let n = f.space.n();
    if g.space.n() != n {
        return Err(Error::DimensionMismatch {
            context: "bracket phase spaces",
            left: n,
            right: g.space.n(),
        });
    }
    let df = f.gradient(x)?;
    let dg = g.gradient(x)?;
    Ok((0..n).fold(0.0, |acc, k| acc + (df[n + k] * dg[k] - df[k] * dg[n + k])))
}

/// `X_f = (df/dp_1..df/dp_n, -df/dq^1..-df/dq^n)`.
pub fn hamiltonian_vector_field(f: &Observable, x: &[f64]) -> Result<Vec<f64>> {
    let n = f.space.n();
    let df = f.gradient(x)?;
    let mut out = Vec::with_capacity(2 * n);
    out.extend_from_slice(&df[n..]);
    out.extend(df[..n].iter().map(|v| -v));
    Ok(out)
}

/// `{f, {g, h}} - {{f, g}, h} - {g, {f, h}}` in absolute value.
pub fn jacobi_residual(f: &Observable, g: &Observable, h: &Observable, x: &[f64]) -> Result<f64> {
    let gh = Observable::bracket(g, h);
    let fg = Observable::bracket(f, g);
    let fh = Observable::bracket(f, h);
    let r = poisson(f, &gh, x)? - poisson(&fg, h, x)? - poisson(g, &fh, x)?;
    Ok(r.abs())
}

/// `||[X_f, X_g](x) - X_{f,g}(x)||_inf`, with `[X, Y] = DY X - DX Y` and the
/// Jacobians taken by central differences of the vector fields.
pub fn vf_commutator_residual(f: &Observable, g: &Observable, x: &[f64]) -> Result<f64> {
    let xf = hamiltonian_vector_field(f, x)?;
    let xg = hamiltonian_vector_field(g, x)?;
    let dxf = field_jacobian(f, x)?;
    let dxg = field_jacobian(g, x)?;
    let xfg = hamiltonian_vector_field(&Observable::bracket(f, g), x)?;
    let d = x.len();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        let mut lie = 0.0;
        for j in 0..d {
            lie += dxg[i * d + j] * xf[j] - dxf[i * d + j] * xg[j];
        }
        worst = worst.max((lie - xfg[i]).abs());
    }
    Ok(worst)
}

/// Row-major Jacobian of `X_f` by 4th-order central differences.
fn field_jacobian(f: &Observable, x: &[f64]) -> Result<Vec<f64>> {
    let d = x.len();
    let mut jac = vec![0.0; d * d];
    let mut probe = x.to_vec();
    for j in 0..d {
        let h = fd_step(x[j]);
        let mut at = |offset: f64| -> Result<Vec<f64>> {
            probe[j] = x[j] + offset;
            let v = hamiltonian_vector_field(f, &probe);
            probe[j] = x[j];
            v
        };
        let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
        for i in 0..d {
            jac[i * d + j] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        }
    }
    Ok(jac)
}

/// `H = T(p) + V(q)`, both given as observables on the full phase space.
#[derive(Debug, Clone)]
pub struct SeparableSplit {
    pub kinetic: Observable,
    pub potential: Observable,
}

/// A Hamiltonian together with its optional separable split.
#[derive(Debug, Clone)]
pub struct HamiltonianSystem {
    space: PhaseSpace,
    hamiltonian: Observable,
    split: Option<SeparableSplit>,
}

impl HamiltonianSystem {
    pub fn new(hamiltonian: Observable) -> Self {
        Self {
            space: hamiltonian.space(),
            hamiltonian,
            split: None,
        }
    }

    /// Attaches `T + V`, checked against `H` at 100 seeded random points
    /// within `1e-10 max(1, |H|)`.
    pub fn with_split(
        hamiltonian: Observable,
        kinetic: Observable,
        potential: Observable,
    ) -> Result<Self> {
        let space = hamiltonian.space();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e9a_7ab1e);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let h = hamiltonian.value(&x)?;
            let tv = kinetic.value(&x)? + potential.value(&x)?;
            worst = worst.max((h - tv).abs() / h.abs().max(1.0));
        }
        if !(worst <= 1e-10) {
            return Err(Error::SplitMismatch(worst));
        }
        Ok(Self {
            space,
            hamiltonian,
            split: Some(SeparableSplit { kinetic, potential }),
        })
    }

    /// `H = sum_k p_k^2/(2m) + m omega^2 (q^k)^2 / 2`.
    pub fn harmonic(n: usize, mass: f64, omega: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("omega", omega)?;
        let k = mass * omega * omega;
        Self::polynomial(
            "harmonic",
            n,
            mass,
            move |q| 0.5 * k * q * q,
            move |q| k * q,
        )
    }

    /// `H = sum_k p_k^2/(2m)`.
    pub fn free(n: usize, mass: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        Self::polynomial("free", n, mass, |_| 0.0, |_| 0.0)
    }

    /// `H = sum_k p_k^2/(2m) + lambda (q^k)^4 / 4`.
    pub fn quartic(n: usize, mass: f64, lambda: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        Self::polynomial(
            "quartic",
            n,
            mass,
            move |q| 0.25 * lambda * q.powi(4),
            move |q| lambda * q.powi(3),
        )
    }

    fn polynomial(
        name: &str,
        n: usize,
        mass: f64,
        v: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
        dv: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
    ) -> Result<Self> {
        let space = PhaseSpace::new(n)?;
        let t = move |x: &[f64]| x[n..].iter().map(|p| p * p).sum::<f64>() / (2.0 * mass);
        let vq = move |x: &[f64]| x[..n].iter().map(|&q| v(q)).sum::<f64>();
        let kinetic = Observable::with_gradient("T", space, t, move |x| {
            let mut g = vec![0.0; 2 * n];
            for k in 0..n {
                g[n + k] = x[n + k] / mass;
            }
            g
        })?;
        let potential = Observable::with_gradient("V", space, vq, move |x| {
            let mut g = vec![0.0; 2 * n];
            for k in 0..n {
                g[k] = dv(x[k]);
            }
            g
        })?;
        let h = Observable::with_gradient(
            name,
            space,
            move |x| t(x) + vq(x),
            move |x| {
                let mut g = vec![0.0; 2 * n];
                for k in 0..n {
                    g[k] = dv(x[k]);
                    g[n + k] = x[n + k] / mass;
                }
                g
            },
        )?;
        Self::with_split(h, kinetic, potential)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn hamiltonian(&self) -> &Observable {
        &self.hamiltonian
    }

    pub fn split(&self) -> Option<&SeparableSplit> {
        self.split.as_ref()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )));
    }
    Ok(())
}

/// Structure-preserving one-step maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Kick-drift-kick leapfrog; needs a separable split.
    StormerVerlet,
    /// `p' = p - dt dH/dq(q, p')`, `q' = q + dt dH/dp(q, p')`.
    SymplecticEuler,
}

impl Integrator {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::StormerVerlet => "stormer-verlet",
            Self::SymplecticEuler => "symplectic-euler",
        }
    }
}

/// Equally spaced samples of a flow.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `max_k |H_k - H_0|`.
    pub fn max_energy_drift(&self) -> f64 {
        let h0 = self.energies[0];
        self.energies
            .iter()
            .map(|h| (h - h0).abs())
            .fold(0.0, f64::max)
    }

    /// Rows `t, q.., p.., H`.
    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.times
            .iter()
            .zip(&self.states)
            .zip(&self.energies)
            .map(|((&t, x), &h)| {
                let mut row = Vec::with_capacity(x.len() + 2);
                row.push(t);
                row.extend_from_slice(x);
                row.push(h);
                row
            })
    }
}

const FIXED_POINT_CAP: usize = 20;
const FIXED_POINT_TOL: f64 = 1e-12;

/// Advances `x0` by `steps` steps of size `dt`.
pub fn evolve(
    sys: &HamiltonianSystem,
    x0: &[f64],
    dt: f64,
    steps: usize,
    integrator: Integrator,
) -> Result<Trajectory> {
    if x0.len() != sys.space.dim() {
        return Err(Error::DimensionMismatch {
            context: "initial state vs phase space",
            left: x0.len(),
            right: sys.space.dim(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if integrator == Integrator::StormerVerlet && sys.split.is_none() {
        return Err(Error::MissingSplit);
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    energies.push(sys.hamiltonian.value(&x)?);
    states.push(x.clone());
    for step in 1..=steps {
        x = step_once(sys, &x, dt, integrator, step)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState(step));
        }
        times.push(step as f64 * dt);
        energies.push(sys.hamiltonian.value(&x)?);
        states.push(x.clone());
    }
    Ok(Trajectory {
        dt,
        times,
        states,
        energies,
    })
}

/// One step of `integrator` from `x`.
pub fn step_once(
    sys: &HamiltonianSystem,
    x: &[f64],
    dt: f64,
    integrator: Integrator,
    step: usize,
) -> Result<Vec<f64>> {
    let n = sys.space.n();
    let mut out = x.to_vec();
    match (integrator, &sys.split) {
        (Integrator::StormerVerlet, Some(split)) => {
            let dv = split.potential.gradient(&out)?;
            for k in 0..n {
                out[n + k] -= 0.5 * dt * dv[k];
            }
            let dt_kin = split.kinetic.gradient(&out)?;
            for k in 0..n {
                out[k] += dt * dt_kin[n + k];
            }
            let dv = split.potential.gradient(&out)?;
            for k in 0..n {
                out[n + k] -= 0.5 * dt * dv[k];
            }
        }
        (Integrator::StormerVerlet, None) => return Err(Error::MissingSplit),
        (Integrator::SymplecticEuler, Some(split)) => {
            let dv = split.potential.gradient(&out)?;
            for k in 0..n {
                out[n + k] -= dt * dv[k];
            }
            let dt_kin = split.kinetic.gradient(&out)?;
            for k in 0..n {
                out[k] += dt * dt_kin[n + k];
            }
        }
        (Integrator::SymplecticEuler, None) => {
            // fixed point for p' in p' = p - dt dH/dq(q, p')
            let mut trial = x.to_vec();
            let mut update = f64::INFINITY;
            for _ in 0..FIXED_POINT_CAP {
                let dh = sys.hamiltonian.gradient(&trial)?;
                update = 0.0;
                for k in 0..n {
                    let next = x[n + k] - dt * dh[k];
                    update = update.max((next - trial[n + k]).abs());
                    trial[n + k] = next;
                }
                if update <= contraction_limit(&trial[n..]) {
                    break;
                }
            }
            if !(update <= contraction_limit(&trial[n..])) {
                return Err(Error::FixedPointStalled { step, update });
            }
            let dh = sys.hamiltonian.gradient(&trial)?;
            for k in 0..n {
                out[n + k] = trial[n + k];
                out[k] = x[k] + dt * dh[n + k];
            }
        }
    }
    Ok(out)
}

fn contraction_limit(p: &[f64]) -> f64 {
    FIXED_POINT_TOL * p.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// Jacobian of the one-step map at `x` by central differences.
pub fn step_jacobian(
    sys: &HamiltonianSystem,
    x: &[f64],
    dt: f64,
    integrator: Integrator,
) -> Result<DMatrix<f64>> {
    let d = x.len();
    let mut jac = DMatrix::zeros(d, d);
    let mut probe = x.to_vec();
    for j in 0..d {
        let h = fd_step(x[j]);
        probe[j] = x[j] + h;
        let plus = step_once(sys, &probe, dt, integrator, 1)?;
        probe[j] = x[j] - h;
        let minus = step_once(sys, &probe, dt, integrator, 1)?;
        probe[j] = x[j];
        for i in 0..d {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// `max_k |(f_{k+1} - f_{k-1}) / (2 dt) - {H, f}(x_k)|` over interior samples.
pub fn observable_drift(sys: &HamiltonianSystem, f: &Observable, traj: &Trajectory) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::TrajectoryTooShort(traj.len()));
    }
    let values = traj
        .states
        .iter()
        .map(|x| f.value(x))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for k in 1..traj.len() - 1 {
        let rate = (values[k + 1] - values[k - 1]) / (2.0 * traj.dt);
        let bracket = poisson(&sys.hamiltonian, f, &traj.states[k])?;
        worst = worst.max((rate - bracket).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> PhaseSpace {
        PhaseSpace::new(n).unwrap()
    }

    #[test]
    fn canonical_brackets() {
        let s = space(2);
        let x = [0.3, -1.2, 0.7, 2.0];
        let (q1, q2) = (Observable::position(s, 0), Observable::position(s, 1));
        let (p1, p2) = (Observable::momentum(s, 0), Observable::momentum(s, 1));
        assert_eq!(poisson(&p1, &q1, &x).unwrap(), 1.0);
        assert_eq!(poisson(&q1, &p1, &x).unwrap(), -1.0);
        assert_eq!(poisson(&p1, &q2, &x).unwrap(), 0.0);
        assert_eq!(poisson(&q1, &q2, &x).unwrap(), 0.0);
        assert_eq!(poisson(&p1, &p2, &x).unwrap(), 0.0);
        let h = HamiltonianSystem::harmonic(2, 1.0, 1.0).unwrap();
        assert_eq!(poisson(h.hamiltonian(), h.hamiltonian(), &x).unwrap(), 0.0);
    }

    #[test]
    fn vector_field_examples() {
        let sys = HamiltonianSystem::harmonic(1, 1.0, 1.0).unwrap();
        // oracle: H = (q^2 + p^2)/2 -> X_H = (p, -q)
        assert_eq!(
            hamiltonian_vector_field(sys.hamiltonian(), &[1.0, 0.0]).unwrap(),
            vec![0.0, -1.0]
        );
        let q = Observable::position(space(1), 0);
        assert_eq!(
            hamiltonian_vector_field(&q, &[0.4, 0.9]).unwrap(),
            vec![0.0, -1.0]
        );
        let c = Observable::constant(space(1), 4.2);
        assert_eq!(
            hamiltonian_vector_field(&c, &[0.4, 0.9]).unwrap(),
            vec![0.0, -0.0]
        );
        // the finite-difference fallback only cancels to rounding
        let c_fd = Observable::new("c", space(1), |_| 4.2);
        assert!(hamiltonian_vector_field(&c_fd, &[0.4, 0.9])
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn gradient_validation_catches_wrong_gradients() {
        let err = Observable::with_gradient("bad", space(1), |x| x[0] * x[0], |x| vec![x[0], 0.0])
            .unwrap_err();
        assert!(matches!(err, Error::GradientMismatch { ref label, .. } if label == "bad"));
        let err =
            Observable::with_gradient("short", space(1), |x| x[0], |_| vec![1.0]).unwrap_err();
        assert!(err.to_string().starts_with("short:"));
    }

    #[test]
    fn evaluation_failures_carry_the_label() {
        let blowup = Observable::new("blowup", space(1), |x| 1.0 / x[0]);
        let p = Observable::momentum(space(1), 0);
        let err = poisson(&blowup, &p, &[0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Observable { ref label, .. } if label == "blowup"));
        assert!(poisson(&p, &p, &[1.0]).is_err());
    }

    #[test]
    fn verlet_full_period() {
        let sys = HamiltonianSystem::harmonic(1, 1.0, 1.0).unwrap();
        let traj = evolve(&sys, &[1.0, 0.0], 0.01, 628, Integrator::StormerVerlet).unwrap();
        assert_eq!(traj.len(), 629);
        let last = traj.states.last().unwrap();
        // oracle: exact flow (cos t, -sin t) at t = 6.28
        let t = 628.0 * 0.01_f64;
        assert!((last[0] - t.cos()).abs() < 1e-4 && (last[1] + t.sin()).abs() < 1e-4);
        assert!((last[0] - 1.0).abs() < 5e-3 && last[1].abs() < 5e-3);
    }

    #[test]
    fn free_particle_drifts_linearly() {
        let sys = HamiltonianSystem::free(1, 1.0).unwrap();
        for integrator in [Integrator::StormerVerlet, Integrator::SymplecticEuler] {
            let traj = evolve(&sys, &[0.0, 1.0], 0.125, 40, integrator).unwrap();
            for (t, x) in traj.times.iter().zip(&traj.states) {
                assert_eq!(x[0], *t);
                assert_eq!(x[1], 1.0);
            }
            let traj = evolve(&sys, &[0.0, 1.0], 0.01, 100, integrator).unwrap();
            for (t, x) in traj.times.iter().zip(&traj.states) {
                assert!((x[0] - t).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn step_count_contract() {
        let sys = HamiltonianSystem::harmonic(1, 1.0, 1.0).unwrap();
        assert!(evolve(&sys, &[1.0, 0.0], 0.01, 0, Integrator::StormerVerlet).is_err());
        assert_eq!(
            evolve(&sys, &[1.0, 0.0], 0.01, 1, Integrator::StormerVerlet)
                .unwrap()
                .len(),
            2
        );
        assert!(evolve(&sys, &[1.0, 0.0], -0.01, 1, Integrator::StormerVerlet).is_err());
        let bare = HamiltonianSystem::new(sys.hamiltonian().clone());
        assert_eq!(
            evolve(&bare, &[1.0, 0.0], 0.01, 1, Integrator::StormerVerlet).unwrap_err(),
            Error::MissingSplit
        );
    }

    #[test]
    fn implicit_euler_matches_separable_update() {
        let sys = HamiltonianSystem::quartic(1, 1.0, 0.5).unwrap();
        let bare = HamiltonianSystem::new(sys.hamiltonian().clone());
        let a = evolve(&sys, &[0.8, -0.2], 0.01, 50, Integrator::SymplecticEuler).unwrap();
        let b = evolve(&bare, &[0.8, -0.2], 0.01, 50, Integrator::SymplecticEuler).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x[0] - y[0]).abs() < 1e-12 && (x[1] - y[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_states_abort() {
        let s = space(1);
        let h = Observable::with_gradient(
            "runaway",
            s,
            |x| x[1] * x[1] / 2.0 - x[0].powi(6),
            |x| vec![-6.0 * x[0].powi(5), x[1]],
        )
        .unwrap();
        let t =
            Observable::with_gradient("T", s, |x| x[1] * x[1] / 2.0, |x| vec![0.0, x[1]]).unwrap();
        let v = Observable::with_gradient(
            "V",
            s,
            |x| -x[0].powi(6),
            |x| vec![-6.0 * x[0].powi(5), 0.0],
        )
        .unwrap();
        let sys = HamiltonianSystem::with_split(h, t, v).unwrap();
        let err = evolve(&sys, &[3.0, 0.0], 0.5, 100, Integrator::StormerVerlet).unwrap_err();
        assert!(matches!(
            err,
            Error::NonFiniteState(_) | Error::Observable { .. }
        ));
    }

    #[test]
    fn drift_of_constant_vanishes() {
        let sys = HamiltonianSystem::harmonic(1, 1.0, 1.0).unwrap();
        let traj = evolve(&sys, &[1.0, 0.0], 0.01, 200, Integrator::StormerVerlet).unwrap();
        let c = Observable::constant(sys.space(), 2.0);
        assert!(observable_drift(&sys, &c, &traj).unwrap() <= 1e-14);
        let short = evolve(&sys, &[1.0, 0.0], 0.01, 1, Integrator::StormerVerlet).unwrap();
        assert_eq!(
            observable_drift(&sys, &c, &short).unwrap_err(),
            Error::TrajectoryTooShort(2)
        );
    }

    #[test]
    fn split_is_checked() {
        let s = space(1);
        let h = Observable::new("H", s, |x| x[0] * x[0] + x[1] * x[1]);
        let t = Observable::new("T", s, |x| x[1] * x[1]);
        let v = Observable::new("V", s, |x| 0.5 * x[0] * x[0]);
        assert!(matches!(
            HamiltonianSystem::with_split(h, t, v),
            Err(Error::SplitMismatch(_))
        ));
    }
}
