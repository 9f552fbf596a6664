//! Dispatch from a parsed config to the library, and report assembly.

use std::path::PathBuf;
use std::time::Instant;

use qkit_core::frames::{resolution_residual, FrameFamily};
use qkit_core::grid::{
    averaging_matrix, checkerboard_profile, commutator_closed_form, commutator_residual,
    gaussian_profile, momentum_operator, position_operator, Grid,
};
use qkit_core::hamiltonian::{evolve, HamiltonianSystem, Integrator};
use qkit_core::hilbert::eig_hermitian;
use qkit_core::quantizer::{lower_symbol, quantize_with, spectrum, ClassicalFunction};
use qkit_core::symplectic::{classify, symplectic_frame, Subspace};
use qkit_core::{Operator, Tolerances, C64};
use serde_json::{json, Map, Value};

use crate::config::{
    parse_config, resolve_form, resolve_frame, resolve_function, resolve_operator, BoundaryName,
    Command, CommutatorConfig, Config, EvolveConfig, FrameCheckConfig, FrameJson, HamiltonianName,
    Profile, QuantizeConfig, SpectrumConfig, SymbolConfig, SymplecticAction, SymplecticConfig,
};
use crate::error::{CliError, Result};
use crate::format::{g17, to_csv, to_json};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOL_OVERRIDE_VAR: &str = "QKIT_TOL_OVERRIDE";

/// Command-line overrides for `commutator`.
#[derive(Debug, Clone, Default)]
pub struct CommutatorFlags {
    pub n: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub hbar: Option<f64>,
    pub boundary: Option<BoundaryName>,
    pub profile: Option<Profile>,
}

/// One `qkit` call, independent of how the arguments were obtained.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub action: Option<String>,
    pub config_text: Option<String>,
    pub out: Option<PathBuf>,
    pub commutator: CommutatorFlags,
    /// Raw value of `QKIT_TOL_OVERRIDE`.
    pub tol_override: Option<String>,
}

impl Invocation {
    pub fn new(command: Command, config_text: impl Into<String>) -> Self {
        Self {
            command,
            action: None,
            config_text: Some(config_text.into()),
            out: None,
            commutator: CommutatorFlags::default(),
            tol_override: None,
        }
    }
}

/// What a run produced. Nothing has been written yet.
#[derive(Debug, Clone)]
pub struct Execution {
    pub report: String,
    pub exit_code: i32,
    /// `None` means stdout.
    pub report_path: Option<PathBuf>,
    /// Side tables (CSV) with their destinations.
    pub files: Vec<(PathBuf, String)>,
}

struct Outcome {
    results: Value,
    residuals: Value,
    files: Vec<(PathBuf, String)>,
    /// Set when the run completed but a numerical check failed.
    failure: Option<CliError>,
}

impl Outcome {
    fn ok(results: Value, residuals: Value) -> Self {
        Self {
            results,
            residuals,
            files: Vec::new(),
            failure: None,
        }
    }
}

pub fn tolerances(raw: Option<&str>) -> Result<Tolerances> {
    match raw {
        None => Ok(Tolerances::default()),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(f) if f > 0.0 && f.is_finite() => Ok(Tolerances::default().scaled(f)),
            _ => Err(CliError::Input(format!(
                "{TOL_OVERRIDE_VAR} must be a positive number, got {s:?}"
            ))),
        },
    }
}

pub fn execute(inv: &Invocation) -> Execution {
    let start = Instant::now();
    let mut report_path = inv.out.clone();
    let outcome = prepare(inv).and_then(|(config, tol)| {
        if report_path.is_none() {
            report_path = config.out().map(PathBuf::from);
        }
        let echo = config.echo();
        dispatch(&config, &tol).map(|o| (echo, o))
    });
    let elapsed = start.elapsed().as_millis() as u64;
    let mut report = Map::new();
    report.insert("command".into(), json!(inv.command.as_str()));
    report.insert("version".into(), json!(VERSION));
    let (exit_code, files) = match outcome {
        Ok((echo, o)) => {
            report.insert("config".into(), echo);
            report.insert("results".into(), o.results);
            report.insert("residuals".into(), o.residuals);
            report.insert("wall_time_ms".into(), json!(elapsed));
            match o.failure {
                Some(e) => {
                    report.insert("error".into(), error_json(&e));
                    (e.exit_code(), o.files)
                }
                None => (0, o.files),
            }
        }
        Err(e) => {
            report.insert("error".into(), error_json(&e));
            (e.exit_code(), Vec::new())
        }
    };
    Execution {
        report: to_json(&Value::Object(report)),
        exit_code,
        report_path,
        files,
    }
}

fn error_json(e: &CliError) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    if let Some(code) = e.code() {
        m.insert("code".into(), json!(code));
    }
    if let Some(path) = e.path() {
        m.insert("path".into(), json!(path));
    }
    Value::Object(m)
}

fn prepare(inv: &Invocation) -> Result<(Config, Tolerances)> {
    let tol = tolerances(inv.tol_override.as_deref())?;
    let mut config = match (&inv.config_text, inv.command) {
        (Some(text), _) => parse_config(text)?,
        (None, Command::Commutator) => Config::Commutator(CommutatorConfig::default()),
        (None, c) => return Err(CliError::Input(format!("`{c}` needs --config <path>"))),
    };
    if config.command() != inv.command {
        return Err(CliError::Input(format!(
            "config is for `{}` but `{}` was invoked",
            config.command(),
            inv.command
        )));
    }
    match &mut config {
        Config::Commutator(c) => {
            let f = &inv.commutator;
            c.n = f.n.unwrap_or(c.n);
            c.a = f.a.unwrap_or(c.a);
            c.b = f.b.unwrap_or(c.b);
            c.hbar = f.hbar.unwrap_or(c.hbar);
            c.boundary = f.boundary.unwrap_or(c.boundary);
            c.profile = f.profile.unwrap_or(c.profile);
        }
        Config::Symplectic(c) => {
            if let Some(action) = &inv.action {
                c.action = action.parse()?;
            }
        }
        _ if inv.action.is_some() => {
            return Err(CliError::Input(format!(
                "`{}` takes no action argument",
                inv.command
            )))
        }
        _ => {}
    }
    Ok((config, tol))
}

fn dispatch(config: &Config, tol: &Tolerances) -> Result<Outcome> {
    match config {
        Config::FrameCheck(c) => frame_check(c, tol),
        Config::Quantize(c) => run_quantize(c, tol),
        Config::Symbol(c) => run_symbol(c, tol),
        Config::Spectrum(c) => run_spectrum(c, tol),
        Config::Evolve(c) => run_evolve(c),
        Config::Symplectic(c) => run_symplectic(c),
        Config::Commutator(c) => run_commutator(c),
    }
}

fn pair(z: &C64) -> Value {
    json!([z.re, z.im])
}

fn operator_rows(a: &Operator) -> Value {
    Value::Array(
        a.rows()
            .map(|row| Value::Array(row.iter().map(pair).collect()))
            .collect(),
    )
}

fn frame_check(c: &FrameCheckConfig, tol: &Tolerances) -> Result<Outcome> {
    let frame = resolve_frame(&c.frame, "$.frame", tol)?;
    let residual = resolution_residual(&frame);
    let trace_sum: f64 = frame
        .operators()
        .iter()
        .zip(frame.space().weights())
        .map(|(m, w)| w * m.trace().re)
        .sum();
    let passed = residual <= tol.resolution_reject;
    let results = json!({
        "frame": serde_json::to_value(FrameJson::from_frame(&frame)).expect("frame serializes"),
        "label": frame.label(),
        "dim": frame.dim(),
        "n_points": frame.len(),
        "is_density": frame.is_density(),
        "total_mass": frame.space().total_mass(),
        "weighted_trace": trace_sum,
        "resolution_residual": residual,
        "resolves_identity": passed,
        "warn_threshold": tol.resolution_warn,
        "reject_threshold": tol.resolution_reject,
    });
    let mut out = Outcome::ok(results, json!({ "resolution": residual }));
    if !passed {
        out.failure = Some(CliError::Core(qkit_core::Error::ResolutionResidual {
            residual,
            limit: tol.resolution_reject,
        }));
    }
    Ok(out)
}

fn lower_symbol_json(frame: &FrameFamily, values: &ClassicalFunction) -> Value {
    json!({
        "points": frame.space().labels(),
        "values": values.values().iter().map(pair).collect::<Vec<_>>(),
    })
}

fn run_quantize(c: &QuantizeConfig, tol: &Tolerances) -> Result<Outcome> {
    let frame = resolve_frame(&c.frame, "$.frame", tol)?;
    let f = resolve_function(&c.f, "$.f", &frame)?;
    let q = quantize_with(&frame, &f, tol)?;
    let spec = if q.hermitian {
        json!(spectrum(&q)?)
    } else {
        Value::Null
    };
    let symbol = if frame.is_density() {
        lower_symbol_json(&frame, &lower_symbol(&frame, &q.operator)?)
    } else {
        Value::Null
    };
    let results = json!({
        "A": operator_rows(&q.operator),
        "hermitian": q.hermitian,
        "spectrum": spec,
        "lower_symbol": symbol,
        "frame_id": q.frame_id,
        "function_id": q.function_id,
        "warnings": q.warnings,
    });
    let residuals = json!({
        "resolution": q.resolution_residual_at_build,
        "hermiticity": q.operator.hermiticity_defect(),
    });
    Ok(Outcome::ok(results, residuals))
}

fn run_symbol(c: &SymbolConfig, tol: &Tolerances) -> Result<Outcome> {
    let frame = resolve_frame(&c.frame, "$.frame", tol)?;
    let (a, source, residual) = match (&c.f, &c.operator) {
        (Some(f), None) => {
            let f = resolve_function(f, "$.f", &frame)?;
            let q = quantize_with(&frame, &f, tol)?;
            (
                q.operator,
                f.label().to_string(),
                q.resolution_residual_at_build,
            )
        }
        (None, Some(op)) => (
            resolve_operator(op, "$.operator")?,
            "operator".to_string(),
            resolution_residual(&frame),
        ),
        _ => {
            return Err(CliError::Input(
                "`symbol` needs exactly one of `f` and `operator`".into(),
            ))
        }
    };
    let symbol = lower_symbol(&frame, &a)?;
    let mut out = Outcome::ok(
        json!({
            "source": source,
            "lower_symbol": lower_symbol_json(&frame, &symbol),
        }),
        json!({ "resolution": residual }),
    );
    if let Some(path) = &c.csv {
        let mut text = String::from("index,label,re,im\n");
        for (i, (label, z)) in frame
            .space()
            .labels()
            .iter()
            .zip(symbol.values())
            .enumerate()
        {
            text.push_str(&format!("{i},{label},{},{}\n", g17(z.re), g17(z.im)));
        }
        out.files.push((PathBuf::from(path), text));
    }
    Ok(out)
}

fn run_spectrum(c: &SpectrumConfig, tol: &Tolerances) -> Result<Outcome> {
    let (values, residuals) = match (&c.frame, &c.f, &c.operator) {
        (Some(frame), Some(f), None) => {
            let frame = resolve_frame(frame, "$.frame", tol)?;
            let f = resolve_function(f, "$.f", &frame)?;
            let q = quantize_with(&frame, &f, tol)?;
            let values = spectrum(&q)?;
            (
                values,
                json!({ "resolution": q.resolution_residual_at_build }),
            )
        }
        (None, None, Some(op)) => {
            let a = resolve_operator(op, "$.operator")?;
            let limit = tol.hermitian * a.max_abs().max(1.0);
            let eig = eig_hermitian(&a, limit)?;
            (eig.values, json!({ "hermiticity": a.hermiticity_defect() }))
        }
        _ => {
            return Err(CliError::Input(
                "`spectrum` needs either `frame` and `f`, or `operator`".into(),
            ))
        }
    };
    Ok(Outcome::ok(
        json!({ "spectrum": values, "dim": values.len() }),
        residuals,
    ))
}

fn build_system(c: &EvolveConfig) -> Result<HamiltonianSystem> {
    let h = &c.hamiltonian;
    let sys = match h.name {
        HamiltonianName::Harmonic => {
            if h.lambda.is_some() {
                return Err(CliError::Input(
                    "`lambda` does not apply to harmonic".into(),
                ));
            }
            HamiltonianSystem::harmonic(h.n, h.mass, h.omega.unwrap_or(1.0))?
        }
        HamiltonianName::Free => {
            if h.lambda.is_some() || h.omega.is_some() {
                return Err(CliError::Input("free takes only `n` and `mass`".into()));
            }
            HamiltonianSystem::free(h.n, h.mass)?
        }
        HamiltonianName::Quartic => {
            if h.omega.is_some() {
                return Err(CliError::Input("`omega` does not apply to quartic".into()));
            }
            HamiltonianSystem::quartic(h.n, h.mass, h.lambda.unwrap_or(1.0))?
        }
    };
    Ok(sys)
}

fn run_evolve(c: &EvolveConfig) -> Result<Outcome> {
    let sys = build_system(c)?;
    let integrator = Integrator::from(c.integrator);
    let traj = evolve(&sys, &c.x0, c.dt, c.steps, integrator)?;
    let n = sys.space().n();
    let last = traj
        .states
        .last()
        .expect("trajectory has the initial state");
    let drift = traj.max_energy_drift();
    let results = json!({
        "integrator": integrator.as_str(),
        "n": n,
        "steps": c.steps,
        "dt": c.dt,
        "final_time": traj.times.last(),
        "final_state": last,
        "energy_initial": traj.energies[0],
        "energy_final": traj.energies.last(),
        "max_energy_drift": drift,
    });
    let mut out = Outcome::ok(results, json!({ "energy_drift": drift }));
    if let Some(path) = &c.csv {
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|k| format!("q{k}")));
        header.extend((1..=n).map(|k| format!("p{k}")));
        header.push("H".into());
        out.files
            .push((PathBuf::from(path), to_csv(&header, traj.rows())));
    }
    Ok(out)
}

fn run_symplectic(c: &SymplecticConfig) -> Result<Outcome> {
    let form = resolve_form(&c.form, c.n, "$.form")?;
    match c.action {
        SymplecticAction::Classify => {
            let vectors = c
                .vectors
                .as_ref()
                .ok_or_else(|| CliError::Input("`classify` needs `vectors`".into()))?;
            let f = Subspace::span(form.dim(), vectors)?;
            let k = classify(&form, &f)?;
            let results = json!({
                "action": c.action.as_str(),
                "class": k.class().as_str(),
                "isotropic": k.isotropic,
                "coisotropic": k.coisotropic,
                "symplectic": k.symplectic,
                "lagrangian": k.lagrangian,
                "dim": k.dim,
                "complement_dim": k.complement_dim,
                "ambient_dim": form.dim(),
            });
            let residuals =
                json!({ "dimension_sum": (k.dim + k.complement_dim) as i64 - form.dim() as i64 });
            Ok(Outcome::ok(results, residuals))
        }
        SymplecticAction::Frame => {
            if c.vectors.is_some() {
                return Err(CliError::Input("`frame` takes no `vectors`".into()));
            }
            let frame = symplectic_frame(&form)?;
            let defect = frame.defect(&form)?;
            let results = json!({
                "action": c.action.as_str(),
                "u": frame.u,
                "v": frame.v,
                "defect": defect,
            });
            Ok(Outcome::ok(results, json!({ "darboux": defect })))
        }
    }
}

fn run_commutator(c: &CommutatorConfig) -> Result<Outcome> {
    let g = Grid::new(c.n, c.a, c.b, c.boundary.into(), c.hbar)?;
    let psi = match c.profile {
        Profile::Gaussian => gaussian_profile(&g, 0.5 * (c.a + c.b), 1.0)?,
        Profile::Checkerboard => checkerboard_profile(&g)?,
    };
    let residual = commutator_residual(&g, &psi)?;
    let comm = position_operator(&g).commutator(&momentum_operator(&g))?;
    let closed = (&comm - &commutator_closed_form(&g)).max_abs();
    let scaled_average = (&comm - &averaging_matrix(&g).scale(C64::new(0.0, c.hbar))).max_abs();
    let results = json!({
        "n": c.n,
        "spacing": g.spacing(),
        "boundary": g.boundary().as_str(),
        "residual": residual,
        "closed_form_defect": closed,
        "scaled_average_defect": scaled_average,
    });
    Ok(Outcome::ok(results, json!({ "commutator": residual })))
}
