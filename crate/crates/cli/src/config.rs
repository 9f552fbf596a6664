//! Strict JSON configs. Unknown keys are rejected and every schema error
//! carries the JSON path of the offending value.

use std::fmt;
use std::str::FromStr;

use qkit_core::frames::{polygon_frame, DiscreteMeasureSpace, FrameFamily};
use qkit_core::grid::Boundary;
use qkit_core::hamiltonian::Integrator;
use qkit_core::quantizer::ClassicalFunction;
use qkit_core::symplectic::SymplecticForm;
use qkit_core::{Operator, Tolerances, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FrameCheck,
    Quantize,
    Symbol,
    Spectrum,
    Evolve,
    Symplectic,
    Commutator,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Self::FrameCheck,
        Self::Quantize,
        Self::Symbol,
        Self::Spectrum,
        Self::Evolve,
        Self::Symplectic,
        Self::Commutator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FrameCheck => "frame-check",
            Self::Quantize => "quantize",
            Self::Symbol => "symbol",
            Self::Spectrum => "spectrum",
            Self::Evolve => "evolve",
            Self::Symplectic => "symplectic",
            Self::Commutator => "commutator",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::Schema {
                path: "$.command".into(),
                message: format!(
                    "unknown command {s:?}, expected one of {}",
                    Self::ALL.map(|c| c.as_str()).join(", ")
                ),
            })
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrameCheckConfig {
    pub command: String,
    pub frame: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeConfig {
    pub command: String,
    pub frame: Value,
    pub f: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// Lower symbol of `A_f` or of an explicit operator.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    pub command: String,
    pub frame: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Value>,
    /// Where to write the `index,label,re,im` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// Spectrum of `A_f` (`frame` and `f`) or of an explicit Hermitian `operator`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianName {
    Harmonic,
    Free,
    Quartic,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub name: HamiltonianName,
    #[serde(default = "one_usize")]
    pub n: usize,
    #[serde(default = "one_f64")]
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

fn one_usize() -> usize {
    1
}

fn one_f64() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorName {
    #[default]
    StormerVerlet,
    SymplecticEuler,
}

impl From<IntegratorName> for Integrator {
    fn from(value: IntegratorName) -> Self {
        match value {
            IntegratorName::StormerVerlet => Integrator::StormerVerlet,
            IntegratorName::SymplecticEuler => Integrator::SymplecticEuler,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub command: String,
    pub hamiltonian: HamiltonianSpec,
    /// `(q^1..q^n, p_1..p_n)`.
    pub x0: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub integrator: IntegratorName,
    /// Where to write the `t,q..,p..,H` trajectory table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymplecticAction {
    Classify,
    Frame,
}

impl SymplecticAction {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Classify => "classify",
            Self::Frame => "frame",
        }
    }
}

impl FromStr for SymplecticAction {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classify" => Ok(Self::Classify),
            "frame" => Ok(Self::Frame),
            _ => Err(CliError::Input(format!(
                "unknown symplectic action {s:?}, expected classify or frame"
            ))),
        }
    }
}

/// `form` is `"standard"`, `"phase-space"` (both need `n`) or explicit rows.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SymplecticConfig {
    pub command: String,
    pub action: SymplecticAction,
    pub form: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryName {
    Periodic,
    Dirichlet,
}

impl From<BoundaryName> for Boundary {
    fn from(value: BoundaryName) -> Self {
        match value {
            BoundaryName::Periodic => Boundary::Periodic,
            BoundaryName::Dirichlet => Boundary::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Gaussian,
    Checkerboard,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorConfig {
    pub command: String,
    #[serde(default = "default_points")]
    pub n: usize,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    #[serde(default = "one_f64")]
    pub hbar: f64,
    #[serde(default = "default_boundary")]
    pub boundary: BoundaryName,
    #[serde(default = "default_profile")]
    pub profile: Profile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_points() -> usize {
    128
}

fn default_a() -> f64 {
    -8.0
}

fn default_b() -> f64 {
    8.0
}

fn default_boundary() -> BoundaryName {
    BoundaryName::Periodic
}

fn default_profile() -> Profile {
    Profile::Gaussian
}

impl Default for CommutatorConfig {
    fn default() -> Self {
        Self {
            command: Command::Commutator.as_str().into(),
            n: default_points(),
            a: default_a(),
            b: default_b(),
            hbar: 1.0,
            boundary: default_boundary(),
            profile: default_profile(),
            out: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Config {
    FrameCheck(FrameCheckConfig),
    Quantize(QuantizeConfig),
    Symbol(SymbolConfig),
    Spectrum(SpectrumConfig),
    Evolve(EvolveConfig),
    Symplectic(SymplecticConfig),
    Commutator(CommutatorConfig),
}

impl Config {
    pub fn command(&self) -> Command {
        match self {
            Self::FrameCheck(_) => Command::FrameCheck,
            Self::Quantize(_) => Command::Quantize,
            Self::Symbol(_) => Command::Symbol,
            Self::Spectrum(_) => Command::Spectrum,
            Self::Evolve(_) => Command::Evolve,
            Self::Symplectic(_) => Command::Symplectic,
            Self::Commutator(_) => Command::Commutator,
        }
    }

    /// The `out` key, if the config names one.
    pub fn out(&self) -> Option<&str> {
        match self {
            Self::FrameCheck(c) => c.out.as_deref(),
            Self::Quantize(c) => c.out.as_deref(),
            Self::Symbol(c) => c.out.as_deref(),
            Self::Spectrum(c) => c.out.as_deref(),
            Self::Evolve(c) => c.out.as_deref(),
            Self::Symplectic(c) => c.out.as_deref(),
            Self::Commutator(c) => c.out.as_deref(),
        }
    }

    /// The config as it will be echoed in the report.
    pub fn echo(&self) -> Value {
        let v = match self {
            Self::FrameCheck(c) => serde_json::to_value(c),
            Self::Quantize(c) => serde_json::to_value(c),
            Self::Symbol(c) => serde_json::to_value(c),
            Self::Spectrum(c) => serde_json::to_value(c),
            Self::Evolve(c) => serde_json::to_value(c),
            Self::Symplectic(c) => serde_json::to_value(c),
            Self::Commutator(c) => serde_json::to_value(c),
        };
        v.expect("configs serialize")
    }
}

/// Parses and schema-checks a config. Frames, functions and forms are
/// resolved later, against the tolerances in force.
pub fn parse_config(text: &str) -> Result<Config> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let command = match value.get("command") {
        Some(Value::String(s)) => s.parse::<Command>()?,
        Some(_) => {
            return Err(CliError::Schema {
                path: "$.command".into(),
                message: "expected a string".into(),
            })
        }
        None if value.is_object() => {
            return Err(CliError::Schema {
                path: "$".into(),
                message: "missing field `command`".into(),
            })
        }
        None => {
            return Err(CliError::Schema {
                path: "$".into(),
                message: "expected an object".into(),
            })
        }
    };
    Ok(match command {
        Command::FrameCheck => Config::FrameCheck(at(&value, "$")?),
        Command::Quantize => Config::Quantize(at(&value, "$")?),
        Command::Symbol => Config::Symbol(at(&value, "$")?),
        Command::Spectrum => Config::Spectrum(at(&value, "$")?),
        Command::Evolve => Config::Evolve(at(&value, "$")?),
        Command::Symplectic => Config::Symplectic(at(&value, "$")?),
        Command::Commutator => Config::Commutator(at(&value, "$")?),
    })
}

/// Deserializes `value`, reporting failures under the JSON path `prefix`.
pub fn at<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{inner}")
        };
        CliError::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })
}

fn schema(path: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Explicit frame in JSON.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrameJson {
    pub points: Vec<String>,
    pub weights: Vec<f64>,
    pub operators: Vec<OperatorJson>,
    pub is_density: bool,
}

/// A `d x d` operator: `d^2` row-major `[re, im]` pairs, or `d` rows of pairs.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OperatorJson {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

impl OperatorJson {
    pub fn from_operator(op: &Operator) -> Self {
        Self::Flat(op.entries().iter().map(|z| [z.re, z.im]).collect())
    }

    pub fn to_operator(&self) -> qkit_core::Result<Operator> {
        match self {
            Self::Flat(pairs) => {
                Operator::from_entries(pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
            }
            Self::Rows(rows) => Operator::from_rows(
                rows.iter()
                    .map(|row| row.iter().map(|[re, im]| C64::new(*re, *im)).collect())
                    .collect(),
            ),
        }
    }
}

impl FrameJson {
    pub fn from_frame(frame: &FrameFamily) -> Self {
        Self {
            points: frame.space().labels().to_vec(),
            weights: frame.space().weights().to_vec(),
            operators: frame
                .operators()
                .iter()
                .map(OperatorJson::from_operator)
                .collect(),
            is_density: frame.is_density(),
        }
    }
}

/// `"polygon:N"` or an explicit frame object.
pub fn resolve_frame(value: &Value, path: &str, tol: &Tolerances) -> Result<FrameFamily> {
    match value {
        Value::String(s) => {
            let n = s.strip_prefix("polygon:").ok_or_else(|| {
                schema(
                    path,
                    format!("unknown frame shorthand {s:?}, expected polygon:N"),
                )
            })?;
            let n: usize = n.parse().map_err(|_| {
                schema(
                    path,
                    format!("polygon size {n:?} is not a non-negative integer"),
                )
            })?;
            Ok(polygon_frame(n)?)
        }
        Value::Object(_) => {
            let json: FrameJson = at(value, path)?;
            let space = DiscreteMeasureSpace::new(json.points, json.weights)?;
            let operators = json
                .operators
                .iter()
                .map(OperatorJson::to_operator)
                .collect::<qkit_core::Result<Vec<_>>>()?;
            Ok(FrameFamily::with_tolerances(
                "custom",
                space,
                operators,
                json.is_density,
                tol,
            )?)
        }
        _ => Err(schema(path, "expected \"polygon:N\" or a frame object")),
    }
}

/// A builtin name, a list of reals, or a list of `[re, im]` pairs.
pub fn resolve_function(
    value: &Value,
    path: &str,
    frame: &FrameFamily,
) -> Result<ClassicalFunction> {
    match value {
        Value::String(name) => Ok(ClassicalFunction::builtin(name, frame.space())?),
        Value::Array(items) if items.iter().all(Value::is_number) => {
            let values: Vec<f64> = at(value, path)?;
            Ok(ClassicalFunction::from_real("values", &values))
        }
        Value::Array(_) => {
            let pairs: Vec<[f64; 2]> = at(value, path)?;
            Ok(ClassicalFunction::new(
                "values",
                pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
            ))
        }
        _ => Err(schema(path, "expected a function name or a list of values")),
    }
}

pub fn resolve_operator(value: &Value, path: &str) -> Result<Operator> {
    let json: OperatorJson = at(value, path)?;
    Ok(json.to_operator()?)
}

pub fn resolve_form(value: &Value, n: Option<usize>, path: &str) -> Result<SymplecticForm> {
    let named = |build: fn(usize) -> SymplecticForm| match n {
        Some(n) if n > 0 => Ok(build(n)),
        _ => Err(schema("$.n", "a named form needs a positive `n`")),
    };
    match value {
        Value::String(s) if s == "standard" => named(SymplecticForm::standard),
        Value::String(s) if s == "phase-space" => named(SymplecticForm::phase_space),
        Value::String(s) => Err(schema(
            path,
            format!("unknown form {s:?}, expected standard, phase-space or a matrix"),
        )),
        _ => {
            let rows: Vec<Vec<f64>> = at(value, path)?;
            let form = SymplecticForm::from_rows(&rows)?;
            if let Some(n) = n {
                if n != form.n() {
                    return Err(schema(
                        "$.n",
                        format!("form has n = {}, config says {n}", form.n()),
                    ));
                }
            }
            Ok(form)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_configs_parse() {
        let c = parse_config(r#"{"command":"frame-check","frame":"polygon:5"}"#).unwrap();
        assert_eq!(c.command(), Command::FrameCheck);
        let c =
            parse_config(r#"{"command":"quantize","frame":"polygon:5","f":"delta:0"}"#).unwrap();
        assert_eq!(c.command(), Command::Quantize);
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let err =
            parse_config(r#"{"command":"frame-check","frame":"polygon:5","tol":1}"#).unwrap_err();
        assert_eq!(err.kind(), "schema_error");
        assert!(err.to_string().contains("unknown field `tol`"), "{err}");

        let text = r#"{"command":"evolve","hamiltonian":{"name":"harmonic","omgea":1},
                       "x0":[1,0],"dt":0.01,"steps":3}"#;
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.path(), Some("$.hamiltonian.omgea"));
        assert!(err.to_string().contains("omgea"));
    }

    #[test]
    fn bad_values_report_their_path() {
        let text = r#"{"command":"evolve","hamiltonian":{"name":"harmonic"},
                       "x0":[1,"zero"],"dt":0.01,"steps":3}"#;
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.path(), Some("$.x0[1]"));
        let err = parse_config(r#"{"command":"warp"}"#).unwrap_err();
        assert_eq!(err.path(), Some("$.command"));
        let err = parse_config("{\"command\": ").unwrap_err();
        assert_eq!(err.kind(), "parse_error");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn two_gon_is_rejected() {
        let tol = Tolerances::default();
        let err = resolve_frame(&Value::String("polygon:2".into()), "$.frame", &tol).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(err.code(), Some("polygon_too_small"));
        assert!(err.to_string().contains("N >= 3"));
    }

    #[test]
    fn explicit_frame_schema_paths() {
        let tol = Tolerances::default();
        let v: Value = serde_json::from_str(
            r#"{"points":["a"],"weights":[1],"operators":[[[1,0]]],"is_density":true,"extra":0}"#,
        )
        .unwrap();
        let err = resolve_frame(&v, "$.frame", &tol).unwrap_err();
        assert_eq!(err.path(), Some("$.frame.extra"));
        let v: Value = serde_json::from_str(
            r#"{"points":["a"],"weights":["x"],"operators":[[[1,0]]],"is_density":true}"#,
        )
        .unwrap();
        let err = resolve_frame(&v, "$.frame", &tol).unwrap_err();
        assert_eq!(err.path(), Some("$.frame.weights[0]"));
    }

    #[test]
    fn operator_layouts_agree() {
        let flat: Value = serde_json::from_str("[[1,0],[0,2],[0,-2],[3,0]]").unwrap();
        let rows: Value = serde_json::from_str("[[[1,0],[0,2]],[[0,-2],[3,0]]]").unwrap();
        assert_eq!(
            resolve_operator(&flat, "$.operator").unwrap(),
            resolve_operator(&rows, "$.operator").unwrap()
        );
    }
}
