use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qkit_cli::config::{BoundaryName, Profile};
use qkit_cli::run::{CommutatorFlags, TOL_OVERRIDE_VAR};
use qkit_cli::{execute, Command, Invocation};

/// Integral quantization and symplectic checks from JSON configs.
#[derive(Debug, Parser)]
#[command(name = "qkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Io {
    /// JSON config.
    #[arg(long)]
    config: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Periodic,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Gaussian,
    Checkerboard,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Resolution-of-identity check for a frame.
    FrameCheck(Io),
    /// A_f with spectrum and lower symbol.
    Quantize(Io),
    /// Lower symbol table.
    Symbol(Io),
    /// Eigenvalues of A_f or of a Hermitian matrix.
    Spectrum(Io),
    /// Integrate a builtin Hamiltonian.
    Evolve(Io),
    /// Classify a subspace or build a Darboux basis.
    Symplectic {
        /// `classify` or `frame`; overrides the config.
        action: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Canonical commutator on a grid.
    Commutator {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        hbar: Option<f64>,
        #[arg(long, value_enum)]
        boundary: Option<BoundaryArg>,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn invocation(cli: Cli) -> Result<Invocation, String> {
    let tol_override = std::env::var(TOL_OVERRIDE_VAR).ok();
    let simple = |command: Command, io: Io| -> Result<Invocation, String> {
        let mut inv = Invocation::new(command, read(&io.config)?);
        inv.out = io.out;
        Ok(inv)
    };
    let mut inv = match cli.command {
        Cmd::FrameCheck(io) => simple(Command::FrameCheck, io)?,
        Cmd::Quantize(io) => simple(Command::Quantize, io)?,
        Cmd::Symbol(io) => simple(Command::Symbol, io)?,
        Cmd::Spectrum(io) => simple(Command::Spectrum, io)?,
        Cmd::Evolve(io) => simple(Command::Evolve, io)?,
        Cmd::Symplectic { action, io } => {
            let mut inv = simple(Command::Symplectic, io)?;
            inv.action = action;
            inv
        }
        Cmd::Commutator {
            config,
            out,
            n,
            a,
            b,
            hbar,
            boundary,
            profile,
        } => {
            let config_text = config.as_deref().map(read).transpose()?;
            Invocation {
                command: Command::Commutator,
                action: None,
                config_text,
                out,
                commutator: CommutatorFlags {
                    n,
                    a,
                    b,
                    hbar,
                    boundary: boundary.map(|b| match b {
                        BoundaryArg::Periodic => BoundaryName::Periodic,
                        BoundaryArg::Dirichlet => BoundaryName::Dirichlet,
                    }),
                    profile: profile.map(|p| match p {
                        ProfileArg::Gaussian => Profile::Gaussian,
                        ProfileArg::Checkerboard => Profile::Checkerboard,
                    }),
                },
                tol_override: None,
            }
        }
    };
    inv.tol_override = tol_override;
    Ok(inv)
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let inv = match invocation(cli) {
        Ok(inv) => inv,
        Err(message) => {
            let report = serde_json::json!({
                "error": { "kind": "io_error", "message": message },
                "version": qkit_cli::run::VERSION,
            });
            print!("{}", qkit_cli::format::to_json(&report));
            eprintln!("qkit: {message}");
            return ExitCode::from(2);
        }
    };
    let exec = execute(&inv);
    let mut code = exec.exit_code;
    for (path, text) in &exec.files {
        if let Err(message) = write(path, text) {
            eprintln!("qkit: {message}");
            code = 2;
        }
    }
    match &exec.report_path {
        Some(path) => {
            if let Err(message) = write(path, &exec.report) {
                eprintln!("qkit: {message}");
                print!("{}", exec.report);
                code = 2;
            }
        }
        None => print!("{}", exec.report),
    }
    if exec.exit_code != 0 {
        if let Some(message) = serde_json::from_str::<serde_json::Value>(&exec.report)
            .ok()
            .and_then(|v| v["error"]["message"].as_str().map(String::from))
        {
            eprintln!("qkit: {message}");
        }
    }
    ExitCode::from(code as u8)
}
