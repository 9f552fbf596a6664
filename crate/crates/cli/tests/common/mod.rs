#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BUNDLED: [(&str, &str); 5] = [
    ("frame-check", "sea_star_frame_check"),
    ("quantize", "delta_quantize"),
    ("symbol", "lower_symbol_table"),
    ("evolve", "harmonic_evolve"),
    ("symplectic", "subspace_classify"),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn config_path(name: &str) -> PathBuf {
    crate_dir().join("configs").join(format!("{name}.json"))
}

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir()
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

pub fn qkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkit"))
        .args(args)
        .env_remove("QKIT_TOL_OVERRIDE")
        .output()
        .expect("qkit runs")
}

pub fn run_config(command: &str, config: &Path) -> Output {
    qkit(&[command, "--config", config.to_str().unwrap()])
}

/// The wall-time field is the one nondeterministic value in a report.
pub fn normalize(report: &str) -> String {
    report
        .lines()
        .map(|line| match line.strip_prefix("  \"wall_time_ms\": ") {
            Some(rest) => {
                let tail = if rest.ends_with(',') { "," } else { "" };
                format!("  \"wall_time_ms\": 0{tail}")
            }
            None => line.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}
