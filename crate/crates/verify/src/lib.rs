//! Seeded fixtures, reference oracles and the bundled example runs shared by the
//! qkit acceptance suite.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use qkit_cli::{execute, Command, Invocation};
use qkit_core::frames::{cs_frame, DiscreteMeasureSpace, FrameFamily};
use qkit_core::symplectic::{Subspace, SymplecticForm};
use qkit_core::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Example configs shipped with the CLI, paired with the command they drive.
pub const BUNDLED: [(&str, &str); 5] = [
    ("frame-check", "sea_star_frame_check"),
    ("quantize", "delta_quantize"),
    ("symbol", "lower_symbol_table"),
    ("evolve", "harmonic_evolve"),
    ("symplectic", "subspace_classify"),
];

fn cli_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("cli")
}

pub fn config_path(name: &str) -> PathBuf {
    cli_dir().join("configs").join(format!("{name}.json"))
}

pub fn golden_path(name: &str) -> PathBuf {
    cli_dir()
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

/// Zeroes the wall-time field, the one nondeterministic value in a report.
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

/// Runs a bundled config through the CLI pipeline and returns the exit code
/// with the normalized report bytes.
pub fn run_bundled(command: &str, name: &str) -> (i32, String) {
    let text = fs::read_to_string(config_path(name)).expect("bundled config");
    let command: Command = command.parse().expect("known command");
    let exec = execute(&Invocation::new(command, text));
    (exec.exit_code, normalize(&exec.report))
}

pub fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}
/// Rank-one density frame from the rows of a random `n x d` isometry.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, d: usize) -> FrameFamily {
    let mut cols: Vec<Vec<C64>> = Vec::new();
    while cols.len() < d {
        let mut v: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let weights: Vec<f64> = (0..n)
        .map(|i| cols.iter().map(|col| col[i].norm_sqr()).sum())
        .collect();
    let functions: Vec<Vec<C64>> = cols
        .iter()
        .map(|col| {
            col.iter()
                .zip(&weights)
                .map(|(z, w)| z / w.sqrt())
                .collect()
        })
        .collect();
    let space =
        DiscreteMeasureSpace::new((0..n).map(|i| format!("x{i}")).collect(), weights).unwrap();
    cs_frame("random", space, &functions).unwrap()
}
/// Circular convolution through the discrete Fourier transform.
pub fn dft_convolve(f: &[f64], k: &[f64]) -> Vec<f64> {
    let n = f.len();
    let dft = |x: &[f64], sign: f64| -> Vec<C64> {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|m| C64::from_polar(x[m], sign * 2.0 * PI * (j * m) as f64 / n as f64))
                    .sum()
            })
            .collect()
    };
    let (ff, kk) = (dft(f, -1.0), dft(k, -1.0));
    let prod: Vec<C64> = ff.iter().zip(&kk).map(|(a, b)| a * b).collect();
    (0..n)
        .map(|m| {
            let s: C64 = (0..n)
                .map(|j| prod[j] * C64::from_polar(1.0, 2.0 * PI * (j * m) as f64 / n as f64))
                .sum();
            s.re / n as f64
        })
        .collect()
}
pub fn random_form(rng: &mut ChaCha8Rng, n: usize) -> SymplecticForm {
    let d = 2 * n;
    let j = SymplecticForm::standard(n);
    loop {
        let m: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let mut s = 0.0;
                        for r in 0..d {
                            for t in 0..d {
                                s += m[r][a] * j.matrix()[(r, t)] * m[t][b];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        if let Ok(form) = SymplecticForm::from_rows(&rows) {
            return form;
        }
    }
}
pub fn random_subspace(rng: &mut ChaCha8Rng, ambient: usize) -> Subspace {
    let k = rng.gen_range(0..=ambient);
    let vectors: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..ambient).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    Subspace::span(ambient, &vectors).unwrap()
}
