//! `isospec`: decide how far two small complex matrices agree through every
//! polynomial - identical pseudospectra, polynomial isometry,
//! super-identical pseudospectra, unitary similarity - and cross-check each
//! verdict numerically.
//!
//! Exit codes: 0 classification ran (whatever the verdicts), 2 input error,
//! 3 eigenvalue clusters too close to decide.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use isospec::classify::{self, ClassificationReport, Verdict};
use isospec::polyfun::Polynomial;
use isospec::pseudospectra::{self, GridSpec};
use isospec::{Config, Error, Matrix};

const EXIT_INPUT: u8 = 2;
const EXIT_AMBIGUOUS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "isospec",
    version,
    about = "Trace and norm criteria for identical pseudospectra, polynomial isometry, \
             and unitary similarity of small complex matrices, with numeric cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pair of matrices and print the verdicts with certificates
    Classify {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Base tolerance for equality of derived quantities
        /// (overrides the ISOSPEC_TOL environment variable)
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the full report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Scan s_min(zI - T) over a grid and write it as CSV
    Pseudospectra {
        path: PathBuf,
        /// Grid window as "re_min,re_max,im_min,im_max,nx,ny"
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Second matrix: write a comparison grid
        /// (re,im,smin_a,smin_b,rel_gap) instead
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Run both falsification oracles on a pair
    Falsify {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Number of random polynomials for the norm oracle
        #[arg(long, default_value_t = 200)]
        polys: usize,
        /// Degree bound for the random polynomials
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Seed shared by both oracles
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Sample points for the resolvent comparison
        #[arg(long = "z-samples", default_value_t = 400)]
        z_samples: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Inspect or export the built-in example pairs
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// List all example names
    List,
    /// Write a.json, b.json, and expected.json for one example
    Get {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe goes away (e.g. `| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match Cli::parse().command {
        Command::Classify {
            path_a,
            path_b,
            tol,
            json,
        } => cmd_classify(&path_a, &path_b, tol, json),
        Command::Pseudospectra {
            path,
            grid,
            out,
            pair,
        } => cmd_pseudospectra(&path, &grid, &out, pair.as_deref()),
        Command::Falsify {
            path_a,
            path_b,
            polys,
            degree,
            seed,
            z_samples,
            tol,
            json,
        } => cmd_falsify(&path_a, &path_b, polys, degree, seed, z_samples, tol, json),
        Command::Gallery { action } => match action {
            GalleryAction::List => cmd_gallery_list(),
            GalleryAction::Get { name, out_dir } => cmd_gallery_get(&name, &out_dir),
        },
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

/// Flag beats ISOSPEC_TOL beats the built-in default.
fn resolve_config(tol_flag: Option<f64>) -> Result<Config, String> {
    let mut cfg = Config::default();
    if let Ok(env_tol) = std::env::var("ISOSPEC_TOL") {
        let parsed: f64 = env_tol
            .parse()
            .map_err(|_| format!("ISOSPEC_TOL is not a number: `{env_tol}`"))?;
        if !(parsed.is_finite() && parsed > 0.0) {
            return Err(format!("ISOSPEC_TOL must be a positive number, got {parsed}"));
        }
        cfg.tol = parsed;
    }
    if let Some(t) = tol_flag {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("--tol must be a positive number, got {t}"));
        }
        cfg.tol = t;
    }
    Ok(cfg)
}

fn load_matrix(path: &Path) -> Result<Matrix, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_classify(path_a: &Path, path_b: &Path, tol: Option<f64>, json: bool) -> ExitCode {
    let cfg = match resolve_config(tol) {
        Ok(cfg) => cfg,
        Err(msg) => return input_error(msg),
    };
    let (a, b) = match (load_matrix(path_a), load_matrix(path_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(msg), _) | (_, Err(msg)) => return input_error(msg),
    };
    match classify::full_report(&a, &b, &cfg) {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print_report(&report);
            }
            ExitCode::SUCCESS
        }
        Err(e @ Error::ClusterAmbiguity { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_AMBIGUOUS)
        }
        Err(e) => input_error(e),
    }
}

/// Readable rendering: negligible terms dropped, coefficients shortened.
/// The JSON output carries the raw values.
fn poly_string(p: &Polynomial) -> String {
    let fmt_f = |x: f64| -> String {
        let rounded = (x * 1e9).round() / 1e9;
        if rounded == rounded.trunc() && rounded.abs() < 1e9 {
            format!("{}", rounded.trunc())
        } else {
            format!("{rounded}")
        }
    };
    let max_coeff = p.max_coeff_norm();
    let term = |c: &Complex64, k: usize| -> Option<String> {
        if c.norm() <= 1e-12 * max_coeff {
            return None;
        }
        let coeff = if c.im.abs() <= 1e-12 * c.norm() {
            fmt_f(c.re)
        } else if c.re.abs() <= 1e-12 * c.norm() {
            format!("{}i", fmt_f(c.im))
        } else {
            format!(
                "({}{}{}i)",
                fmt_f(c.re),
                if c.im >= 0.0 { "+" } else { "" },
                fmt_f(c.im)
            )
        };
        Some(match k {
            0 => coeff,
            1 => format!("{coeff} z"),
            _ => format!("{coeff} z^{k}"),
        })
    };
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter_map(|(k, c)| term(c, k))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn answer_str(v: &Verdict) -> &'static str {
    match v.answer {
        classify::Answer::Yes => "Yes",
        classify::Answer::No => "No",
        classify::Answer::Undecided => "Undecided",
    }
}

fn print_verdict(name: &str, v: &Verdict) {
    let criterion = serde_json::to_value(v.criterion)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default();
    println!("{name:<28} {:<10} via {criterion}", answer_str(v));
    for e in v.certificate.iter().take(8) {
        println!(
            "    {:<28} {:.6e}{:+.6e}i  vs  {:.6e}{:+.6e}i  (gap {:.3e})",
            e.label, e.left.re, e.left.im, e.right.re, e.right.im, e.gap
        );
    }
    if let Some(oracle) = &v.oracle_pseudospectra {
        println!(
            "    resolvent oracle: max gap {:.3e} over {} samples ({:?})",
            oracle.max_rel_gap, oracle.samples, oracle.verdict
        );
    }
    if let Some(oracle) = &v.oracle_polynomials {
        println!(
            "    polynomial oracle: max gap {:.3e} over {} draws ({:?})",
            oracle.max_rel_gap, oracle.samples, oracle.verdict
        );
    }
}

fn print_report(report: &ClassificationReport) {
    println!("pair: {}x{} vs {}x{}", report.dim_a, report.dim_a, report.dim_b, report.dim_b);
    println!("minimal polynomial A: {}", poly_string(&report.minimal_poly_a));
    println!("minimal polynomial B: {}", poly_string(&report.minimal_poly_b));
    if let (Some(ca), Some(cb)) = (&report.characteristic_poly_a, &report.characteristic_poly_b) {
        println!("characteristic A:     {}", poly_string(ca));
        println!("characteristic B:     {}", poly_string(cb));
    }
    for (spectrum, tag) in [(&report.spectrum_a, "A"), (&report.spectrum_b, "B")] {
        if let Some(entries) = spectrum {
            let parts: Vec<String> = entries
                .iter()
                .map(|e| {
                    format!(
                        "{:.6}{:+.6}i (mult {}, index {})",
                        e.value.re, e.value.im, e.algebraic_multiplicity, e.index
                    )
                })
                .collect();
            println!("spectrum {tag}: {}", parts.join(", "));
        }
    }
    println!();
    print_verdict("identical pseudospectra", &report.verdicts.identical);
    print_verdict("polynomially isometric", &report.verdicts.isometric);
    print_verdict("super-identical", &report.verdicts.super_identical);
    print_verdict("unitarily similar", &report.verdicts.unitarily_similar);
    println!();
    println!(
        "resolvent oracle:  max gap {:.3e} over {} samples ({:?})",
        report.oracle_pseudospectra.max_rel_gap,
        report.oracle_pseudospectra.samples,
        report.oracle_pseudospectra.verdict
    );
    println!(
        "polynomial oracle: max gap {:.3e} over {} draws ({:?})",
        report.oracle_polynomials.max_rel_gap,
        report.oracle_polynomials.samples,
        report.oracle_polynomials.verdict
    );
}

fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!(
            "grid spec needs 6 comma-separated fields re_min,re_max,im_min,im_max,nx,ny, got {}",
            parts.len()
        ));
    }
    let num = |s: &str, what: &str| -> Result<f64, String> {
        s.parse().map_err(|_| format!("grid {what} is not a number: `{s}`"))
    };
    let count = |s: &str, what: &str| -> Result<usize, String> {
        s.parse().map_err(|_| format!("grid {what} is not an integer: `{s}`"))
    };
    GridSpec::new(
        num(parts[0], "re_min")?,
        num(parts[1], "re_max")?,
        num(parts[2], "im_min")?,
        num(parts[3], "im_max")?,
        count(parts[4], "nx")?,
        count(parts[5], "ny")?,
    )
    .map_err(|e| e.to_string())
}

fn cmd_pseudospectra(path: &Path, grid_text: &str, out: &Path, pair: Option<&Path>) -> ExitCode {
    let grid = match parse_grid(grid_text) {
        Ok(g) => g,
        Err(msg) => return input_error(msg),
    };
    let t = match load_matrix(path) {
        Ok(t) => t,
        Err(msg) => return input_error(msg),
    };
    let csv = match pair {
        None => {
            let field = pseudospectra::grid_scan(&t, &grid);
            let mut csv = String::from("re,im,smin\n");
            for i in 0..grid.ny {
                for j in 0..grid.nx {
                    let z = grid.node(i, j);
                    csv.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e}\n",
                        z.re,
                        z.im,
                        field.value(i, j)
                    ));
                }
            }
            csv
        }
        Some(pair_path) => {
            let other = match load_matrix(pair_path) {
                Ok(m) => m,
                Err(msg) => return input_error(msg),
            };
            let cfg = Config::default();
            let fa = pseudospectra::grid_scan(&t, &grid);
            let fb = pseudospectra::grid_scan(&other, &grid);
            let scale = 1.0 + t.frobenius_norm().max(other.frobenius_norm());
            let mut csv = String::from("re,im,smin_a,smin_b,rel_gap\n");
            for i in 0..grid.ny {
                for j in 0..grid.nx {
                    let z = grid.node(i, j);
                    let (sa, sb) = (fa.value(i, j), fb.value(i, j));
                    let floor = cfg.singular_floor * (scale + z.norm());
                    let gap = if sa.max(sb) <= floor {
                        0.0
                    } else {
                        (sa - sb).abs() / sa.max(sb)
                    };
                    csv.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                        z.re, z.im, sa, sb, gap
                    ));
                }
            }
            csv
        }
    };
    if let Err(e) = fs::write(out, csv) {
        return input_error(format!("{}: {e}", out.display()));
    }
    println!("wrote {} nodes to {}", grid.len(), out.display());
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_falsify(
    path_a: &Path,
    path_b: &Path,
    polys: usize,
    degree: usize,
    seed: u64,
    z_samples: usize,
    tol: Option<f64>,
    json: bool,
) -> ExitCode {
    let cfg = match resolve_config(tol) {
        Ok(cfg) => cfg,
        Err(msg) => return input_error(msg),
    };
    let (a, b) = match (load_matrix(path_a), load_matrix(path_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(msg), _) | (_, Err(msg)) => return input_error(msg),
    };
    let poly_oracle = classify::falsify_by_polynomials(&a, &b, polys, degree, seed, &cfg);
    let resolvent_oracle = pseudospectra::compare_pseudospectra(&a, &b, z_samples, seed, &cfg);
    if json {
        let value = serde_json::json!({
            "polynomials": poly_oracle,
            "pseudospectra": resolvent_oracle,
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("serializes"));
    } else {
        println!(
            "polynomial oracle: max relative norm gap {:.6e} over {} draws (degree <= {degree}, seed {seed}): {:?}",
            poly_oracle.max_rel_gap, poly_oracle.samples, poly_oracle.verdict
        );
        if let Some(k) = poly_oracle.witness_poly_index {
            println!("    witness: polynomial #{k}");
        }
        println!(
            "resolvent oracle:  max relative s_min gap {:.6e} over {} samples (seed {seed}): {:?}",
            resolvent_oracle.max_rel_gap, resolvent_oracle.samples, resolvent_oracle.verdict
        );
        if let Some(z) = resolvent_oracle.witness_z {
            println!("    witness: z = {}{:+}i", z.re, z.im);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_gallery_list() -> ExitCode {
    for name in isospec::gallery::list_examples() {
        let entry = isospec::gallery::example(name).expect("listed name exists");
        println!("{:<28} {}x{} vs {}x{}", name, entry.a.dim(), entry.a.dim(), entry.b.dim(), entry.b.dim());
    }
    ExitCode::SUCCESS
}

fn cmd_gallery_get(name: &str, out_dir: &Path) -> ExitCode {
    let entry = match isospec::gallery::example(name) {
        Ok(e) => e,
        Err(e) => return input_error(e),
    };
    if let Err(e) = fs::create_dir_all(out_dir) {
        return input_error(format!("{}: {e}", out_dir.display()));
    }
    let expected: serde_json::Map<String, serde_json::Value> = entry
        .expected
        .iter()
        .map(|(rel, ans)| {
            (
                serde_json::to_value(rel).unwrap().as_str().unwrap().to_owned(),
                serde_json::to_value(ans).unwrap(),
            )
        })
        .collect();
    let expected_doc = serde_json::json!({
        "name": entry.name,
        "expected": expected,
        "provenance": entry.provenance,
    });
    let writes = [
        ("a.json", serde_json::to_string_pretty(&entry.a).unwrap()),
        ("b.json", serde_json::to_string_pretty(&entry.b).unwrap()),
        (
            "expected.json",
            serde_json::to_string_pretty(&expected_doc).unwrap(),
        ),
    ];
    for (file, contents) in writes {
        let path = out_dir.join(file);
        if let Err(e) = fs::write(&path, contents + "\n") {
            return input_error(format!("{}: {e}", path.display()));
        }
    }
    println!("wrote a.json, b.json, expected.json to {}", out_dir.display());
    ExitCode::SUCCESS
}
