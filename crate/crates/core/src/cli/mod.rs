//! Command-line front end: `transient <mode> --config <path> [--out <path>]
//! [--format csv|json]`.
//!
//! Exit status: 0 on success, 1 when an output cannot be written or a
//! reported check fails, 2 for configuration errors, 3 for numerical-domain
//! errors.

mod config;
mod output;
mod run;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

pub use config::{parse_scalar, ConfigError, Mode, OutputFormat, ScenarioConfig};
pub use output::{Cell, CheckEntry, Summary, Table, UNITS};
pub use run::{compute, RunError, CONVERGENCE_FLOOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Deuteron,
    Diffraction,
    Spectral,
    KernelsCheck,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Deuteron => Mode::Deuteron,
            ModeArg::Diffraction => Mode::Diffraction,
            ModeArg::Spectral => Mode::Spectral,
            ModeArg::KernelsCheck => Mode::KernelsCheck,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "transient", version, about = "Transient dynamics after a sudden perturbation")]
struct Args {
    #[arg(value_enum)]
    mode: ModeArg,
    /// Scenario file of `key = value` lines. Optional for kernels-check.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent. In CSV mode, extra tables and the
    /// JSON summary are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let mode = Mode::from(args.mode);
    let text = match &args.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot read config {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        },
        None if mode == Mode::KernelsCheck => String::new(),
        None => {
            let _ = writeln!(stderr, "error: --config is required for mode {mode}");
            return EXIT_CONFIG;
        }
    };
    let mut cfg = match ScenarioConfig::parse(mode, &text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    let out = args.out.or_else(|| cfg.out.as_ref().map(PathBuf::from));

    let summary = match compute(&cfg) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return match e {
                RunError::Config(_) => EXIT_CONFIG,
                RunError::Numeric(_) => EXIT_NUMERIC,
            };
        }
    };
    if let Err(e) = emit(&summary, cfg.format, out.as_deref(), stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_FAILURE;
    }
    let failed: Vec<&str> = summary.checks.iter().filter(|(_, c)| !c.passed).map(|(k, _)| k.as_str()).collect();
    if failed.is_empty() {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "checks failed: {}", failed.join(", "));
        EXIT_FAILURE
    }
}

/// Path of a companion file: `dir/run.csv` -> `dir/run.<suffix>`.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    fs::write(path, contents)
        .map_err(|e| std::io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display())))
}

fn emit(s: &Summary, format: OutputFormat, out: Option<&Path>, stdout: &mut dyn Write) -> std::io::Result<()> {
    match (format, out) {
        (OutputFormat::Json, None) => stdout.write_all(s.to_json().as_bytes()),
        (OutputFormat::Json, Some(path)) => write_file(path, &s.to_json()),
        (OutputFormat::Csv, None) => stdout.write_all(s.table.to_csv_string().as_bytes()),
        (OutputFormat::Csv, Some(path)) => {
            write_file(path, &s.table.to_csv_string())?;
            for (name, table) in &s.sidecars {
                write_file(&sidecar_path(path, &format!("{name}.csv")), &table.to_csv_string())?;
            }
            write_file(&sidecar_path(path, "summary.json"), &s.to_json())
        }
    }
}
