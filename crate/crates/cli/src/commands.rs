use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use symqmf::analysis::{filter_report, DEFAULT_GRID, DEFAULT_MAX_CYCLE};
use symqmf::cascade::{filterbank_roundtrip, fir_approximate, Signal};
use symqmf::symdesign::{build_from_preimages, design_stopband, maxflat, MaxflatId, PreimageSpec};
use symqmf::synthesis::{freq_response, scaling_samples, wavelet_samples, DEFAULT_LEVELS};

use crate::document::{format_real, read_signal_csv, write_grid_csv, CascadeDocument, FilterDocument};

/// Exit status 1: bad input or a document that fails validation.
pub const EXIT_INPUT: u8 = 1;
/// Exit status 2: a verification check failed.
pub const EXIT_VERIFY: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<symqmf::Error> for CliError {
    fn from(e: symqmf::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "symqmf",
    version,
    about = "Design, verify and deploy symmetric IIR quadrature mirror filters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Scaling,
    Wavelet,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximally flat filter of order 4n.
    Maxflat {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        delta: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Filter from its preimages of one.
    Design {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
        /// `re,im` or `circ:t` for exp(i pi t); repeatable.
        #[arg(long = "lambda", value_parser = parse_lambda, allow_hyphen_values = true)]
        lambdas: Vec<Complex64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Filter with prescribed zeros in the stopband.
    Stopband {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        sign: i64,
        /// Angle in radians, or a multiple of pi such as `0.6pi`; repeatable.
        #[arg(long = "theta", value_parser = parse_theta, allow_hyphen_values = true)]
        thetas: Vec<f64>,
        /// Additional preimage of one in the right half plane; repeatable.
        #[arg(long = "extra", value_parser = parse_lambda, allow_hyphen_values = true)]
        extra: Vec<Complex64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a filter document and print a report.
    Verify {
        filter: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long = "cohen-max-cycle", default_value_t = DEFAULT_MAX_CYCLE)]
        cohen_max_cycle: usize,
    },
    /// FIR cascade approximation of a filter document.
    Fir {
        filter: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaling function or wavelet samples from a cascade document.
    Sample {
        cascade: PathBuf,
        #[arg(long, value_enum)]
        function: Function,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequency response of a filter document.
    Freq {
        filter: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-channel analysis and synthesis of a CSV signal through a cascade.
    Roundtrip {
        cascade: PathBuf,
        #[arg(long)]
        signal: PathBuf,
    },
}

/// `re,im`, a bare real, or `circ:t` meaning `exp(i pi t)`.
pub fn parse_lambda(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number {t:?} in {s:?}"))
    };
    if let Some(t) = s.strip_prefix("circ:") {
        return Ok(Complex64::from_polar(1.0, PI * num(t)?));
    }
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

/// Radians, or a multiple of pi written `0.6pi`.
pub fn parse_theta(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (body, scale) = match t.strip_suffix("pi") {
        Some(b) => (b.trim_end_matches('*'), PI),
        None => (t, 1.0),
    };
    body.trim()
        .parse::<f64>()
        .map(|x| x * scale)
        .map_err(|_| format!("invalid angle {s:?}"))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(bytes)
            .map_err(|e| CliError::input(format!("cannot write output: {e}"))),
    }
}

fn load_filter(path: &Path) -> Result<symqmf::polyrat::RationalFilter, CliError> {
    Ok(FilterDocument::from_json(&read(path)?)?.filter()?)
}

fn load_cascade(path: &Path) -> Result<symqmf::cascade::FirCascade, CliError> {
    Ok(CascadeDocument::from_json(&read(path)?)?.cascade()?)
}

fn lambda_args(ls: &[Complex64]) -> String {
    ls.iter()
        .map(|l| format!(" --lambda {},{}", format_real(l.re), format_real(l.im)))
        .collect()
}

fn write_filter_doc(
    h: &symqmf::polyrat::RationalFilter,
    spec: &PreimageSpec,
    provenance: String,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let doc = FilterDocument::new(h, &spec.canonical()?, provenance);
    emit(out, stdout, doc.to_json()?.as_bytes())
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Maxflat { n, delta, out } => {
            let h = maxflat(MaxflatId { n, delta })?;
            let sign = if delta == 0 { 1 } else { -1 };
            let spec = PreimageSpec::new(n, sign, vec![]);
            write_filter_doc(
                &h,
                &spec,
                format!("maxflat --n {n} --delta {delta}"),
                &out,
                stdout,
            )
        }
        Command::Design {
            m,
            sign,
            lambdas,
            out,
        } => {
            let spec = PreimageSpec::new(m, sign, lambdas);
            let h = build_from_preimages(&spec)?;
            let provenance = format!("design --m {m} --sign {sign}{}", lambda_args(&spec.lambdas));
            write_filter_doc(&h, &spec, provenance, &out, stdout)
        }
        Command::Stopband {
            m,
            sign,
            thetas,
            extra,
            out,
        } => {
            let h = design_stopband(m, sign, &thetas, &extra)?;
            let mut lambdas: Vec<Complex64> =
                thetas.iter().map(|&t| -Complex64::from_polar(1.0, t)).collect();
            lambdas.extend_from_slice(&extra);
            let spec = PreimageSpec::new(m, sign, lambdas);
            let mut provenance = format!("stopband --m {m} --sign {sign}");
            for t in &thetas {
                provenance.push_str(&format!(" --theta {}", format_real(*t)));
            }
            for l in &extra {
                provenance.push_str(&format!(" --extra {},{}", format_real(l.re), format_real(l.im)));
            }
            write_filter_doc(&h, &spec, provenance, &out, stdout)
        }
        Command::Verify {
            filter,
            grid,
            cohen_max_cycle,
        } => {
            let h = load_filter(&filter)?;
            let report = filter_report(&h, grid, cohen_max_cycle)?;
            let mut text =
                serde_json::to_string_pretty(&report).map_err(|e| CliError::input(e.to_string()))?;
            text.push('\n');
            emit(&None, stdout, text.as_bytes())?;
            let mut failures = Vec::new();
            if report.qmf_residual > symqmf::analysis::QMF_TOL {
                failures.push(format!("QMF residual {:e}", report.qmf_residual));
            }
            if report.sym_residual > symqmf::analysis::SYM_TOL {
                failures.push(format!("symmetry residual {:e}", report.sym_residual));
            }
            if let Some(w) = &report.cohen.witness {
                failures.push(format!("Cohen's condition fails on the cycle {w:?}"));
            }
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::verification(format!(
                    "verification failed: {}",
                    failures.join("; ")
                )))
            }
        }
        Command::Fir { filter, eps, out } => {
            let h = load_filter(&filter)?;
            let f = fir_approximate(&h, eps)?;
            emit(&out, stdout, CascadeDocument::new(&f).to_json()?.as_bytes())
        }
        Command::Sample {
            cascade,
            function,
            levels,
            out,
        } => {
            let f = load_cascade(&cascade)?;
            let grid = match function {
                Function::Scaling => scaling_samples(&f, levels)?,
                Function::Wavelet => wavelet_samples(&f, levels)?,
            };
            let mut buf = Vec::new();
            write_grid_csv(&grid, &mut buf)?;
            emit(&out, stdout, &buf)
        }
        Command::Freq { filter, points, out } => {
            let h = load_filter(&filter)?;
            let mut buf = Vec::new();
            write_grid_csv(&freq_response(&h, points)?, &mut buf)?;
            emit(&out, stdout, &buf)
        }
        Command::Roundtrip { cascade, signal } => {
            let f = load_cascade(&cascade)?;
            let x = Signal::new(read_signal_csv(&read(&signal)?)?)?;
            let err = filterbank_roundtrip(&f, &x)?;
            emit(&None, stdout, format!("{}\n", format_real(err)).as_bytes())?;
            let bound = 10.0 * f.epsilon() * x.norm_inf();
            if err > bound {
                return Err(CliError::verification(format!(
                    "reconstruction error {err:e} exceeds {bound:e}"
                )));
            }
            Ok(())
        }
    }
}
