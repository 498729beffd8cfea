//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code, so the binary is a thin shim.
//!
//! Exit codes: `classify` returns 0 when the form is a sum of squares, 1 when
//! it is nonnegative but not a sum of squares, 2 when it is not nonnegative.
//! `certify`/`verify` return 1 on a rejected form or certificate. Usage errors
//! exit with 64 and I/O errors with 74.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{self, Certificate};
use crate::cones::{self, Position};
use crate::error::Error;
use crate::exactpoly::InvariantQuartic;
use crate::oracle;
use crate::rational::{self, Rational};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "invquartic",
    version,
    about = "Classify A_n-invariant quartics a*p2^2 + b*p4 against the nonnegative and sums-of-squares cones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct FormArgs {
    /// Rank of A_n; forms live in n+1 variables.
    #[arg(short = 'n', long = "n")]
    n: u32,
    /// Coefficient of p2^2, as `p/q` or an integer.
    #[arg(short = 'a', value_parser = parse_rational, allow_hyphen_values = true)]
    a: Rational,
    /// Coefficient of p4, as `p/q` or an integer.
    #[arg(short = 'b', value_parser = parse_rational, allow_hyphen_values = true)]
    b: Rational,
}

impl FormArgs {
    fn form(&self) -> InvariantQuartic {
        InvariantQuartic::new(self.a.clone(), self.b.clone())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one form against both cones.
    Classify {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tabulate alpha, beta and cone equality over a range of n.
    Survey {
        #[arg(long = "n-from")]
        n_from: u32,
        #[arg(long = "n-to")]
        n_to: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Emit a sum-of-squares certificate for a member of the sos cone.
    Certify {
        #[command(flatten)]
        form: FormArgs,
        /// Write the certificate here instead of standard output.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a certificate file exactly.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Floating-point sampling of a form on the unit sphere of U_n (JSON).
    Oracle {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print alpha, beta and the extremal rays of both cones for one n.
    Extremal {
        #[arg(short = 'n', long = "n")]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn pair(a: &Rational, b: &Rational) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

fn quartic_pair(f: &InvariantQuartic) -> [String; 2] {
    pair(&f.a, &f.b)
}

#[derive(Debug, Serialize)]
pub struct ClassifyRecord {
    pub n: u32,
    pub a: String,
    pub b: String,
    pub psd: Position,
    pub sos: Position,
    pub witness: Option<Vec<i64>>,
    pub sos_coords: Option<[String; 2]>,
    pub alpha: String,
    pub beta: String,
}

#[derive(Debug, Serialize)]
pub struct SurveyRow {
    pub n: u32,
    pub alpha: String,
    pub beta: String,
    pub cones_equal: bool,
    pub gap_witness: Option<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct SurveyRecord {
    pub n_from: u32,
    pub n_to: u32,
    pub rows: Vec<SurveyRow>,
    pub matches_parity: bool,
}

#[derive(Debug, Serialize)]
pub struct ExtremalRecord {
    pub n: u32,
    pub alpha: String,
    pub beta: String,
    pub f: [String; 2],
    pub g: [String; 2],
    pub s1: [String; 2],
    pub s2: [String; 2],
    pub cones_equal: bool,
}

#[derive(Debug, Serialize)]
pub struct CertifyRecord {
    pub status: &'static str,
    pub n: u32,
    pub a: String,
    pub b: String,
    pub sos_coords: [String; 2],
    pub squares: Option<usize>,
    pub path: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyRecord {
    pub path: String,
    pub valid: bool,
    pub reason: Option<String>,
}

/// Failure of a subcommand before it could produce its normal output.
enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Classify { form, format } => cmd_classify(&form, format, out),
        Command::Survey {
            n_from,
            n_to,
            format,
        } => cmd_survey(n_from, n_to, format, out),
        Command::Certify {
            form,
            out: path,
            format,
        } => cmd_certify(&form, path, format, out),
        Command::Verify { path, format } => cmd_verify(path, format, out),
        Command::Oracle {
            form,
            samples,
            seed,
        } => cmd_oracle(&form, samples, seed, out),
        Command::Extremal { n, format } => cmd_extremal(n, format, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).expect("records serialize");
    writeln!(out, "{s}").map_err(|e| Failure::Io(e.to_string()))
}

fn emit_text(out: &mut dyn Write, lines: &[(&str, String)]) -> Result<(), Failure> {
    for (k, v) in lines {
        writeln!(out, "{k}: {v}").map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn opt_text<T>(v: &Option<T>, f: impl Fn(&T) -> String) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), f)
}

pub fn classify_record(n: u32, form: &InvariantQuartic) -> crate::Result<ClassifyRecord> {
    let m = cones::classify(n, form)?;
    let range = cones::psd_range(n)?;
    Ok(ClassifyRecord {
        n,
        a: form.a.to_string(),
        b: form.b.to_string(),
        psd: m.psd,
        sos: m.sos,
        witness: m.witness.map(|w| w.coordinates().to_vec()),
        sos_coords: m.sos_coords.map(|(a, b)| pair(&a, &b)),
        alpha: range.alpha.to_string(),
        beta: range.beta.to_string(),
    })
}

/// Exit code as a function of the classification alone.
pub fn classify_exit_code(psd: Position, sos: Position) -> i32 {
    match (psd, sos) {
        (_, Position::Boundary | Position::Interior) => 0,
        (Position::Boundary | Position::Interior, Position::Outside) => 1,
        (Position::Outside, Position::Outside) => 2,
    }
}

fn cmd_classify(args: &FormArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let rec = classify_record(args.n, &args.form())?;
    match format {
        Format::Json => emit_json(out, &rec)?,
        Format::Text => emit_text(
            out,
            &[
                ("n", rec.n.to_string()),
                ("a", rec.a.clone()),
                ("b", rec.b.clone()),
                ("psd", rec.psd.as_str().to_string()),
                ("sos", rec.sos.as_str().to_string()),
                ("witness", opt_text(&rec.witness, |w| format!("{w:?}"))),
                (
                    "sos_coords",
                    opt_text(&rec.sos_coords, |[a, b]| format!("({a}, {b})")),
                ),
                ("alpha", rec.alpha.clone()),
                ("beta", rec.beta.clone()),
            ],
        )?,
    }
    Ok(classify_exit_code(rec.psd, rec.sos))
}

pub fn survey_record(n_from: u32, n_to: u32) -> crate::Result<SurveyRecord> {
    if n_from < 3 {
        return Err(Error::UnsupportedN(n_from));
    }
    if n_from > n_to {
        return Err(Error::Parse(format!("empty range {n_from}..={n_to}")));
    }
    let rows = (n_from..=n_to)
        .into_par_iter()
        .map(|n| -> crate::Result<SurveyRow> {
            let range = cones::psd_range(n)?;
            Ok(SurveyRow {
                n,
                alpha: range.alpha.to_string(),
                beta: range.beta.to_string(),
                cones_equal: cones::cones_equal(n)?,
                gap_witness: cones::gap_witness(n)?.as_ref().map(quartic_pair),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let matches_parity = rows.iter().all(|r| r.cones_equal == (r.n % 2 == 1));
    Ok(SurveyRecord {
        n_from,
        n_to,
        rows,
        matches_parity,
    })
}

fn cmd_survey(n_from: u32, n_to: u32, format: Format, out: &mut dyn Write) -> CmdResult {
    let rec = survey_record(n_from, n_to)?;
    match format {
        Format::Json => emit_json(out, &rec)?,
        Format::Text => {
            let io = |e: std::io::Error| Failure::Io(e.to_string());
            writeln!(
                out,
                "{:>5}  {:>14}  {:>14}  {:>5}  gap_witness",
                "n", "alpha", "beta", "equal"
            )
            .map_err(io)?;
            for r in &rec.rows {
                writeln!(
                    out,
                    "{:>5}  {:>14}  {:>14}  {:>5}  {}",
                    r.n,
                    r.alpha,
                    r.beta,
                    r.cones_equal,
                    opt_text(&r.gap_witness, |[a, b]| format!("({a}, {b})"))
                )
                .map_err(io)?;
            }
            writeln!(out, "matches_parity: {}", rec.matches_parity).map_err(io)?;
        }
    }
    Ok(if rec.matches_parity { 0 } else { 1 })
}

fn cmd_certify(
    args: &FormArgs,
    path: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let form = args.form();
    let cert = match certify::cert_for(args.n, &form) {
        Ok(c) => c,
        Err(Error::NotInSosCone { a, b }) => {
            let reason = CertifyRecord {
                status: "not_in_sos_cone",
                n: args.n,
                a: form.a.to_string(),
                b: form.b.to_string(),
                sos_coords: pair(&a, &b),
                squares: None,
                path: None,
            };
            match format {
                Format::Json => emit_json(out, &reason)?,
                Format::Text => emit_text(
                    out,
                    &[
                        ("status", reason.status.to_string()),
                        ("sos_coords", format!("({a}, {b})")),
                    ],
                )?,
            }
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let text = cert.to_text();
    let Some(path) = path else {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?;
        return Ok(0);
    };
    std::fs::write(&path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let (a, b) = cones::sos_coordinates_raw(args.n, &form)?;
    let rec = CertifyRecord {
        status: "ok",
        n: args.n,
        a: form.a.to_string(),
        b: form.b.to_string(),
        sos_coords: pair(&a, &b),
        squares: Some(cert.squares.len()),
        path: Some(path.display().to_string()),
    };
    match format {
        Format::Json => emit_json(out, &rec)?,
        Format::Text => emit_text(
            out,
            &[
                ("status", rec.status.to_string()),
                ("sos_coords", format!("({a}, {b})")),
                ("squares", cert.squares.len().to_string()),
                ("path", path.display().to_string()),
            ],
        )?,
    }
    Ok(0)
}

fn cmd_verify(path: PathBuf, format: Format, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let outcome = Certificate::from_text(&text)
        .map_err(|e| format!("malformed certificate: {e}"))
        .and_then(|c| certify::verify_detailed(&c));
    let rec = VerifyRecord {
        path: path.display().to_string(),
        valid: outcome.is_ok(),
        reason: outcome.err(),
    };
    match format {
        Format::Json => emit_json(out, &rec)?,
        Format::Text => emit_text(
            out,
            &[
                ("path", rec.path.clone()),
                ("valid", rec.valid.to_string()),
                ("reason", opt_text(&rec.reason, String::clone)),
            ],
        )?,
    }
    Ok(if rec.valid { 0 } else { 1 })
}

fn cmd_oracle(args: &FormArgs, samples: u64, seed: u64, out: &mut dyn Write) -> CmdResult {
    if args.n < 3 {
        return Err(Error::UnsupportedN(args.n).into());
    }
    let report = oracle::sample_min(args.n, &args.form(), samples as usize, seed);
    emit_json(out, &report)?;
    Ok(0)
}

pub fn extremal_record(n: u32) -> crate::Result<ExtremalRecord> {
    let range = cones::psd_range(n)?;
    let rays = cones::extremal_rays(n)?;
    let gens = cones::sos_generators(n)?;
    Ok(ExtremalRecord {
        n,
        alpha: range.alpha.to_string(),
        beta: range.beta.to_string(),
        f: quartic_pair(&rays.f),
        g: quartic_pair(&rays.g),
        s1: quartic_pair(&gens.s1),
        s2: quartic_pair(&gens.s2),
        cones_equal: cones::cones_equal(n)?,
    })
}

fn cmd_extremal(n: u32, format: Format, out: &mut dyn Write) -> CmdResult {
    let rec = extremal_record(n)?;
    let show = |[a, b]: &[String; 2]| format!("({a}, {b})");
    match format {
        Format::Json => emit_json(out, &rec)?,
        Format::Text => emit_text(
            out,
            &[
                ("n", n.to_string()),
                ("alpha", rec.alpha.clone()),
                ("beta", rec.beta.clone()),
                ("f", show(&rec.f)),
                ("g", show(&rec.g)),
                ("s1", show(&rec.s1)),
                ("s2", show(&rec.s2)),
                ("cones_equal", rec.cones_equal.to_string()),
            ],
        )?,
    }
    Ok(0)
}
