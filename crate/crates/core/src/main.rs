//! Command line front end: generalized inverses of dual matrices stored as
//! JSON files.
//!
//! A matrix file is a JSON object `{"real": [[...]], "dual": [[...]]}` of
//! equally shaped nested rows; `dual` may be omitted for a real matrix.
//! Non-finite entries, ragged rows and empty matrices are rejected.
//!
//! Exit codes: 0 on success, 1 on parse or usage errors, 2 when the
//! requested inverse does not exist (the certificate is still printed).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dualinv::dualginv::{
    classify_special_forms, dcgi, dggi, dmpgi, dual_index_is_one, mpdgi, verify_axioms,
};
use dualinv::dualsolve::solve;
use dualinv::{DualMatrix, DualVector, Error, InverseKind, RealMatrix, Tolerance};

#[derive(Parser)]
#[command(
    name = "dualinv",
    version,
    about = "Generalized inverses of dual matrices (A + eps*B) and dual linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a generalized inverse of a dual matrix
    Inverse {
        /// Path to the matrix file
        matrix: PathBuf,
        /// Which inverse to compute: mpdgi, dmpgi, dggi or dcgi
        #[arg(long)]
        kind: InverseKind,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Evaluate the dual-index-one certificate of a square dual matrix
    Index {
        /// Path to the matrix file
        matrix: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Solve Ah x = b and report solution, projector and consistency
    Solve {
        /// Path to the square matrix file
        matrix: PathBuf,
        /// Path to the right-hand side, a one-column matrix file
        rhs: PathBuf,
        /// Which inverse drives the solve (dmpgi handles inconsistent
        /// systems by default; dcgi is the opt-in alternative)
        #[arg(long, default_value = "dmpgi")]
        kind: InverseKind,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Measure a candidate inverse against the defining axioms of a kind
    Verify {
        /// Path to the matrix file
        matrix: PathBuf,
        /// Path to the candidate inverse file
        candidate: PathBuf,
        /// Axiom set to check against: mpdgi, dmpgi, dggi or dcgi
        #[arg(long)]
        kind: InverseKind,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Relative rank tolerance (default: machine epsilon * 64)
    #[arg(long)]
    tol: Option<f64>,
    /// Equality tolerance (default: 100 * rank tolerance)
    #[arg(long)]
    eq_tol: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable, 6 significant digits
    Text,
    /// Machine-readable, full round-trip precision
    Json,
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, turning `dualinv ... | head` into a
    // broken-pipe panic; restore the usual silent-exit behaviour of a
    // pipeline participant.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GroupInverseNotExist { .. }
            | Error::CoreInverseNotExist { .. }
            | Error::DmpgiNotExist { .. }
            | Error::DggiNotExist { .. }
            | Error::DcgiNotExist { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Inverse { matrix, kind, opts } => {
            let tol = opts.tolerance()?;
            let ah = read_matrix(&matrix)?;
            cmd_inverse(&ah, kind, &tol, opts.format)
        }
        Command::Index { matrix, opts } => {
            let tol = opts.tolerance()?;
            let ah = read_matrix(&matrix)?;
            cmd_index(&ah, &tol, opts.format)
        }
        Command::Solve {
            matrix,
            rhs,
            kind,
            opts,
        } => {
            let tol = opts.tolerance()?;
            let ah = read_matrix(&matrix)?;
            let b = read_vector(&rhs)?;
            cmd_solve(&ah, &b, kind, &tol, opts.format)
        }
        Command::Verify {
            matrix,
            candidate,
            kind,
            opts,
        } => {
            let tol = opts.tolerance()?;
            let ah = read_matrix(&matrix)?;
            let g = read_matrix(&candidate)?;
            cmd_verify(&ah, &g, kind, &tol, opts.format)
        }
    }
}

impl CommonOpts {
    fn tolerance(&self) -> Result<Tolerance, Failure> {
        let base = Tolerance::default();
        let rank_tol = self.tol.unwrap_or(base.rank_tol);
        let eq_tol = self.eq_tol.unwrap_or(100.0 * rank_tol);
        Tolerance::new(rank_tol, eq_tol).map_err(|e| Failure::usage(e.to_string()))
    }
}

// ── Input files ────────────────────────────────────────────────────────────

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    real: Vec<Vec<f64>>,
    dual: Option<Vec<Vec<f64>>>,
}

fn read_matrix(path: &Path) -> Result<DualMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))?;
    let real = RealMatrix::from_nested(&file.real)
        .map_err(|e| Failure::usage(format!("{}: real part: {e}", path.display())))?;
    let dual = match file.dual {
        Some(rows) => RealMatrix::from_nested(&rows)
            .map_err(|e| Failure::usage(format!("{}: dual part: {e}", path.display())))?,
        None => RealMatrix::zeros(real.rows(), real.cols())
            .expect("real part has positive dimensions"),
    };
    DualMatrix::new(real, dual)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_vector(path: &Path) -> Result<DualVector, Failure> {
    let m = read_matrix(path)?;
    DualVector::from_matrix(m).map_err(|e| {
        Failure::usage(format!(
            "{}: right-hand side must have exactly one column: {e}",
            path.display()
        ))
    })
}

// ── Commands ───────────────────────────────────────────────────────────────

fn cmd_inverse(
    ah: &DualMatrix,
    kind: InverseKind,
    tol: &Tolerance,
    format: Format,
) -> Result<ExitCode, Failure> {
    let result = match kind {
        InverseKind::Mpdgi => {
            let inverse = mpdgi(ah, tol);
            let axiom_residuals = verify_axioms(ah, &inverse, kind).map_err(Failure::from)?;
            Ok((inverse, axiom_residuals, None))
        }
        InverseKind::Dmpgi => dmpgi(ah, tol)
            .map(|r| (r.inverse, r.axiom_residuals, r.path_agreement))
            .map_err(Failure::from),
        InverseKind::Dggi => dggi(ah, tol)
            .map(|r| (r.inverse, r.axiom_residuals, r.path_agreement))
            .map_err(Failure::from),
        InverseKind::Dcgi => dcgi(ah, tol)
            .map(|r| (r.inverse, r.axiom_residuals, r.path_agreement))
            .map_err(Failure::from),
    };
    let (inverse, residuals, path_agreement) = match result {
        Ok(ok) => ok,
        Err(failure) if failure.code == 2 => {
            print_nonexistence(ah, kind, tol, &failure.message, format);
            return Ok(ExitCode::from(2));
        }
        Err(failure) => return Err(failure),
    };

    match format {
        Format::Json => {
            let mut report = json!({
                "kind": kind.as_str(),
                "exists": true,
                "inverse": matrix_value(&inverse),
                "axiom_residuals": residuals,
            });
            if let Some(agreement) = path_agreement {
                report["path_agreement"] = json!(agreement);
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
        }
        Format::Text => {
            println!("kind: {kind}");
            print_matrix_text(&inverse);
            println!("axiom residuals (max-abs):");
            for (label, value) in &residuals {
                println!("  ({label}): {}", fmt_sig(*value));
            }
            if let Some(agreement) = path_agreement {
                println!("compact vs block agreement: {}", fmt_sig(agreement));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// On nonexistence the certificate is still a useful answer, so it goes to
/// stdout in the requested format before exiting with code 2.
fn print_nonexistence(
    ah: &DualMatrix,
    kind: InverseKind,
    tol: &Tolerance,
    message: &str,
    format: Format,
) {
    let certificate = if ah.is_square() {
        dual_index_is_one(ah, tol).ok()
    } else {
        None
    };
    match format {
        Format::Json => {
            let mut report = json!({
                "kind": kind.as_str(),
                "exists": false,
                "error": message,
            });
            if let Some(cert) = certificate {
                report["certificate"] = serde_json::to_value(&cert).expect("serializable");
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
        }
        Format::Text => {
            println!("kind: {kind}");
            println!("exists: false");
            println!("reason: {message}");
            if let Some(cert) = certificate {
                println!("certificate: {cert}");
            }
        }
    }
}

fn cmd_index(ah: &DualMatrix, tol: &Tolerance, format: Format) -> Result<ExitCode, Failure> {
    let cert = dual_index_is_one(ah, tol).map_err(Failure::from)?;
    let flags = classify_special_forms(ah, tol).map_err(Failure::from)?;
    match format {
        Format::Json => {
            let report = json!({
                "certificate": serde_json::to_value(&cert).expect("serializable"),
                "special_forms": serde_json::to_value(flags).expect("serializable"),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
        }
        Format::Text => {
            println!("dual index one:           {}", cert.dual_index_one);
            println!("index(A) = 1:             {}", cert.index_a_one);
            println!("rank(A):                  {}", cert.rank_a);
            println!("rank gap [B A; A 0]:      {}", cert.residual_rank_block);
            println!(
                "rank gap [A, B(I-AA#)]:   {}",
                cert.residual_rank_aug
                    .map_or_else(|| "n/a".into(), |v| v.to_string())
            );
            println!(
                "|(I-AA+)B(I-A+A)| max:    {}",
                fmt_sig(cert.residual_proj_mp)
            );
            println!(
                "|(I-AA#)B(I-AA#)| max:    {}",
                cert.residual_proj_gp
                    .map_or_else(|| "n/a".into(), fmt_sig)
            );
            println!(
                "zero threshold:           {}",
                fmt_sig(cert.proj_zero_threshold)
            );
            println!("special forms:");
            println!("  dmpgi = mpdgi:          {}", flags.dmpgi_eq_mpdgi);
            println!("  dcgi simple form:       {}", flags.dcgi_simple);
            println!("  dggi simple form:       {}", flags.dggi_simple);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    ah: &DualMatrix,
    b: &DualVector,
    kind: InverseKind,
    tol: &Tolerance,
    format: Format,
) -> Result<ExitCode, Failure> {
    let result = match solve(ah, b, kind, tol) {
        Ok(r) => r,
        Err(e) => {
            let failure = Failure::from(e);
            if failure.code == 2 {
                print_nonexistence(ah, kind, tol, &failure.message, format);
                return Ok(ExitCode::from(2));
            }
            return Err(failure);
        }
    };
    match format {
        Format::Json => {
            let report = json!({
                "kind": kind.as_str(),
                "consistent": result.consistent,
                "error_norm": result.error_norm,
                "particular": matrix_value(result.particular.as_matrix()),
                "projector": matrix_value(&result.projector),
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
        }
        Format::Text => {
            println!("kind: {kind}");
            println!("consistent: {}", result.consistent);
            println!("error norm: {}", fmt_sig(result.error_norm));
            println!("particular solution:");
            for i in 0..result.particular.len() {
                let v = result.particular.get(i);
                println!("  {} + {} e", fmt_sig(v.real), fmt_sig(v.dual));
            }
            println!("projector (I - G Ah):");
            print_matrix_text(&result.projector);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    ah: &DualMatrix,
    g: &DualMatrix,
    kind: InverseKind,
    tol: &Tolerance,
    format: Format,
) -> Result<ExitCode, Failure> {
    let residuals = verify_axioms(ah, g, kind).map_err(Failure::from)?;
    let worst = residuals.values().cloned().fold(0.0_f64, f64::max);
    let bound = tol.eq_bound(1.0_f64.max(ah.max_abs()).max(g.max_abs()));
    match format {
        Format::Json => {
            let report = json!({
                "kind": kind.as_str(),
                "axiom_residuals": residuals,
                "max_residual": worst,
                "eq_bound": bound,
                "within_bound": worst <= bound,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
        }
        Format::Text => {
            println!("kind: {kind}");
            println!("axiom residuals (max-abs):");
            for (label, value) in &residuals {
                println!("  ({label}): {}", fmt_sig(*value));
            }
            println!("max residual: {}", fmt_sig(worst));
            println!("within eq bound {}: {}", fmt_sig(bound), worst <= bound);
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ── Output helpers ─────────────────────────────────────────────────────────

/// Matrix as the same JSON object shape the commands accept as input, so a
/// reported inverse can be fed straight back in. serde_json prints `f64`
/// with the shortest representation that round-trips bit for bit.
fn matrix_value(m: &DualMatrix) -> Value {
    json!({
        "real": m.real().to_nested(),
        "dual": m.dual().to_nested(),
    })
}

/// Six significant digits, plain decimal in a moderate range, scientific
/// outside of it.
fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e6).contains(&a) {
        let magnitude = a.log10().floor() as i32;
        let decimals = (5 - magnitude).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn print_matrix_text(m: &DualMatrix) {
    println!("real:");
    for row in m.real().to_nested() {
        let cells: Vec<String> = row.iter().map(|&v| format!("{:>14}", fmt_sig(v))).collect();
        println!("  {}", cells.join(" "));
    }
    println!("dual:");
    for row in m.dual().to_nested() {
        let cells: Vec<String> = row.iter().map(|&v| format!("{:>14}", fmt_sig(v))).collect();
        println!("  {}", cells.join(" "));
    }
}
