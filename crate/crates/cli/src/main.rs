use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use blk_core::parse::parse_poly_named;
use blk_core::Error;

mod report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Milnor,
    TmatrixJet,
    Saturate,
    Vfilt,
    Tmatrix,
    Spectrum,
    SpectralPairs,
    Monodromy,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Brieskorn lattice, Gauss-Manin normal form and spectral pairs of an
/// isolated hypersurface singularity.
#[derive(Debug, Parser)]
#[command(name = "blk", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Polynomial, e.g. "x^2*y^2+x^5+y^5".
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub poly: Option<String>,
    /// File holding the polynomial.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Jet degree for tmatrix-jet and saturate (the full pipeline picks its own).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Check the composed basis change against the original t-matrix.
    #[arg(long)]
    pub audit: bool,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::NotSingular(_) | Error::ZeroPolynomial | Error::VariableMismatch { .. } => 2,
        Error::NonIsolatedSingularity { .. } => 3,
        _ => 4,
    }
}

fn fail(format: Format, kind: &str, msg: &str, code: u8) -> ExitCode {
    match format {
        Format::Json => {
            let v = serde_json::json!({ "error": { "kind": kind, "message": msg } });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => eprintln!("blk: {kind}: {msg}"),
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let src = match (&cli.poly, &cli.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => return fail(cli.format, "io_error", &format!("{}: {e}", path.display()), 2),
        },
        (None, None) => unreachable!("clap requires one source"),
    };
    let parsed = match parse_poly_named(src.trim()) {
        Ok(p) => p,
        Err(e) => return fail(cli.format, e.kind(), &e.to_string(), exit_code(&e)),
    };
    match report::run(&cli, &parsed) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
                Format::Text => out.text,
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(cli.format, e.kind(), &e.to_string(), exit_code(&e)),
    }
}
