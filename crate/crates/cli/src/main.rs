use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use otlab_cli::report::to_json_string;
use otlab_cli::search::{report_json, search_pluriclosed, SearchParams};
use otlab_cli::tools::{export_vb, synth, verify_deg12, zigzag};
use otlab_cli::{analyze, resolve_bits, CliError, DatumFile};
use otlab_core::dcomplex::synth::SynthConfig;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "otlab", version, about = "Cohomology and metric checks for Oeljeklaus-Toma manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Output {
    /// Markdown instead of JSON
    #[arg(long)]
    md: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a datum file
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Certify the degree-12 example
    VerifyDeg12 {
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Decompose a double complex given as a fixture file
    Zigzag {
        fixture: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Screen small polynomials for pluriclosed units
    SearchPluriclosed {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        height: u32,
        #[arg(long, default_value_t = 3)]
        min_degree: usize,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Write a seeded random direct sum with its manifest
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the model complex of a datum as a fixture
    ExportVb {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        precision: Option<u32>,
    },
}

fn emit_text(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(json: &Value, markdown: &str, o: &Output) -> Result<(), CliError> {
    if o.md {
        emit_text(markdown, &o.out)
    } else {
        emit_text(&to_json_string(json), &o.out)
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze { file, output, precision } => {
            let d = DatumFile::read(&file)?;
            let bits = resolve_bits(precision, d.precision_bits)?;
            let r = analyze(&d, bits)?;
            emit(&r.json, &r.markdown, &output)?;
            Ok(r.status.exit_code())
        }
        Command::VerifyDeg12 { output, precision } => {
            let r = verify_deg12(resolve_bits(precision, None)?)?;
            emit(&r.json, &r.markdown, &output)?;
            Ok(r.code)
        }
        Command::Zigzag { fixture, output } => {
            let r = zigzag(&fixture)?;
            emit(&r.json, &r.markdown, &output)?;
            Ok(r.code)
        }
        Command::SearchPluriclosed { degree, height, min_degree, output, precision } => {
            let p = SearchParams { min_degree, max_degree: degree, height };
            let r = search_pluriclosed(&p, resolve_bits(precision, None)?)?;
            let json = report_json(&p, &r);
            let md = format!("# Pluriclosed search\n\n```json\n{}```\n", to_json_string(&json));
            emit(&json, &md, &output)?;
            Ok(0)
        }
        Command::Synth { seed, out } => {
            emit_text(&synth(seed, &SynthConfig::default()), &out)?;
            Ok(0)
        }
        Command::ExportVb { file, out, precision } => {
            let d = DatumFile::read(&file)?;
            let bits = resolve_bits(precision, d.precision_bits)?;
            emit_text(&export_vb(&d, bits)?, &out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
