use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use surface_semigroups::cli::{run, OutputFormat, RunConfig, Subcommand, DEFAULT_TORSION, MAX_TORSION};

/// Decide and inspect non-trivial algebraic semigroup structures on surfaces.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Descriptor file (JSON), or `-` for standard input
    #[arg(long, global = true, value_name = "PATH", default_value = "-")]
    input: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Torsion level of the finite models used by `verify`
    #[arg(long, global = true, default_value_t = DEFAULT_TORSION,
          value_parser = clap::value_parser!(u32).range(1..=i64::from(MAX_TORSION)))]
    torsion: u32,
}

#[derive(clap::Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Classify the surface and print the reason chain
    Classify,
    /// Check associativity of the induced laws on finite models
    Verify,
    /// Describe the scheme of sections
    Moduli,
    /// Canonical class, nef/ample tests and the second fibration of a ruled surface
    Cone,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Text,
    Machine,
}

fn main() -> ExitCode {
    // exit code 2 is reserved for internal failures, so usage errors exit 1
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let config = RunConfig {
        subcommand: match args.command {
            Command::Classify => Subcommand::Classify,
            Command::Verify => Subcommand::VerifyLaw,
            Command::Moduli => Subcommand::Moduli,
            Command::Cone => Subcommand::Cone,
        },
        input_path: args.input,
        torsion_level: args.torsion,
        output_format: match args.format {
            Format::Text => OutputFormat::Text,
            Format::Machine => OutputFormat::Machine,
        },
    };
    let outcome = run(&config);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(u8::try_from(outcome.exit_code).unwrap_or(2))
}
