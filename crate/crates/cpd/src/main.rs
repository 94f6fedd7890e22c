use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cpd::{run, validate, verify, CliError, DomainSpec, Format, Mode, RunSpec};

#[derive(Parser)]
#[command(name = "cpd", version, about = "Centroidal power diagram minimisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a minimisation, search, sweep or verification suite.
    Run(SpecArgs),
    /// Check a run specification without running it.
    Validate(SpecArgs),
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// One value, or a comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Vec<f64>,
    /// `unit-square`, `unit-hexagon`, or a polygon JSON file.
    #[arg(long, default_value = "unit-square")]
    domain: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random starts per cell count.
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Lloyd iteration cap (lloyd) or Lloyd steps per round (search, sweep).
    #[arg(long)]
    max_iter: Option<usize>,
    /// Displacement tolerance (lloyd) or rescaled-energy dedup tolerance
    /// (search, sweep).
    #[arg(long)]
    tol: Option<f64>,
    /// Initial number of sites for lloyd mode.
    #[arg(long)]
    sites: Option<usize>,
    /// Half-width coefficient of the searched cell-count interval.
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Json, Format::Csv, Format::Svg])]
    format: Vec<Format>,
}

impl SpecArgs {
    fn into_spec(self) -> Result<RunSpec, CliError> {
        Ok(RunSpec {
            mode: self.mode,
            domain: DomainSpec::from_arg(&self.domain)?,
            lambdas: self.lambda,
            seed: self.seed,
            restarts: self.restarts,
            max_iter: self.max_iter,
            tol: self.tol,
            sites: self.sites,
            width: self.width,
            out: self.out,
            formats: self.format,
        })
    }
}

fn fail(err: &CliError) -> ExitCode {
    let report = serde_json::to_string(&err.report()).unwrap_or_else(|_| format!("{{\"message\":{:?}}}", err.to_string()));
    eprintln!("{report}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate(args) => {
            let spec = match args.into_spec() {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let diagnostics = validate(&spec);
            println!("{}", serde_json::to_string_pretty(&diagnostics).expect("serialisable"));
            if diagnostics.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Command::Run(args) => {
            let result = args.into_spec().and_then(|spec| run(&spec));
            match result {
                Ok(summary) => {
                    if !summary.checks.is_empty() {
                        print!("{}", verify::table(&summary.checks));
                    }
                    for f in &summary.files {
                        println!("wrote {}", f.display());
                    }
                    if summary.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}
