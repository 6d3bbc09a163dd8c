use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heinz_cli::{config::linspace, emit_sweep, run_suite, CliError, SuiteConfig, TripleSpec};
use heinz_core::functionals::{zou_counterexample, Functional, ZOU_NU, ZOU_POINTS};
use heinz_core::NormKind;

#[derive(Parser)]
#[command(
    name = "heinz",
    version,
    about = "Randomized verification of Heinz/Heron mean norm inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run inequality suites over seeded random instances.
    Check(CheckArgs),
    /// Write one functional over a parameter grid as CSV.
    Sweep(SweepArgs),
    /// Reproduce the non-PSD kernel matrix at nu = 0.42.
    Zou {
        #[arg(long, value_enum, default_value_t = ZouFormat::Text)]
        format: ZouFormat,
    },
    /// Print the version.
    Version,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZouFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite name (repeatable), e.g. check_t1, zou, all.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Norm (repeatable): operator, trace, schatten:<p>, kyfan:<k>.
    #[arg(long = "norm", value_parser = parse_norm)]
    norms: Vec<NormKind>,
    #[arg(long)]
    tolerance_scale: Option<f64>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// F, G, K or phi.
    #[arg(long, value_parser = ["F", "G", "K", "phi", "f", "g", "k"])]
    functional: String,
    /// Exponent for phi.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, value_parser = parse_norm, default_value = "schatten:2")]
    norm: NormKind,
    /// Use A = B = X = I instead of a random triple.
    #[arg(long)]
    identity: bool,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Spectrum bounds m,M of the random A and B.
    #[arg(long, value_name = "m,M", value_delimiter = ',', default_values_t = [0.1, 10.0])]
    spectrum_bounds: Vec<f64>,
    /// Explicit comma-separated grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["from", "to", "points"])]
    grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 33)]
    points: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse().map_err(|e: heinz_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Check(args) => check(args),
        Command::Sweep(args) => sweep(args),
        Command::Zou { format } => {
            zou(format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Version => {
            print_stdout(&format!("heinz {}\n", env!("CARGO_PKG_VERSION")));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print_stdout(text);
            Ok(())
        }
    }
}

/// A closed pipe (e.g. `heinz ... | head`) is not an error.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => eprintln!("error: stdout: {e}"),
    }
}

fn check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let mut config = match &args.config {
        Some(path) => SuiteConfig::from_json_file(path)?,
        None => SuiteConfig::default(),
    };
    if !args.suites.is_empty() {
        config.suites = args.suites;
    }
    if let Some(dims) = args.dims {
        config.dims = dims;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if !args.norms.is_empty() {
        config.norms = args.norms;
    }
    if let Some(scale) = args.tolerance_scale {
        config.tolerance_scale = scale;
    }

    let report = run_suite(&config)?;
    for s in &report.suites {
        let note = if s.expected_negative {
            " (expected negative)"
        } else {
            ""
        };
        eprintln!(
            "{:<28} {:>8}/{:<8} passed  worst relative margin {:+.3e}{note}",
            s.name, s.passed, s.total, s.worst_relative_margin
        );
    }
    for e in &report.errors {
        eprintln!(
            "error in {} (dim {}, trial {}): {}",
            e.suite, e.dim, e.trial, e.message
        );
    }
    let text = match args.format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Csv => report.to_csv(),
    };
    write_output(args.out.as_ref(), &text)?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let functional: Functional = if args.functional.eq_ignore_ascii_case("phi") {
        format!("phi:{}", args.r).parse()?
    } else {
        args.functional.parse()?
    };
    let grid = match args.grid {
        Some(g) => g,
        None => {
            if args.points == 0 {
                return Err(heinz_cli::CliError::Config(
                    "points: must be positive".into(),
                ));
            }
            linspace(args.from, args.to, args.points)
        }
    };
    let spec = if args.identity {
        TripleSpec::Identity(args.dim)
    } else {
        if args.spectrum_bounds.len() != 2 {
            return Err(heinz_cli::CliError::Config(
                "spectrum-bounds: expected two values m,M".into(),
            ));
        }
        TripleSpec::Random {
            dim: args.dim,
            seed: args.seed,
            bounds: (args.spectrum_bounds[0], args.spectrum_bounds[1]),
        }
    };
    match &args.out {
        Some(path) => emit_sweep(&spec, args.norm, functional, &grid, path)?,
        None => print_stdout(&heinz_cli::sweep_csv(
            &spec.build()?,
            args.norm,
            functional,
            &grid,
        )?),
    }
    Ok(ExitCode::SUCCESS)
}

fn zou(format: ZouFormat) {
    let z = zou_counterexample();
    let text = match format {
        ZouFormat::Json => serde_json::to_string_pretty(&z).expect("serializable") + "\n",
        ZouFormat::Text => {
            let mut text = format!("kernel matrix at nu = {ZOU_NU}, x = {ZOU_POINTS:?}:\n");
            for row in &z.matrix {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
                text += &format!("  {}\n", cells.join("  "));
            }
            text += &format!("determinant: {:.6e}\n", z.determinant);
            text += &format!("min eigenvalue: {:.6e}\n", z.min_eigenvalue);
            text += &format!("psd: {}\n", z.psd);
            text
        }
    };
    print_stdout(&text);
}
