use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pogline_cli::commands::{self, CatalogCommand, DeleteFlags, Selection};
use pogline_cli::{Failure, Global, Mode, Report};

#[derive(Parser)]
#[command(name = "pogline", version, about = "Freeness and plus-one generation of projective line arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Commands,

    /// Rank verification: exact (default up to 21 lines) or modular
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Primes for modular mode, comma separated (implies --mode modular)
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,

    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Log progress to stderr
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Modular,
}

#[derive(Subcommand)]
enum Commands {
    /// Invariants, screens and syzygy classification of an arrangement
    Analyze { file: PathBuf },
    /// Combinatorial screen of `d=..;t2=..,t3=..` or a file
    Screen { input: String },
    /// Delete a line, every line in turn, or all lines through a point
    Delete(DeleteArgs),
    /// Embedded reference arrangements and the MPOG screen
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run the full invariant suite on an arrangement
    Verify { file: PathBuf },
}

#[derive(Args)]
struct DeleteArgs {
    file: PathBuf,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Parent exponents `d1,d2`; checked unless --assume-free
    #[arg(long, value_parser = commands::parse_pair)]
    parent: Option<(i64, i64)>,
    /// Trust --parent instead of classifying the parent
    #[arg(long, requires = "parent")]
    assume_free: bool,
    /// Also classify each deletion by syzygies
    #[arg(long)]
    confirm: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SelectionArgs {
    /// Index of the line to delete (0-based, file order)
    #[arg(long)]
    line: Option<usize>,
    /// Delete each line in turn and group identical results
    #[arg(long)]
    all_lines: bool,
    /// Delete every line through intersection point P (lattice order)
    #[arg(long, value_name = "P")]
    point_star: Option<usize>,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Names and weak combinatorics of all entries
    List,
    /// One entry in full
    Show { name: String },
    /// Screen the simplicial list for minimal plus-one generation
    Screen {
        /// Classify entries that have coordinates
        #[arg(long)]
        confirm: bool,
        /// Coordinates for an entry, as NAME=FILE (repeatable)
        #[arg(long = "coordinates", value_parser = commands::parse_assignment)]
        coordinates: Vec<(String, String)>,
    },
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let global = Global {
        mode: cli.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Modular => Mode::Modular,
        }),
        primes: cli.primes.clone(),
    };
    match &cli.command {
        Commands::Analyze { file } => commands::analyze(file, &global),
        Commands::Screen { input } => commands::screen(input),
        Commands::Delete(args) => {
            let s = &args.selection;
            let selection = match (s.line, s.all_lines, s.point_star) {
                (Some(i), _, _) => Selection::Line(i),
                (_, true, _) => Selection::AllLines,
                (_, _, Some(p)) => Selection::PointStar(p),
                _ => unreachable!("clap enforces one selection"),
            };
            let flags = DeleteFlags {
                parent: args.parent,
                assume_free: args.assume_free,
                confirm: args.confirm,
            };
            commands::delete(&args.file, &selection, &flags, &global)
        }
        Commands::Catalog { action } => {
            let command = match action {
                CatalogAction::List => CatalogCommand::List,
                CatalogAction::Show { name } => CatalogCommand::Show(name.clone()),
                CatalogAction::Screen { confirm, coordinates } => CatalogCommand::Screen {
                    confirm: *confirm,
                    coordinates: coordinates.clone(),
                },
            };
            commands::catalog(&command, &global)
        }
        Commands::Verify { file } => commands::verify(file, &global),
    }
}

fn emit(report: &Report, json: bool) {
    let text = if json { report.to_json() + "\n" } else { report.to_text() };
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(report) => {
            emit(&report, cli.json);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(report) = &failure.report {
                emit(report, cli.json);
            }
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
