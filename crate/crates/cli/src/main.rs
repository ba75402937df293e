use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pfdual::pfun::DEFAULT_ENUMERATION_CAP;
use pfdual::transducer::DEFAULT_MAX_LEN;
use pfdual_cli::commands::{self, CliError, Output};
use pfdual_cli::formats::Workspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Check, dualize and compare finite algebras of partial functions and their
/// dual étale categories.
#[derive(Parser)]
#[command(name = "pfdual", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write a Graphviz rendering of the result here.
    #[arg(long, value_name = "FILE", global = true)]
    dot: Option<PathBuf>,
    /// Largest base accepted in concrete-algebra files.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_ENUMERATION_CAP, global = true)]
    max_base: usize,
    /// Word length bound for bounded transducer comparisons.
    #[arg(long, value_name = "L", default_value_t = DEFAULT_MAX_LEN, global = true)]
    max_len: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the ten (quasi)equations on an algebra file.
    CheckAxioms { file: PathBuf },
    /// Dual category of an algebra.
    Dualize { file: PathBuf },
    /// Algebra of sections of a category.
    Sections { file: PathBuf },
    /// Compare an algebra or category with its double dual.
    Bidual { file: PathBuf },
    /// Check a homomorphism and its dual.
    HomCheck { file: PathBuf },
    /// Check a multivalued functor.
    FunctorCheck { file: PathBuf },
    /// Check the naturality square for a hom or functor file.
    Naturality { file: PathBuf },
    /// Transducer operations.
    #[command(subcommand)]
    Transducer(TransducerCommand),
}

#[derive(Subcommand)]
enum TransducerCommand {
    /// Output of a transducer on one word
    Eval { file: PathBuf, word: String },
    /// Run the first transducer, then the second
    Compose { first: PathBuf, second: PathBuf },
    /// Domain as a DFA
    Dom { file: PathBuf },
    /// Range as a DFA
    Range { file: PathBuf },
    /// Preferential union: the first where defined, otherwise the second
    Pref { first: PathBuf, second: PathBuf },
    /// Check the equations on the given transducers up to --max-len
    Axioms {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut ws = Workspace::new(cli.max_base);
    match &cli.command {
        Command::CheckAxioms { file } => commands::check_axioms(&mut ws, file),
        Command::Dualize { file } => commands::dualize(&mut ws, file),
        Command::Sections { file } => commands::sections(&mut ws, file),
        Command::Bidual { file } => commands::bidual(&mut ws, file),
        Command::HomCheck { file } => commands::hom_check(&mut ws, file),
        Command::FunctorCheck { file } => commands::functor_check(&mut ws, file),
        Command::Naturality { file } => commands::naturality(&mut ws, file),
        Command::Transducer(t) => match t {
            TransducerCommand::Eval { file, word } => commands::transducer_eval(&mut ws, file, word),
            TransducerCommand::Compose { first, second } => commands::transducer_compose(&mut ws, first, second),
            TransducerCommand::Dom { file } => commands::transducer_dom(&mut ws, file),
            TransducerCommand::Range { file } => commands::transducer_range(&mut ws, file),
            TransducerCommand::Pref { first, second } => commands::transducer_pref(&mut ws, first, second),
            TransducerCommand::Axioms { files } => {
                let paths: Vec<&std::path::Path> = files.iter().map(PathBuf::as_path).collect();
                commands::transducer_axioms(&mut ws, &paths, cli.max_len)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.dot {
        let Some(dot) = &out.dot else {
            eprintln!("error: this command has no graph output");
            return ExitCode::from(2);
        };
        if let Err(e) = fs::write(path, dot) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    print!("{}", commands::render(&out, cli.format == Format::Json));
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
