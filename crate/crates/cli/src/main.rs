use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seatcast::commands::{
    self, AllArgs, BiasArgs, ClassifyArgs, EvaluateArgs, ForecastArgs, IngestArgs, ScoreArgs,
};
use seatcast::demo;

/// Seat forecasts from entity-level news sentiment.
#[derive(Parser)]
#[command(name = "seatcast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scrape outlets into a deduplicated, filtered corpus.
    Ingest(IngestArgs),
    /// Label every (article, entity) pair of a corpus.
    Classify(ClassifyArgs),
    /// Weekly sentiment and SIS series per entity and party.
    Score(ScoreArgs),
    /// Per-outlet bias from the training split.
    Bias(BiasArgs),
    /// Bias-adjusted seat allocation per constituency.
    Forecast(ForecastArgs),
    /// Compare predicted labels against reference labels.
    Evaluate(EvaluateArgs),
    /// Run every stage from a pipeline configuration.
    All(AllArgs),
    /// Write the synthetic demo data set.
    Demo {
        /// Directory to write the data set into.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Classify(a) => commands::classify(a),
        Command::Score(a) => commands::score(a),
        Command::Bias(a) => commands::bias(a),
        Command::Forecast(a) => commands::forecast(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::All(a) => commands::all(a),
        Command::Demo { out } => demo::write(out),
    };
    match result {
        Ok(written) => {
            for path in written {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
