//! `lattice-lift`: verify lattice files, lift wires, sweep the small-lattice
//! corpus, and run the quadratic norm-image experiments.

mod commands;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "lattice-lift", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the multiplicative lattice axioms of a lattice file.
    CheckLattice { path: PathBuf },
    /// Analyze and lift wires of a lattice file.
    Lift {
        path: PathBuf,
        /// Comma-separated element names of a single subset to lift.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["all_wires", "m_wires_only"])]
        wire: Option<Vec<String>>,
        /// Every wire (the default).
        #[arg(long)]
        all_wires: bool,
        /// Only M-wires.
        #[arg(long, conflicts_with = "all_wires")]
        m_wires_only: bool,
    },
    /// Sweep every small lattice through the lifting, corollary, liftability
    /// and finitary-closure checks.
    Corpus {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Lattices per size.
        #[arg(long, default_value_t = usize::MAX)]
        limit: usize,
    },
    /// Norm-image experiments in Z[√d].
    Quad {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 10_000)]
        bound: i64,
        #[arg(long, default_value_t = 200)]
        prime_bound: i64,
        #[arg(long, default_value_t = 100_000)]
        search_bound: i64,
        #[arg(value_enum)]
        check: QuadCheck,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuadCheck {
    Norms,
    DivisionClosure,
    SWire,
    Verdict,
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("LATTICE_LIFT_THREADS")
        .ok()
        .and_then(|t| t.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::CheckLattice { path } => commands::check_lattice(path),
        Command::Lift {
            path,
            wire,
            m_wires_only,
            ..
        } => commands::lift(path, wire.as_deref(), *m_wires_only),
        Command::Corpus { max_n, limit } => commands::corpus(*max_n, *limit),
        Command::Quad {
            d,
            bound,
            prime_bound,
            search_bound,
            check,
        } => commands::quad(*d, *bound, *prime_bound, *search_bound, *check),
    };
    let report = RunReport {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: std::env::args().skip(1).collect(),
        status: outcome.status,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        result: outcome.result,
        lines: outcome.lines,
    };
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        Format::Text => {
            for line in &report.lines {
                println!("{line}");
            }
            println!("status: {:?} ({:.1} ms)", report.status, report.elapsed_ms);
        }
    }
    std::process::exit(report.status.exit_code());
}
