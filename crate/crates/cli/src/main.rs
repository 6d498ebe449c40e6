//! `smile-domain`: certify SVI slices, print bounds, sample domains, dump boundary tables.

mod commands;
mod output;
mod sample;
mod slice;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use smile_domain::ssvi::scan_uniqueness;

use output::{error_document, print_json, Failure, EXIT_ARBITRAGE, EXIT_FREE, EXIT_INVALID, SCHEMA};
use slice::SliceCmd;

#[derive(Parser, Debug)]
#[command(name = "smile-domain", version, about = "Butterfly-arbitrage domains for SVI smiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a slice; exit 0 when free of butterfly arbitrage, 1 otherwise, 2 on bad input.
    Certify {
        /// Also run the Durrleman density scan.
        #[arg(long, global = true)]
        oracle: bool,
        #[command(subcommand)]
        slice: SliceCmd,
    },
    /// Minimal sigma for a slice shape; sigma may be omitted.
    Bound {
        /// Also run the numerical search and report the relative gap.
        #[arg(long, global = true)]
        oracle: bool,
        /// Plain `key = value` lines instead of JSON.
        #[arg(long, global = true)]
        text: bool,
        #[command(subcommand)]
        slice: SliceCmd,
    },
    /// Draw arbitrage-free slices from a box of domain coordinates.
    Sample(sample::SampleArgs),
    /// Boundary curves as CSV.
    Table {
        #[arg(value_enum)]
        id: table::TableId,
    },
    /// Grid check that the SSVI minimizer is unique.
    ScanUniqueness {
        #[arg(long, default_value_t = 1000)]
        rho_steps: usize,
        #[arg(long, default_value_t = 1000)]
        x_steps: usize,
        /// Worker threads; the report does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Certify { .. } => "certify",
            Command::Bound { .. } => "bound",
            Command::Sample(_) => "sample",
            Command::Table { .. } => "table",
            Command::ScanUniqueness { .. } => "scan-uniqueness",
        }
    }
}

fn run(cmd: &Command) -> Result<i32, Failure> {
    match cmd {
        Command::Certify { oracle, slice } => {
            let (doc, code) = commands::certify(slice, *oracle)?;
            print_json(&doc);
            Ok(code)
        }
        Command::Bound { oracle, text, slice } => {
            let r = commands::bound(slice, *oracle)?;
            if *text {
                println!("sigma_star = {}", r.closed);
                if let Some((o, gap)) = r.oracle {
                    println!("oracle_sigma_star = {o}");
                    println!("relative_gap = {gap}");
                }
            } else {
                print_json(&r.doc);
            }
            Ok(EXIT_FREE)
        }
        Command::Sample(a) => {
            print_json(&sample::sample(a)?);
            Ok(EXIT_FREE)
        }
        Command::Table { id } => {
            let csv = table::table(*id)?;
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::new("io", e.to_string()))?;
            Ok(EXIT_FREE)
        }
        Command::ScanUniqueness { rho_steps, x_steps, workers, json } => {
            if *rho_steps < 2 || *x_steps < 2 {
                return Err(Failure::new("invalid_params", "scan needs at least 2 steps per axis"));
            }
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            log::info!("scanning {rho_steps} x {x_steps} with {workers} workers");
            let r = scan_uniqueness::<f64>(*rho_steps, *x_steps, workers);
            if *json {
                print_json(&json!({
                    "schema": SCHEMA,
                    "command": "scan-uniqueness",
                    "report": r,
                    "verdict": r.verdict(),
                }));
            } else {
                println!("grid = {} x {}", r.rho_steps, r.x_steps);
                println!("min_n = {}", r.min_n);
                println!("argmin_rho = {}", r.argmin_rho);
                println!("argmin_x = {}", r.argmin_x);
                println!("negatives = {}", r.negatives);
                println!("{}", r.verdict());
            }
            Ok(if r.pass { EXIT_FREE } else { EXIT_ARBITRAGE })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprint!("{e}");
            let f = Failure::new("usage", e.kind().to_string());
            print_json(&error_document("parse", &f));
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let code = match run(&cli.command) {
        Ok(code) => code,
        Err(f) => {
            log::error!("{}: {}", f.kind, f.message);
            print_json(&error_document(cli.command.name(), &f));
            f.code
        }
    };
    ExitCode::from(code as u8)
}
