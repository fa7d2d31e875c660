//! `doodle`: coloring invariants of virtual doodles from the command line.
//!
//! Exit status: 0 on success, 1 on a domain failure (axiom violation,
//! invariance counterexample), 2 on bad input.

mod commands;
mod inputs;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, FuzzConfig, Report};

#[derive(Parser)]
#[command(name = "doodle", version, about = "Coloring invariants of virtual doodles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a multiplication table against the doodle switch axioms.
    CheckSwitch { file: String },
    /// List every doodle switch of the given order.
    EnumSwitches {
        order: usize,
        /// Keep one table per isomorphism class.
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Count colorings of a diagram.
    Color {
        diagram: String,
        /// Switch file or asset name; repeatable. Defaults to T, Tprime, Tdoubleprime.
        #[arg(long = "switch")]
        switches: Vec<String>,
        #[arg(long)]
        csv: bool,
    },
    /// Count doubled colorings of a diagram.
    Dcolor {
        diagram: String,
        #[arg(long = "switch")]
        switches: Vec<String>,
        #[arg(long)]
        csv: bool,
    },
    /// List colorings as CSV, one column per generator.
    ListColorings {
        diagram: String,
        #[arg(long = "switch")]
        switches: Vec<String>,
        /// List doubled colorings instead.
        #[arg(long)]
        doubled: bool,
        /// Refuse to list more than this many colorings.
        #[arg(long, default_value_t = doodle_core::presentation::DEFAULT_LIST_CAP)]
        cap: u128,
    },
    /// CSV of col and dcol for each diagram and switch.
    Table {
        diagrams: Vec<String>,
        #[arg(long = "switch")]
        switches: Vec<String>,
        /// Accepted for symmetry; the table is always CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Check invariance of col, dcol and covering counts under random moves.
    Fuzz {
        /// Diagrams to walk from. Defaults to U and d31.
        diagrams: Vec<String>,
        #[arg(long = "switch")]
        switches: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Print the double covering of a diagram.
    Cover { diagram: String },
    /// Search small switches for one telling two diagrams apart.
    Distinguish {
        first: String,
        second: String,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
    },
}

fn run(command: Command) -> Result<Report, CliError> {
    match command {
        Command::CheckSwitch { file } => commands::check_switch(&file),
        Command::EnumSwitches { order, iso, csv } => commands::enum_switches(order, iso, csv),
        Command::Color { diagram, switches, csv } => commands::count(&diagram, &switches, false, csv),
        Command::Dcolor { diagram, switches, csv } => commands::count(&diagram, &switches, true, csv),
        Command::ListColorings {
            diagram,
            switches,
            doubled,
            cap,
        } => commands::list(&diagram, &switches, doubled, cap),
        Command::Table {
            diagrams,
            switches,
            csv: _,
        } => commands::table(&diagrams, &switches),
        Command::Fuzz {
            diagrams,
            switches,
            seed,
            trials,
            steps,
        } => commands::fuzz(&diagrams, &switches, &FuzzConfig { seed, trials, steps }),
        Command::Cover { diagram } => commands::cover(&diagram),
        Command::Distinguish {
            first,
            second,
            max_order,
        } => commands::distinguish(&first, &second, max_order),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
