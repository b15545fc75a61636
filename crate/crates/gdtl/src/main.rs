use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gdtl::driver::{self, Command, Failure, Options, DEFAULT_RUN_FUEL};
use gdtl::harness::{check_guarantees_with, Verdict};
use gdtl::output;
use gdtl_core::normalize::DEFAULT_NORM_FUEL;

/// Exit status when the property harness finds a counterexample.
const EXIT_COUNTEREXAMPLE: u8 = 5;

#[derive(Parser)]
#[command(name = "gdtl", version, about = "Typechecker and interpreter for a gradual dependently typed language")]
struct Cli {
    /// Print one JSON object (or JSON lines for `props`) instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Budget for eliminator reduction while normalizing types.
    #[arg(long, global = true, default_value_t = DEFAULT_NORM_FUEL)]
    norm_fuel: u64,

    /// Route the file through the static language.
    #[arg(long = "static", global = true, hide = true)]
    static_lang: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Typecheck and print the type of `main`.
    Check { file: PathBuf },
    /// Print the normal form of `main`.
    Norm { file: PathBuf },
    /// Print `main` elaborated with evidence.
    Elab { file: PathBuf },
    /// Evaluate `main`.
    Run {
        file: PathBuf,
        /// Maximum number of evaluation steps.
        #[arg(long, env = "GDTL_FUEL", default_value_t = DEFAULT_RUN_FUEL)]
        fuel: u64,
        /// Print every step with the rule that produced it.
        #[arg(long)]
        trace: bool,
    },
    /// Check the gradual guarantees on generated programs.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Step budget for each run in the dynamic property.
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, file, fuel, trace) = match cli.command {
        Cmd::Check { file } => (Command::Check, file, DEFAULT_RUN_FUEL, false),
        Cmd::Norm { file } => (Command::Norm, file, DEFAULT_RUN_FUEL, false),
        Cmd::Elab { file } => (Command::Elab, file, DEFAULT_RUN_FUEL, false),
        Cmd::Run { file, fuel, trace } => (Command::Run, file, fuel, trace),
        Cmd::Props { seed, count, fuel } => return props(seed, count, fuel, cli.norm_fuel, cli.json),
    };
    let opts = Options { fuel, norm_fuel: cli.norm_fuel, trace, static_lang: cli.static_lang };
    let path = file.display().to_string();
    let outcome = match std::fs::read_to_string(&file) {
        Ok(src) => driver::process(&path, &src, cmd, &opts),
        Err(e) => Err(Failure::Read(e.to_string())),
    };
    if cli.json {
        println!("{}", output::json_string(&outcome));
    } else {
        let (out, err) = output::human(&path, &outcome);
        print!("{out}");
        eprint!("{err}");
    }
    let _ = std::io::stdout().flush();
    match &outcome {
        Ok(_) => ExitCode::SUCCESS,
        Err(f) => ExitCode::from(f.exit_code() as u8),
    }
}

fn props(seed: u64, count: u64, fuel: u64, norm_fuel: u64, json: bool) -> ExitCode {
    let report = check_guarantees_with(seed, count, fuel, norm_fuel);
    let failures = report.failures().count();
    if json {
        print!("{}", report.to_jsonl());
    } else {
        for e in report.failures() {
            let c = e.counterexample.as_ref().expect("failures carry a counterexample");
            println!("counterexample ({:?}, seed {}): {}", e.property, e.seed, c.detail);
            println!("  original: {} : {}", c.original, c.ty);
            println!("  mutated:  {}", c.mutated);
        }
        let skipped = report.entries.iter().filter(|e| e.verdict == Verdict::Skip).count();
        println!("{count} cases, {} checks, {skipped} skipped, {failures} counterexamples", report.entries.len());
    }
    if failures > 0 {
        ExitCode::from(EXIT_COUNTEREXAMPLE)
    } else {
        ExitCode::SUCCESS
    }
}
