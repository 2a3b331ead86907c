use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holderopt::experiment::{parse_budgets, parse_config, run_experiment, run_suite, run_sweep, sweep_threads};
use holderopt::Error;

#[derive(Parser)]
#[command(name = "holderopt", version, about = "Universal first-order methods: runs, sweeps and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a packaged verification suite and print one line per criterion.
    Suite { name: String },
    /// Run a config once per budget and fit the rate across budgets.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated budgets, e.g. 32,64,128.
        #[arg(long)]
        budgets: String,
    },
}

fn fail(e: Error) -> ExitCode {
    match e {
        Error::Config(msg) => {
            eprintln!("config_error: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
        other => {
            eprintln!("run_error: {}", other.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => parse_config(&config).and_then(|c| run_experiment(&c)).map(|out| {
            let s = &out.summary;
            println!(
                "algorithm={} queries={} final_subopt={} fit={}",
                s.algorithm,
                s.total_queries,
                s.final_subopt.map_or("NA".into(), |v| format!("{v:.6e}")),
                s.fit.map_or("NA".into(), |f| format!("{}:{:.4}", f.kind, f.value)),
            );
            true
        }),
        Command::Sweep { config, budgets } => parse_config(&config).and_then(|c| {
            let budgets = parse_budgets(&budgets)?;
            let rep = run_sweep(&c, &budgets, sweep_threads()?)?;
            for e in &rep.entries {
                println!(
                    "budget={} queries={} final_subopt={}",
                    e.budget,
                    e.summary.total_queries,
                    e.summary.final_subopt.map_or("NA".into(), |v| format!("{v:.6e}"))
                );
            }
            println!("slope={}", rep.slope.map_or("NA".into(), |s| format!("{s:.4}")));
            Ok(true)
        }),
        Command::Suite { name } => run_suite(&name).map(|rep| {
            for c in &rep.criteria {
                println!("{} {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
            }
            let failed: Vec<&str> = rep.criteria.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(","));
            }
            failed.is_empty()
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(e),
    }
}
