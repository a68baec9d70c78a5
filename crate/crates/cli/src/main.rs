use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use twohop_core::engine::{render_message_trace, render_trace, run, Scheme};
use twohop_core::graph::read_edge_list;
use twohop_core::harness::{check_graph, load_run_config, load_sweep_config, repro_scenario, sweep, HarnessError, SCENARIOS};

const EXIT_CONFIG: u8 = 2;
const EXIT_ASSERTION: u8 = 3;

#[derive(Parser)]
#[command(name = "twohop", version, about = "Resilient consensus with two-hop detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report connectivity, robustness and scheme conditions of an edge list.
    CheckGraph {
        file: PathBuf,
        #[arg(long)]
        f: usize,
        #[arg(long, value_parser = parse_scheme)]
        scheme: Option<Scheme>,
    },
    /// Run one configuration and print its trace.
    Simulate {
        config: PathBuf,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the message trace here (requires `record_messages = true`).
        #[arg(long)]
        messages: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep and write per-run rows as CSV.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a canned scenario and check its assertions.
    Repro {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS))]
        name: String,
    },
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    Scheme::parse(s).ok_or_else(|| format!("expected one of plain, wmsr, scheme1, scheme2; got `{s}`"))
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::CheckGraph { file, f, scheme } => {
            let report = match read_edge_list(&file).and_then(|g| check_graph(&g, f)) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            print!("{}", report.render(scheme));
            ExitCode::SUCCESS
        }
        Command::Simulate { config, trace, messages } => {
            let cfg = match load_run_config(&config) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let rec = match run(&cfg) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            let text = render_trace(&rec);
            let result = match &trace {
                Some(p) => write_file(p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = result {
                return config_error(e);
            }
            if let Some(p) = &messages {
                let Some(m) = render_message_trace(&rec) else {
                    return config_error("message trace needs record_messages = true");
                };
                if let Err(e) = write_file(p, &m) {
                    return config_error(e);
                }
            }
            let ev = &rec.evaluation;
            eprintln!(
                "outcome {} after {} rounds, final spread {:e}, {} verdicts",
                ev.outcome.as_str(),
                rec.rounds_run(),
                ev.final_spread,
                rec.verdicts.len()
            );
            ExitCode::SUCCESS
        }
        Command::Sweep { config, out } => {
            let cfg = match load_sweep_config(&config) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let res = match sweep(&cfg) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            let written = File::create(&out)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", out.display())))
                .and_then(|f| res.write_csv(BufWriter::new(f)));
            if let Err(e) = written {
                return config_error(e);
            }
            for line in &res.log {
                eprintln!("{line}");
            }
            for c in &res.cells {
                println!(
                    "{} f={} r={} success={:.2} condition={:.2}",
                    c.scheme, c.f, c.r, c.success_rate, c.condition_rate
                );
            }
            ExitCode::SUCCESS
        }
        Command::Repro { name } => match repro_scenario(&name) {
            Ok(report) => {
                print!("{}", report.summary());
                if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_ASSERTION)
                }
            }
            Err(e) => config_error(e),
        },
    }
}
