//! `gandhi`: successive primes from Gandhi's formula.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 a budget or
//! precision ceiling refused the work, 3 a result disagreed with the sieve,
//! 64 bad arguments.

mod commands;
mod config;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use commands::{cmd_bench, cmd_next, cmd_sequence, cmd_verify, EXIT_USAGE};
use config::{Cli, Command, RunConfig};
use output::Emitter;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let cfg = match RunConfig::try_from(&cli.run) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: &Command, cfg: &RunConfig) -> io::Result<u8> {
    let stdout = io::stdout().lock();
    let mut out = Emitter::new(cfg.output_format, stdout, cfg.log.as_deref())?;
    let code = match command {
        Command::Next { n } => cmd_next(*n, cfg, &mut out)?,
        Command::Sequence { count } => cmd_sequence(*count, cfg, &mut out)?,
        Command::Verify(args) => cmd_verify(args, cfg, &mut out)?,
        Command::Bench(args) => cmd_bench(args, cfg, &mut out)?,
    };
    out.finish()?.flush()?;
    Ok(code)
}
