mod cli;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use commands::Verdict;

fn run(cli: &Cli) -> anyhow::Result<Verdict> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.into())
        .build_global()?;
    match &cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::Encode(a) => commands::encode_cmd(a),
        Command::Decode(a) => commands::decode_cmd(a),
        Command::Validate(a) => commands::validate(a),
        Command::Canon(a) => commands::canon(a),
        Command::Stats(a) => commands::stats(a),
        Command::Eval(a) => commands::eval(a),
        Command::Roundtrip(a) => commands::roundtrip(a),
        Command::Mock(a) => commands::mock(a),
    }
}

fn main() -> ExitCode {
    // Usage errors exit with status 2 from inside clap.
    let cli = Cli::parse();
    eprintln!("config: {cli:?}");
    match run(&cli) {
        Ok(Verdict::Clean) => ExitCode::SUCCESS,
        Ok(Verdict::DataFailures) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
