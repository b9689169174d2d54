//! `nskd` command-line front end.

mod args;
mod cmd;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> anyhow::Result<output::Output> {
    match &cli.command {
        Command::Box(c) => cmd::boxes::run(c),
        Command::Attack(c) => cmd::attack::run(c),
        Command::Lp(c) => cmd::lp::run(c),
        Command::Keyrate(a) => cmd::rate::keyrate(a),
        Command::Region(a) => cmd::rate::region(a),
        Command::Protocol(c) => cmd::protocol::run(c, &cli.global),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        output::emit(&cli.global, &out)?;
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
