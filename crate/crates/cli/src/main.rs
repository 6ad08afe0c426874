use std::io::Write;
use std::process::exit;

use clap::Parser;

use relaycap_cli::args::{Cli, Command};
use relaycap_cli::commands::{cmd_bounds, cmd_random_channel, cmd_simulate, cmd_verify_examples};
use relaycap_cli::CliError;

fn run(cli: Cli) -> Result<i32, CliError> {
    let (text, code) = match cli.command {
        Command::Bounds(a) => (cmd_bounds(&a)?, 0),
        Command::Simulate(a) => (cmd_simulate(&a)?, 0),
        Command::VerifyExamples(a) => {
            let (text, ok) = cmd_verify_examples(a.tolerance)?;
            (text, if ok { 0 } else { 1 })
        }
        Command::RandomChannel(a) => (cmd_random_channel(&a)?, 0),
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(code)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}
