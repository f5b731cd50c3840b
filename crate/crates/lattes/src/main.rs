use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use lattes::{run, Cli, EXIT_TRUNCATED};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let res = run(&cli.command, &mut out);
    let _ = out.flush();
    match res {
        Ok(o) if o.truncated => ExitCode::from(EXIT_TRUNCATED as u8),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) if e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
