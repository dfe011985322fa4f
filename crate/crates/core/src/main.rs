use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use ramsey_squeeze::cli::{self, Cli, CliError};

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut stderr = io::stderr();
    let code = match execute(args, &mut stderr) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(args: Cli, diag: &mut dyn Write) -> Result<i32, CliError> {
    let mut out: Box<dyn Write> = match args.command.output() {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = cli::run(args.command, &mut out, diag)?;
    out.flush()?;
    Ok(code)
}
