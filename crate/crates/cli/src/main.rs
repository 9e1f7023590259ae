use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = sponge_cli::run_args(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(outcome.code as u8)
}
