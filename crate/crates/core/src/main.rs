use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = reinhardt::cli::run(std::env::args_os());
    if !outcome.stdout.is_empty() {
        println!("{}", outcome.stdout);
    }
    for line in &outcome.stderr {
        eprintln!("{line}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
