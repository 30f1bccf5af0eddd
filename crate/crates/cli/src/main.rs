use std::process::ExitCode;

fn main() -> ExitCode {
    tropmod_cli::main_with(std::env::args_os())
}
