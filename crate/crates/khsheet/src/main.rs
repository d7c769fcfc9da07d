use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(khsheet::main_with(std::env::args_os()))
}
