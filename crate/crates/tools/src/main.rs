use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(vibcodec_tools::cli::run_from(std::env::args_os()))
}
