use std::process::ExitCode;

fn main() -> ExitCode {
    curvequant::cli::main_with_args(std::env::args_os())
}
