use std::process::ExitCode;

fn main() -> ExitCode {
    kmnil::cli::main()
}
