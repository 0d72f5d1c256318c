use std::process::ExitCode;

fn main() -> ExitCode {
    lassim::cli::main()
}
