use std::process::ExitCode;

fn main() -> ExitCode {
    hashchem_cli::main_entry()
}
