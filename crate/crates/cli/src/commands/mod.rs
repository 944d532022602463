pub mod analyze;
pub mod batch;
pub mod bench;
pub mod plot;
pub mod run;

use crate::args::{Cli, Command};
use crate::error::CliError;

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run::execute(&args),
        Command::Batch(args) => batch::execute(&args),
        Command::Bench(args) => bench::execute(&args),
        Command::Analyze(args) => analyze::execute(&args),
        Command::Plot(args) => plot::execute(&args),
    }
}
