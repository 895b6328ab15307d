//! Command-line front end for `gaussfid`: state files, report rendering
//! and the exit-code contract.
//!
//! Exit codes: 0 success, 1 invalid input (parse or physicality failures,
//! closed-form fidelity on two mixed states), 2 usage errors, 3 numerical
//! guards (conditioning, Fock truncation cap, Williamson residuals).

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod state_file;

pub use args::{Cli, Command, Format, RunConfig};
pub use commands::{run, Outcome};
pub use error::CliError;
pub use state_file::{parse_state, read_state_file, StateFile};
