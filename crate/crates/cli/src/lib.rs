//! Command-line front end: manifold expressions, command dispatch and
//! report rendering.

pub mod commands;
pub mod expr;
pub mod report;

pub use commands::{run, Cli, CliError, Command};
pub use expr::{parse_manifold, ExprError, ManifoldExpr};
