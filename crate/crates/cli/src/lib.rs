//! Driver for the experiments: recipes, reports and subcommand bodies.

pub mod commands;
pub mod recipe;
pub mod report;

pub use recipe::Recipe;
pub use report::{ExperimentReport, Status, Verdict};
