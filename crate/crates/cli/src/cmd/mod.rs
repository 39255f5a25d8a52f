//! Subcommand implementations.

pub mod classify;
pub mod curves;
pub mod eikonal;
pub mod field;
pub mod form;
pub mod hopf;
pub mod verify;
