//! Command-line front end and live-session server for `droopvessel`.

pub mod commands;
pub mod report;
pub mod server;

use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const PARSE: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const RUNTIME: u8 = 3;
    pub const PORT_IN_USE: u8 = 4;
}

/// A failure carrying the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
