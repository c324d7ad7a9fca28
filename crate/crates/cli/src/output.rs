use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use ppdlab::Error;
use serde::Serialize;
use serde_json::Value;

use crate::Global;

#[derive(Debug)]
pub enum CliError {
    /// unreadable or malformed input, exit 2
    Input(String),
    /// a property or precondition does not hold, exit 1
    Property(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Property(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Property(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGroup(_)
            | Error::GroupMismatch { .. }
            | Error::ElementOutOfRange { .. }
            | Error::NotSubgroup(_)
            | Error::IllDefinedHomomorphism(_)
            | Error::BoundExceeded { .. }
            | Error::LengthMismatch { .. }
            | Error::NonPositiveScale
            | Error::NotSpd(_)
            | Error::Parse(_) => CliError::Input(e.to_string()),
            _ => CliError::Property(e.to_string()),
        }
    }
}

pub struct Report {
    pub body: Value,
    pub ok: bool,
}

impl Report {
    pub fn new(body: impl Serialize, ok: bool) -> Result<Self, CliError> {
        let body = serde_json::to_value(body).map_err(|e| CliError::Property(format!("serialization: {e}")))?;
        Ok(Report { body, ok })
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn emit(global: &Global, report: &Report) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&report.body).expect("values serialize");
    text.push('\n');
    match &global.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}
