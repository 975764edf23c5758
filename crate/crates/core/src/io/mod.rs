//! Configuration files, diagnostics CSV and binary snapshots.

mod config;
mod csv;
mod snapshot;

use thiserror::Error;

pub use config::{
    parse_config, parse_config_with, write_config, ConfigError, ConfigIssue, CONFIG_KEYS, DEFAULT_PENALTY_ORDER,
    REQUIRED_KEYS,
};
pub use csv::{format_real, parse_diagnostics, write_diagnostics, CSV_HEADER};
pub use snapshot::{
    read_snapshot, read_snapshot_file, write_snapshot, write_snapshot_file, SNAPSHOT_MAGIC, SNAPSHOT_VERSION,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed snapshot: {0}")]
    Snapshot(String),
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[cfg(test)]
mod tests;
