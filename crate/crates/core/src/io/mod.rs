//! Configuration, sweeps, figure tables and their CSV/JSON encoding.

mod config;
mod figures;
mod sweep;
mod table;

use std::io::Write;
use std::path::Path;

pub use config::{parse_config, OutputFormat, SweepConfig};
pub use figures::{manifest, run_figure, FigureId, FigureOverrides, Manifest};
pub use sweep::run_sweep;
pub use table::{Column, FigureTable, HEADER};

use crate::error::{Error, Result};

pub fn render(table: &FigureTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    }
}

/// Writes the table to `path`, or to stdout when no path is given.
pub fn emit(table: &FigureTable, path: Option<&Path>, format: OutputFormat) -> Result<()> {
    let text = render(table, format);
    match path {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
