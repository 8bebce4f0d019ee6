//! File-format and I/O errors. Display strings lead with a stable
//! PascalCase code and always name the offending file (and line or row
//! where one exists), so the CLI's single-line stderr output stays
//! machine-parsable.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("BadMagic: {}: leading bytes are not \"EMB1\"", path.display())]
    BadMagic { path: PathBuf },

    #[error(
        "TruncatedFile: {}: header implies {expected} bytes, file holds {found}",
        path.display()
    )]
    TruncatedFile {
        path: PathBuf,
        expected: u64,
        found: u64,
    },

    #[error("NaNPayload: {}: row {row} contains a non-finite float", path.display())]
    NaNPayload { path: PathBuf, row: usize },

    #[error("DuplicateRow: {}: line {line}: row {row} already referenced", path.display())]
    DuplicateRow {
        path: PathBuf,
        line: usize,
        row: usize,
    },

    #[error(
        "RowOutOfRange: {}: line {line}: row {row} outside 0..{count}",
        path.display()
    )]
    RowOutOfRange {
        path: PathBuf,
        line: usize,
        row: usize,
        count: usize,
    },

    #[error("BadManifest: {}: line {line}: {what}", path.display())]
    BadManifest {
        path: PathBuf,
        line: usize,
        what: String,
    },

    #[error("BadPairs: {}: line {line}: {what}", path.display())]
    BadPairs {
        path: PathBuf,
        line: usize,
        what: String,
    },

    #[error("BadConfig: {source_name}: {what}")]
    BadConfig { source_name: String, what: String },

    #[error("FileExists: {}: refusing to overwrite (pass --force)", path.display())]
    FileExists { path: PathBuf },

    #[error("Io: {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl FormatError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.into(),
            source,
        }
    }
}
