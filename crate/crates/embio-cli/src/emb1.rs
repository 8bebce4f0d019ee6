//! The EMB1 binary embedding interchange format.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size            field
//! 0       4               magic "EMB1"
//! 4       4               count (u32)
//! 8       4               dim   (u32)
//! 12      4*count*dim     payload, f32 row-major
//! ```
//!
//! The file size must equal `12 + 4*count*dim` exactly and the payload may
//! not contain NaN or infinities. Values are f32 on disk and f64 in memory.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;

pub const MAGIC: [u8; 4] = *b"EMB1";
pub const HEADER_LEN: usize = 12;

/// A dense row-major matrix of embeddings loaded from (or destined for)
/// an EMB1 file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl EmbeddingMatrix {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == dim));
        EmbeddingMatrix { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }
}

/// Read and validate an EMB1 file.
pub fn read_matrix(path: &Path) -> Result<EmbeddingMatrix, FormatError> {
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::TruncatedFile {
            path: path.to_path_buf(),
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    if bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic {
            path: path.to_path_buf(),
        });
    }
    let count = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let dim = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = HEADER_LEN as u128 + 4u128 * count as u128 * dim as u128;
    if bytes.len() as u128 != expected {
        return Err(FormatError::TruncatedFile {
            path: path.to_path_buf(),
            expected: expected.min(u64::MAX as u128) as u64,
            found: bytes.len() as u64,
        });
    }

    let mut rows = Vec::with_capacity(count);
    let payload = &bytes[HEADER_LEN..];
    for r in 0..count {
        let mut row = Vec::with_capacity(dim);
        for c in 0..dim {
            let at = 4 * (r * dim + c);
            let value = f32::from_le_bytes(payload[at..at + 4].try_into().unwrap());
            if !value.is_finite() {
                return Err(FormatError::NaNPayload {
                    path: path.to_path_buf(),
                    row: r,
                });
            }
            row.push(value as f64);
        }
        rows.push(row);
    }
    Ok(EmbeddingMatrix { dim, rows })
}

/// Encode rows into EMB1 bytes, rounding to f32. `path` is only used to
/// name the destination in errors. Rejects values that do not survive the
/// f32 round-trip finitely.
pub fn encode(path: &Path, rows: &[Vec<f64>], dim: usize) -> Result<Vec<u8>, FormatError> {
    let mut bytes = Vec::with_capacity(HEADER_LEN + 4 * rows.len() * dim);
    bytes.extend_from_slice(&MAGIC);
    bytes.extend_from_slice(&(rows.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&(dim as u32).to_le_bytes());
    for (r, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.len(), dim);
        for value in row {
            let narrow = *value as f32;
            if !narrow.is_finite() {
                return Err(FormatError::NaNPayload {
                    path: path.to_path_buf(),
                    row: r,
                });
            }
            bytes.extend_from_slice(&narrow.to_le_bytes());
        }
    }
    Ok(bytes)
}

/// JSON sidecar stored next to a shift-vector EMB1 file, recording the
/// estimation provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSidecar {
    pub source_count: usize,
    pub target_count: usize,
    pub strength: f64,
}

/// Path of the JSON sidecar belonging to `emb_path` (appends ".json").
pub fn sidecar_path(emb_path: &Path) -> std::path::PathBuf {
    let mut os = emb_path.as_os_str().to_os_string();
    os.push(".json");
    std::path::PathBuf::from(os)
}

pub fn read_sidecar(path: &Path) -> Result<ShiftSidecar, FormatError> {
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| FormatError::BadConfig {
        source_name: path.display().to_string(),
        what: e.to_string(),
    })
}
