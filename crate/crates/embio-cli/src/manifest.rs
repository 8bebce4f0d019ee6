//! JSON Lines label manifests: one `{"label": ..., "row": ...}` object per
//! line, mapping identity labels to EMB1 payload rows. Extra fields are
//! carried through opaquely.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::FormatError;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub label: String,
    pub row: usize,
    pub extra: serde_json::Map<String, Value>,
}

/// Parse a JSONL manifest. Blank lines are tolerated; each non-blank line
/// must be an object with a string `label` and an unsigned integer `row`.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let bad = |line: usize, what: &str| FormatError::BadManifest {
        path: path.to_path_buf(),
        line,
        what: what.to_string(),
    };

    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(raw)
            .map_err(|e| bad(line, &format!("invalid JSON: {e}")))?;
        let Value::Object(mut object) = value else {
            return Err(bad(line, "line is not a JSON object"));
        };
        let label = match object.remove("label") {
            Some(Value::String(s)) => s,
            Some(_) => return Err(bad(line, "\"label\" must be a string")),
            None => return Err(bad(line, "missing \"label\" field")),
        };
        let row = match object.remove("row") {
            Some(Value::Number(n)) => n
                .as_u64()
                .ok_or_else(|| bad(line, "\"row\" must be a non-negative integer"))?
                as usize,
            Some(_) => return Err(bad(line, "\"row\" must be a non-negative integer")),
            None => return Err(bad(line, "missing \"row\" field")),
        };
        rows.push(ManifestRow {
            label,
            row,
            extra: object,
        });
    }
    Ok(rows)
}

/// Validate that manifest rows reference distinct in-range payload rows of
/// a matrix with `count` rows.
pub fn check_rows(path: &Path, rows: &[ManifestRow], count: usize) -> Result<(), FormatError> {
    let mut seen = vec![false; count];
    for (i, entry) in rows.iter().enumerate() {
        let line = i + 1;
        if entry.row >= count {
            return Err(FormatError::RowOutOfRange {
                path: path.to_path_buf(),
                line,
                row: entry.row,
                count,
            });
        }
        if seen[entry.row] {
            return Err(FormatError::DuplicateRow {
                path: path.to_path_buf(),
                line,
                row: entry.row,
            });
        }
        seen[entry.row] = true;
    }
    Ok(())
}

#[derive(Serialize)]
struct LabelLine<'a> {
    label: &'a str,
    row: usize,
}

/// Encode `(label, row)` pairs as JSONL bytes with a fixed field order.
pub fn encode_manifest<'a, I>(entries: I) -> Vec<u8>
where
    I: IntoIterator<Item = (&'a str, usize)>,
{
    let mut out = Vec::new();
    for (label, row) in entries {
        let line = LabelLine { label, row };
        serde_json::to_writer(&mut out, &line).expect("in-memory serialization");
        out.push(b'\n');
    }
    out
}
