//! Verification pairs CSV: header `a,b,label[,group][,fold]`, label 1 for
//! genuine and 0 for impostor.

use std::path::Path;

use embio_core::evalkit::{PairLabel, VerificationPair};

use crate::error::FormatError;

pub fn read_pairs(path: &Path) -> Result<Vec<VerificationPair>, FormatError> {
    let bad = |line: usize, what: String| FormatError::BadPairs {
        path: path.to_path_buf(),
        line,
        what,
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => {
                FormatError::io(path, std::io::Error::other(e.to_string()))
            }
            _ => bad(1, e.to_string()),
        })?;

    let headers = reader
        .headers()
        .map_err(|e| bad(1, e.to_string()))?
        .clone();
    let mut col_a = None;
    let mut col_b = None;
    let mut col_label = None;
    let mut col_group = None;
    let mut col_fold = None;
    for (i, name) in headers.iter().enumerate() {
        match name.trim() {
            "a" => col_a = Some(i),
            "b" => col_b = Some(i),
            "label" => col_label = Some(i),
            "group" => col_group = Some(i),
            "fold" => col_fold = Some(i),
            other => return Err(bad(1, format!("unknown column {other:?}"))),
        }
    }
    let (col_a, col_b, col_label) = match (col_a, col_b, col_label) {
        (Some(a), Some(b), Some(l)) => (a, b, l),
        _ => return Err(bad(1, "header must contain a, b and label columns".into())),
    };

    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(0, e.to_string()))?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(0);
        let field = |col: usize| record.get(col).unwrap_or("").trim();

        let a: usize = field(col_a)
            .parse()
            .map_err(|_| bad(line, format!("column a: {:?} is not a row index", field(col_a))))?;
        let b: usize = field(col_b)
            .parse()
            .map_err(|_| bad(line, format!("column b: {:?} is not a row index", field(col_b))))?;
        let label = match field(col_label) {
            "1" => PairLabel::Genuine,
            "0" => PairLabel::Impostor,
            other => return Err(bad(line, format!("label must be 1 or 0, got {other:?}"))),
        };
        let mut pair = VerificationPair::new(a, b, label)
            .map_err(|e| bad(line, e.to_string()))?;
        if let Some(col) = col_group {
            let group = field(col);
            if !group.is_empty() {
                pair = pair.with_group(group);
            }
        }
        if let Some(col) = col_fold {
            let fold = field(col);
            if !fold.is_empty() {
                let fold: usize = fold
                    .parse()
                    .map_err(|_| bad(line, format!("fold {fold:?} is not an index")))?;
                pair = pair.with_fold(fold);
            }
        }
        pairs.push(pair);
    }
    Ok(pairs)
}
