//! Staged output writing: every output lands in a `.tmp` sibling first and
//! is renamed into place only when the whole command has succeeded, so a
//! failing command never leaves partial outputs behind.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::FormatError;

#[derive(Debug)]
struct StageEntry {
    final_path: PathBuf,
    tmp_path: PathBuf,
    written: bool,
}

/// Collects a command's output files and commits them atomically at the
/// end. Dropping an uncommitted stager removes any temporaries.
#[derive(Debug, Default)]
pub struct OutputStager {
    entries: Vec<StageEntry>,
    committed: bool,
}

impl OutputStager {
    pub fn new() -> Self {
        Self::default()
    }

    /// Claim an output path before doing any work. Fails fast when the
    /// file already exists and `force` is not set.
    pub fn reserve(&mut self, final_path: &Path, force: bool) -> Result<(), FormatError> {
        if !force && final_path.exists() {
            return Err(FormatError::FileExists {
                path: final_path.to_path_buf(),
            });
        }
        let mut os = final_path.as_os_str().to_os_string();
        os.push(".tmp");
        self.entries.push(StageEntry {
            final_path: final_path.to_path_buf(),
            tmp_path: PathBuf::from(os),
            written: false,
        });
        Ok(())
    }

    /// Write bytes to the temporary sibling of a reserved path.
    pub fn write(&mut self, final_path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
        let entry = self
            .entries
            .iter_mut()
            .find(|e| e.final_path == final_path)
            .unwrap_or_else(|| panic!("output {} was not reserved", final_path.display()));
        fs::write(&entry.tmp_path, bytes).map_err(|e| FormatError::io(&entry.tmp_path, e))?;
        entry.written = true;
        Ok(())
    }

    /// Rename every written temporary onto its final path.
    pub fn commit(mut self) -> Result<(), FormatError> {
        for entry in &self.entries {
            debug_assert!(entry.written, "reserved but never written: {:?}", entry.final_path);
            fs::rename(&entry.tmp_path, &entry.final_path)
                .map_err(|e| FormatError::io(&entry.final_path, e))?;
        }
        self.committed = true;
        Ok(())
    }
}

impl Drop for OutputStager {
    fn drop(&mut self) {
        if !self.committed {
            for entry in &self.entries {
                let _ = fs::remove_file(&entry.tmp_path);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    #[test]
    fn commit_moves_outputs_into_place() {
        let dir = TempDir::new().unwrap();
        let out = dir.path().join("a.bin");
        let mut stager = OutputStager::new();
        stager.reserve(&out, false).unwrap();
        stager.write(&out, b"payload").unwrap();
        stager.commit().unwrap();
        assert_eq!(fs::read(&out).unwrap(), b"payload");
        assert!(!dir.path().join("a.bin.tmp").exists());
    }

    #[test]
    fn drop_without_commit_cleans_up() {
        let dir = TempDir::new().unwrap();
        let out = dir.path().join("a.bin");
        {
            let mut stager = OutputStager::new();
            stager.reserve(&out, false).unwrap();
            stager.write(&out, b"payload").unwrap();
            // dropped uncommitted
        }
        assert!(!out.exists());
        assert!(!dir.path().join("a.bin.tmp").exists());
    }

    #[test]
    fn existing_outputs_need_force() {
        let dir = TempDir::new().unwrap();
        let out = dir.path().join("a.bin");
        fs::write(&out, b"old").unwrap();
        let mut stager = OutputStager::new();
        assert!(matches!(
            stager.reserve(&out, false),
            Err(FormatError::FileExists { .. })
        ));
        stager.reserve(&out, true).unwrap();
        stager.write(&out, b"new").unwrap();
        stager.commit().unwrap();
        assert_eq!(fs::read(&out).unwrap(), b"new");
    }
}
