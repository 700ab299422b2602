//! File formats and command-line plumbing for `prodist-core`: JSON
//! instances, CSV schedule tables, result documents and convergence traces.

pub mod audit_doc;
pub mod fixtures;
pub mod instance_file;
pub mod result_doc;
pub mod table_csv;

use std::io::{self, Write};
use std::path::Path;

/// Writes `contents` to a temporary file beside `path`, then renames it into
/// place, so readers never see a half-written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
