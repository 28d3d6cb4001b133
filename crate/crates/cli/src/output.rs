//! Artifact formatting and writing.

use std::fs;
use std::io::Write;
use std::path::Path;

use eub_core::io::round_sig;

use crate::CliError;

/// Significant digits of every emitted number.
pub const DIGITS: usize = 9;

pub fn sig(x: f64) -> f64 {
    round_sig(x, DIGITS)
}

/// A number as it appears in CSV output.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", sig(x))
}

/// Writes `text` to `path` via a temporary sibling and a rename, or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io_err = |p: &Path| {
        let shown = p.display().to_string();
        move |source| CliError::Io { path: shown, source }
    };
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(io_err(Path::new("<stdout>")));
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Argument(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path)(e)
    })
}
