//! CSV and JSON writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

/// Seventeen significant digits; non-finite values become an empty field.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

pub fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// Writes to a file or standard output. A file that was not committed is
/// removed on drop, so a failed run leaves nothing behind.
pub struct Sink {
    inner: BufWriter<Box<dyn Write>>,
    path: Option<PathBuf>,
    committed: bool,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Sink {
            inner: BufWriter::new(inner),
            path: path.map(Path::to_path_buf),
            committed: false,
        })
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) -> io::Result<()> {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.inner.write_all(b",")?;
            }
            self.inner.write_all(f.as_ref().as_bytes())?;
        }
        self.inner.write_all(b"\n")
    }

    pub fn json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.inner, value)?;
        self.inner.write_all(b"\n")
    }

    pub fn commit(mut self) -> io::Result<()> {
        self.inner.flush()?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Sink {
    fn drop(&mut self) {
        if !self.committed {
            if let Some(p) = &self.path {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}
