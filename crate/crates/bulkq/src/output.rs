//! CSV and JSON writers shared by the subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Opens `path`, or wraps `fallback` when none is given.
pub fn sink<'a>(path: Option<&Path>, fallback: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p)?))),
        None => Ok(Box::new(fallback)),
    }
}

/// A `# key=value ...` line followed by a header row and the records, LF-terminated.
pub fn write_csv(out: &mut dyn Write, echo: &[(&str, String)], header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let line: Vec<String> = echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "# {}", line.join(" "))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

#[derive(Debug, Serialize)]
pub struct ParamsJson {
    pub lambda: f64,
    pub mu: f64,
    pub m: usize,
}
