use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::args::Format;

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Columns as a JSON object, keys in header order.
struct ColumnMap<'a>(Vec<(&'a str, &'a [f64])>);

impl Serialize for ColumnMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// A column table written either as CSV or as a JSON object of arrays.
pub struct Table<'a> {
    pub header: Vec<&'a str>,
    pub columns: Vec<&'a [f64]>,
}

impl Table<'_> {
    fn write_to<W: Write>(&self, w: W, format: Format) -> anyhow::Result<()> {
        match format {
            Format::Csv => carasolve::io::write_columns(w, &self.header, &self.columns)?,
            Format::Json => {
                let c = ColumnMap(self.header.iter().copied().zip(self.columns.iter().copied()).collect());
                let mut w = w;
                serde_json::to_writer_pretty(&mut w, &c)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// Writes `<stem>.csv` or `<stem>.json` into `dir`.
    pub fn write_file(&self, dir: &Path, stem: &str, format: Format) -> anyhow::Result<()> {
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let path = dir.join(format!("{stem}.{ext}"));
        let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        self.write_to(&mut w, format)?;
        w.flush()?;
        Ok(())
    }
}
