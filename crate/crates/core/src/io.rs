//! Plain-text trajectory I/O. Floats are written in `{:.16e}` so that a
//! round trip is exact and output is byte-for-byte reproducible.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Partition};

/// Writes `header` followed by one row per index. All columns must have equal length.
pub fn write_columns<W: Write>(mut w: W, header: &[&str], columns: &[&[f64]]) -> std::io::Result<()> {
    assert_eq!(header.len(), columns.len(), "one header per column");
    let rows = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for i in 0..rows {
        line.clear();
        for (k, col) in columns.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.16e}", col[i]));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Reads a two-column `x,y` trajectory. A non-numeric first line is taken as a header.
pub fn read_trajectory<R: BufRead>(r: R) -> Result<GridFunction> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Config(format!("reading trajectory: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            return Err(Error::Shape(format!("line {}: expected `x,y`", lineno + 1)));
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ if lineno == 0 => continue,
            _ => return Err(Error::Shape(format!("line {}: cannot parse `{line}`", lineno + 1))),
        }
    }
    GridFunction::new(Partition::new(xs)?, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let p = Partition::uniform(0.0, 1.0, 7).unwrap();
        let g = GridFunction::from_fn(&p, |x| (3.0 * x).sin() / 7.0);
        let mut buf = Vec::new();
        write_columns(&mut buf, &["x", "y"], &[g.nodes(), g.values()]).unwrap();
        let back = read_trajectory(&buf[..]).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_trajectory("x,y\n0,1\nfoo,2\n".as_bytes()).is_err());
        assert!(read_trajectory("0\n".as_bytes()).is_err());
    }
}
