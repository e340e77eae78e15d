//! Flat-file output: grid CSV and line-delimited key-value records.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::workspace::{CellClass, ScanResult};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("bad grid csv at line {line}: {reason}")]
    BadGrid { line: usize, reason: String },
}

/// Formats a float with six significant digits, using a plain decimal form
/// where it stays compact.
pub fn fmt_sig6(value: f64) -> String {
    if value.is_nan() {
        return "nan".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    if (-4..6).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        let mut s = format!("{value:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    } else {
        format!("{value:.5e}")
    }
}

/// Writes a classified grid as CSV rows `x,y,class,value` with the class
/// encoded 0 = dark, 1 = dark gray, 2 = light gray.
pub fn write_grid_csv<W: Write>(writer: &mut W, scan: &ScanResult) -> Result<(), ExportError> {
    let spec = &scan.spec;
    let mut buf = String::new();
    buf.push_str("x,y,class,value\n");
    for idx in 0..spec.cell_count() {
        let (ix, iy) = spec.cell_coords(idx);
        let _ = writeln!(
            buf,
            "{},{},{},{}",
            fmt_sig6(spec.x_at(ix)),
            fmt_sig6(spec.y_at(iy)),
            scan.classes[idx].code(),
            fmt_sig6(scan.values[idx])
        );
    }
    writer.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn write_grid_csv_file(path: &Path, scan: &ScanResult) -> Result<(), ExportError> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_grid_csv(&mut writer, scan)?;
    writer.flush()?;
    Ok(())
}

/// One parsed grid CSV row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub class: CellClass,
    pub value: f64,
}

/// Reads back a grid CSV written by [`write_grid_csv`].
pub fn read_grid_csv<R: Read>(reader: R) -> Result<Vec<GridRow>, ExportError> {
    let reader = BufReader::new(reader);
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "x,y,class,value" {
                return Err(ExportError::BadGrid {
                    line: 1,
                    reason: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| ExportError::BadGrid {
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields, got {}", fields.len())));
        }
        let parse = |s: &str| -> Result<f64, ExportError> {
            match s {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => s
                    .parse::<f64>()
                    .map_err(|e| bad(format!("bad float {s:?}: {e}"))),
            }
        };
        let class_code: u8 = fields[2]
            .parse()
            .map_err(|e| bad(format!("bad class {:?}: {e}", fields[2])))?;
        let class = CellClass::from_code(class_code)
            .ok_or_else(|| bad(format!("unknown class code {class_code}")))?;
        rows.push(GridRow {
            x: parse(fields[0])?,
            y: parse(fields[1])?,
            class,
            value: parse(fields[3])?,
        });
    }
    Ok(rows)
}

/// Writes line-delimited key-value records: one record per line, fields as
/// `key=value` separated by single spaces.
pub fn write_kv_records<W: Write>(
    writer: &mut W,
    records: &[Vec<(String, String)>],
) -> Result<(), ExportError> {
    let mut buf = String::new();
    for record in records {
        let mut first = true;
        for (key, value) in record {
            if !first {
                buf.push(' ');
            }
            let _ = write!(buf, "{key}={value}");
            first = false;
        }
        buf.push('\n');
    }
    writer.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn write_kv_records_file(
    path: &Path,
    records: &[Vec<(String, String)>],
) -> Result<(), ExportError> {
    let mut writer = BufWriter::new(File::create(path)?);
    write_kv_records(&mut writer, records)?;
    writer.flush()?;
    Ok(())
}
