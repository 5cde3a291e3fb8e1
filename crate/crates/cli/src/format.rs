//! Number formatting and CSV emission.

use std::io::Write;

use crate::error::CliResult;

/// Decimal exponent from which values print in scientific notation.
pub const SCIENTIFIC_EXPONENT: i32 = 6;
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Nine significant digits; `1.23456789e7` style at or beyond one million.
///
/// Negative zero loses its sign; non-finite values print as `nan`, `inf`, `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (_, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if exp >= SCIENTIFIC_EXPONENT {
        sci
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    };
    strip_negative_zero(out)
}

fn strip_negative_zero(s: String) -> String {
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Writes a header and numeric rows with `,` separators and `\n` line endings.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let text: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| format_number(v)).collect())
        .collect();
    write_records(out, header, &text)
}

pub fn write_records<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parsed CSV: header names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_csv(text: &str) -> CliResult<Table> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    crate::error::CliError::Usage(format!("not a number in CSV: {s:?}"))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}
