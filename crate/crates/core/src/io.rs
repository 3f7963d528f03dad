//! Signal CSV files: one sample per line, `real` or `real,imag`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn read_signal<R: Read>(input: R) -> Result<Vec<Complex64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            record[i].parse().map_err(|_| {
                Error::Parse(format!("line {}: bad number '{}'", line + 1, &record[i]))
            })
        };
        let value = match record.len() {
            1 => Complex64::new(field(0)?, 0.0),
            2 => Complex64::new(field(0)?, field(1)?),
            n => {
                return Err(Error::Parse(format!(
                    "line {}: expected one or two columns, found {n}",
                    line + 1
                )))
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Writes `real,imag` per line, or `real` alone when every sample is real.
pub fn write_signal<W: Write>(out: W, signal: &[Complex64]) -> Result<()> {
    let real = signal.iter().all(|v| v.im == 0.0);
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for v in signal {
        if real {
            wtr.write_record([v.re.to_string()])?;
        } else {
            wtr.write_record([v.re.to_string(), v.im.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_signal_file(path: &Path) -> Result<Vec<Complex64>> {
    read_signal(File::open(path)?)
}

pub fn write_signal_file(path: &Path, signal: &[Complex64]) -> Result<()> {
    write_signal(File::create(path)?, signal)
}
